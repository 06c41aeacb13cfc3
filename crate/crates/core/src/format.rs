//! Number formatting for output files.

/// Shortest round-trip decimal form of `x` after rounding to at most nine
/// significant digits. Very small or large magnitudes use exponent form.
pub fn number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs();
    if (1e-5..1e16).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}
