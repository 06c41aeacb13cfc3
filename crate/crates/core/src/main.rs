fn main() {
    std::process::exit(porous_mhd::cli::run(std::env::args_os()));
}
