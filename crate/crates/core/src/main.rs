fn main() {
    std::process::exit(dirac_step::cli::run(std::env::args_os()));
}
