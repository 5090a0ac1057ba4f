fn main() {
    std::process::exit(liepair::cli::run(std::env::args_os()));
}
