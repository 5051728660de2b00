fn main() {
    std::process::exit(dunkl::cli::run(std::env::args_os()));
}
