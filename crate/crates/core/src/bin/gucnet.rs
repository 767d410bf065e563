fn main() {
    std::process::exit(gucnet::cli::run(std::env::args_os()));
}
