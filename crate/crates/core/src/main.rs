fn main() {
    std::process::exit(tamesys::cli::run(std::env::args_os()));
}
