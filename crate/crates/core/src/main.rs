fn main() {
    std::process::exit(hcong::cli::run(std::env::args_os()));
}
