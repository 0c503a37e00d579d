fn main() {
    std::process::exit(hdv_cli::run(std::env::args_os()));
}
