fn main() {
    std::process::exit(trarep_cli::run(std::env::args_os()));
}
