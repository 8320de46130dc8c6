fn main() {
    std::process::exit(opmodel_cli::run(std::env::args_os()));
}
