fn main() {
    std::process::exit(latticewire::cli::run_cli(std::env::args_os()));
}
