fn main() {
    std::process::exit(hsstokes_cli::run(std::env::args_os()));
}
