fn main() {
    std::process::exit(nrt_cli::main_with(std::env::args_os()));
}
