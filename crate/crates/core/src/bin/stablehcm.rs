fn main() {
    std::process::exit(stablehcm::cli::main_with(std::env::args_os()));
}
