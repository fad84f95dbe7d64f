fn main() {
    std::process::exit(osfol::cli::main(std::env::args_os()));
}
