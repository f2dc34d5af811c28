fn main() {
    std::process::exit(hafpack::cli::main());
}
