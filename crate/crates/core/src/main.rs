fn main() {
    std::process::exit(entropic_bell::cli::main());
}
