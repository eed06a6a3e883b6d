fn main() {
    std::process::exit(netseed::cli::main());
}
