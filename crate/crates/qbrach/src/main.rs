fn main() {
    std::process::exit(qbrach::cli::main());
}
