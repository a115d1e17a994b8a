fn main() {
    std::process::exit(grouptest::cli::main());
}
