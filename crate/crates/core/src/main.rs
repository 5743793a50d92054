fn main() {
    std::process::exit(revgraph::cli::main());
}
