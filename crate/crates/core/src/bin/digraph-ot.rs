fn main() {
    std::process::exit(digraph_ot::cli::run(std::env::args_os()));
}
