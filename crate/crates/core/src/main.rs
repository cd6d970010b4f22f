fn main() {
    std::process::exit(ade_vertex::cli::run(std::env::args_os()));
}
