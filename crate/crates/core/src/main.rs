fn main() { std::process::exit(voronoi_class::cli::cli_main(std::env::args())) }
