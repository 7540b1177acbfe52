fn main() { std::process::exit(k3strata::cli::run(std::env::args().collect())); }
