fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(kempe_minors::cli::run(&args));
}
