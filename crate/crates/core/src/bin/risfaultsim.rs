fn main() {
    std::process::exit(risfaultsim::cli::run(std::env::args_os()));
}
