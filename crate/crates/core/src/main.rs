fn main() {
    std::process::exit(quake_core::cli::cli_main(std::env::args()));
}
