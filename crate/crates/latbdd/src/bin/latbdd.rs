fn main() {
    std::process::exit(latbdd::cli::cli_main(std::env::args_os()));
}
