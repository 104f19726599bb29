fn main() {
    std::process::exit(smallgain_cli::run(std::env::args_os()));
}
