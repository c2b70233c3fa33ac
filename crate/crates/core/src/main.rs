fn main() {
    std::process::exit(pb_synergy::cli::run(std::env::args_os()));
}
