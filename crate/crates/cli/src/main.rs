fn main() {
    std::process::exit(seqnystrom_cli::run(std::env::args().collect()));
}
