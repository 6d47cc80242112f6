fn main() {
    std::process::exit(seqscan::cli::run());
}
