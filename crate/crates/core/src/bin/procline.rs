fn main() {
    std::process::exit(procline::cli::run());
}
