fn main() {
    std::process::exit(fas_evt::cli::run());
}
