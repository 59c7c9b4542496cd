fn main() {
    std::process::exit(genfrac::cli::run());
}
