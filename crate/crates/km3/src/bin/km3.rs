fn main() {
    std::process::exit(km3::cli::run());
}
