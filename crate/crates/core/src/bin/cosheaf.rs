fn main() {
    std::process::exit(cosheaf::io::cli::run());
}
