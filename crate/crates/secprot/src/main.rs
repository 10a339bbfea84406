fn main() {
    std::process::exit(secprot::cli::run());
}
