fn main() {
    std::process::exit(detour::cli::run());
}
