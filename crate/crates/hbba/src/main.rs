fn main() {
    std::process::exit(hbba::cli::run());
}
