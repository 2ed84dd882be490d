fn main() {
    std::process::exit(de_prov::cli::run());
}
