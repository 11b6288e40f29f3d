fn main() {
    std::process::exit(anticonc::cli::main_exit());
}
