fn main() {
    std::process::exit(gse_core::cli::main_entry());
}
