fn main() {
    std::process::exit(conformable_simpson::cli::main_with_env());
}
