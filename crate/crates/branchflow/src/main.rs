fn main() {
    std::process::exit(branchflow::cli::main_with(std::env::args_os()));
}
