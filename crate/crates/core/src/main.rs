fn main() {
    std::process::exit(leafbranch::cli::main_with_args(std::env::args_os()));
}
