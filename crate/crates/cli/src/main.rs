fn main() {
    std::process::exit(slr_tool::main_with_args(std::env::args_os()));
}
