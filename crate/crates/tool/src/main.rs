fn main() {
    std::process::exit(pisot_wfa_tool::cli::main_with(std::env::args_os()));
}
