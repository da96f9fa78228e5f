fn main() {
    std::process::exit(kitaev_complexity::cli::main_with_args(std::env::args_os()));
}
