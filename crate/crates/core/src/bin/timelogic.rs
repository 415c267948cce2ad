fn main() {
    std::process::exit(timelogic::cli::dispatch(std::env::args_os()));
}
