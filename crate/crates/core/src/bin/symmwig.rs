fn main() {
    std::process::exit(symmwig::cli::dispatch(std::env::args_os()));
}
