fn main() {
    std::process::exit(qwv::cli::dispatch(std::env::args_os()));
}
