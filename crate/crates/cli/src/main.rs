fn main() {
    std::process::exit(sflab_cli::dispatch(std::env::args_os()));
}
