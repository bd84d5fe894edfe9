fn main() {
    std::process::exit(dimerlab_cli::run(std::env::args_os()));
}
