fn main() {
    std::process::exit(colspec::cli::run(std::env::args_os()));
}
