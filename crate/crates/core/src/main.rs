fn main() {
    std::process::exit(cssreduce::cli::run(std::env::args_os()));
}
