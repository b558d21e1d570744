fn main() {
    let code = jdd::cli::run(std::env::args_os());
    std::process::exit(code);
}
