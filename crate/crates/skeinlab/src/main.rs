fn main() {
    let (code, out) = skeinlab::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
