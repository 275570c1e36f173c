fn main() {
    let code = closed_range_cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
