fn main() {
    let code = ogc::cli::dispatch(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
