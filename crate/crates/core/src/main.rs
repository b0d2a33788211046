fn main() {
    let color = fomforge::cli::color_enabled();
    let code = fomforge::cli::run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
        color,
    );
    std::process::exit(code);
}
