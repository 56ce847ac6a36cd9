use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = trapred::cli::run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut out,
        &mut std::io::stderr().lock(),
    );
    let _ = out.flush();
    std::process::exit(code);
}
