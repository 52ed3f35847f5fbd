use std::io::Write;

fn main() {
    let r = reeslab_cli::run_from(std::env::args_os());
    let _ = std::io::stdout().write_all(r.stdout.as_bytes());
    let _ = std::io::stderr().write_all(r.stderr.as_bytes());
    std::process::exit(r.code);
}
