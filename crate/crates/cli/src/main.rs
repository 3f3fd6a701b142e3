use std::io::Write;

fn main() {
    let out = facloc_cli::run(std::env::args_os());
    if out.code == 2 {
        eprint!("{}", out.output);
    } else {
        let mut stdout = std::io::stdout().lock();
        // A closed pipe is not worth a panic.
        let _ = stdout.write_all(out.output.as_bytes());
        let _ = stdout.flush();
    }
    std::process::exit(out.code);
}
