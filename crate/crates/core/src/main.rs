use std::io::Write;

fn main() {
    let outcome = ntype::cli::run(std::env::args_os());
    match (&outcome.report, &outcome.out) {
        (Some(_), Some(path)) => {
            if let Err(e) = std::fs::write(path, &outcome.rendered) {
                eprintln!("cannot write {}: {e}", path.display());
                std::process::exit(3);
            }
        }
        (Some(_), None) => {
            let _ = std::io::stdout().write_all(outcome.rendered.as_bytes());
        }
        (None, _) if outcome.code == 0 => print!("{}", outcome.rendered),
        (None, _) => eprint!("{}", outcome.rendered),
    }
    std::process::exit(outcome.code);
}
