use std::io::Read;
use std::process::ExitCode;

use rankone_cli::{run_document, Outcome};

const USAGE: &str = "usage: rankone [CONFIG.json | -]\n\
    Runs the command described by a JSON configuration document, read from\n\
    the given file, or from standard input when the argument is `-` or absent.";

fn read_document() -> Result<String, String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.as_slice() {
        [] => read_stdin(),
        [path] if path == "-" => read_stdin(),
        [path] if path == "--help" || path == "-h" => Err(USAGE.to_string()),
        [path] => std::fs::read_to_string(path)
            .map_err(|error| format!("config error: cannot read `{path}`: {error}")),
        _ => Err(USAGE.to_string()),
    }
}

fn read_stdin() -> Result<String, String> {
    let mut document = String::new();
    std::io::stdin()
        .read_to_string(&mut document)
        .map_err(|error| format!("config error: cannot read standard input: {error}"))?;
    Ok(document)
}

fn main() -> ExitCode {
    let document = match read_document() {
        Ok(document) => document,
        Err(message) => {
            eprintln!("{message}");
            return ExitCode::from(1);
        }
    };
    match run_document(&document) {
        Outcome::Artifact { body, out, exit } => {
            if let Some(path) = out {
                if let Err(error) = std::fs::write(&path, &body) {
                    eprintln!("cannot write `{}`: {error}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{body}");
            }
            ExitCode::from(exit as u8)
        }
        Outcome::Failure { message, exit } => {
            eprintln!("{message}");
            ExitCode::from(exit as u8)
        }
    }
}
