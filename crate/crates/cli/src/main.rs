use clap::error::ErrorKind;
use clap::Parser;
use qgame_cli::commands::{run, Cli};
use qgame_cli::error::exit;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match out.csv {
                Some(csv) => print!("{csv}"),
                None => println!("{}", serde_json::to_string_pretty(&out.record).expect("serializable")),
            }
            std::process::exit(out.exit_code);
        }
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            std::process::exit(e.exit_code());
        }
    }
}
