use clap::Parser;

use lagcomplex_cli::commands::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let rendered = report.render(cli.json);
            print!("{rendered}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: {}: {e}", path.display());
                    std::process::exit(2);
                }
            }
            std::process::exit(report.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
