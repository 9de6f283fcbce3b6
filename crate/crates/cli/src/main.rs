use std::io;
use std::process::ExitCode;

use aklt_cli::args::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the parse-error code; help and version are not errors.
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let code = aklt_cli::run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
