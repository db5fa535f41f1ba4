use std::io;

use env_logger::Env;

fn main() {
    env_logger::Builder::from_env(Env::new().filter_or("SESSIONTILING_LOG", "info")).init();
    let code = sessiontiling::cli::run(std::env::args_os(), &mut io::stdout().lock());
    std::process::exit(code);
}
