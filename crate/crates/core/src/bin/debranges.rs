use clap::Parser;
use debranges::cli::{exit_code, run, CliArgs};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DEBRANGES_LOG", "warn")).init();
    let args = match CliArgs::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = args.into_config().and_then(|c| run(&c));
    match &result {
        Ok(o) if !o.passed => eprintln!("verification failed"),
        Err(e) => eprintln!("error: {e}"),
        Ok(_) => {}
    }
    std::process::exit(exit_code(&result));
}
