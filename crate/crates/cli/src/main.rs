use clap::Parser;
use frwtk_cli::{run, Cli};

fn main() {
    // FRWTK_THREADS caps the worker pool; default is the machine's cores
    if let Ok(threads) = std::env::var("FRWTK_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("frwtk: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
