use std::io;

fn main() {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = qrl_cli::run(
        std::env::args_os(),
        qrl_cli::Io {
            stdin: &mut stdin.lock(),
            stdout: &mut stdout.lock(),
            stderr: &mut stderr.lock(),
            env_seed: std::env::var(qrl_cli::SEED_ENV).ok(),
        },
    );
    std::process::exit(code);
}
