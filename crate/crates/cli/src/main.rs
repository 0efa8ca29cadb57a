use std::io;

use pobasis_cli::{run, Hooks, Streams};

fn main() {
    let (mut stdin, mut stdout, mut stderr) = (io::stdin().lock(), io::stdout().lock(), io::stderr().lock());
    let streams = Streams { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr };
    std::process::exit(run(std::env::args_os(), streams, &Hooks::default()));
}
