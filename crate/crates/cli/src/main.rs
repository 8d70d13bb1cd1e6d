use std::io::{self, Write};

fn main() {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = warpstab_cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
