//! Drives the command-line interface in-process, capturing its output.

use abelian_prym::cli;

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["abelian-prym", "verify", "--json"], &mut out, &mut err);
    println!("exit {code}");
    print!("{}", String::from_utf8_lossy(&out));

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["abelian-prym", "analyze", "/no/such/file"], &mut out, &mut err);
    println!("exit {code}: {}", String::from_utf8_lossy(&err).trim());
}
