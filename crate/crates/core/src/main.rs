use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (result, code) = ke_fillings::cli::run(&args);
    for line in &result.diagnostics {
        eprintln!("{line}");
    }
    if result.status == ke_fillings::cli::Status::Ok || result.json {
        print!("{}", result.text);
    } else {
        eprint!("{}", result.text);
    }
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
