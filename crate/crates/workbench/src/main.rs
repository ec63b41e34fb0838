fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, report) = vpcsp::run(&args);
    if let Some(r) = report {
        if let Err(e) = vpcsp::emit(&args, &r) {
            eprintln!("error: cannot write the report: {e}");
            std::process::exit(vpcsp::exit::USAGE);
        }
    }
    std::process::exit(code);
}
