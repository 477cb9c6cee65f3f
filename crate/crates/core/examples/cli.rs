//! Drive the command line in-process: a sigma expansion, a bracket in
//! LaTeX, and a JSON verification report.

fn main() {
    let runs: [&[&str]; 3] = [
        &["qwalg", "sigma", "--type", "D", "--rank", "4", "--i", "spinor+"],
        &["qwalg", "bracket", "--type", "A", "--rank", "2", "--i", "1", "--j", "2", "--format", "latex", "--unit", "qdiff"],
        &["qwalg", "verify", "FINALPB", "SL3-12", "--format", "json"],
    ];
    for args in runs {
        println!("$ {}", args.join(" "));
        let code = qwalg::cli::run(args.iter().copied());
        println!("exit {code}\n");
    }
}
