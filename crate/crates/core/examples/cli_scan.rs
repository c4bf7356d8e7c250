//! Drives the command-line front end in-process and prints what it writes.
use conformable_simpson::cli::dispatch;

fn run(args: &str) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("conformable-simpson").chain(args.split_whitespace());
    let code = dispatch(argv, None, &mut out, &mut err);
    println!("$ conformable-simpson {args}  (exit {code})");
    print!("{}", String::from_utf8_lossy(&out));
    print!("{}", String::from_utf8_lossy(&err));
}

fn main() {
    run("constants --tau 1.5 --p 2");
    run("verify identity --func exp --tau 0.5 --gamma 1 --delta 2");
    run("--format csv verify bound --theorem 4.1 --func cosh --tau 2.7 --gamma 0.5 --delta 2");
    run("--parallelism 4 scan --func-list exp,power:3 --tau-list 0.5,1.5 --theorem-list 3.3,3.9 --gamma 1 --delta 2");
    run("means --gamma 1 --delta 4 --s 3");
    run("--format pretty prop --id 5.9 --gamma 0.5 --delta 2 --rho -0.5 --q 2");
    run("specfun qdigamma --q 2 --x 1.5");
    // domain errors exit with code 2
    run("constants --tau -1");
}
