//! `fdc`: see [`systemfd::cli`].

fn main() {
    let args: Vec<_> = std::env::args_os().collect();
    let code = systemfd::with_big_stack(move || {
        let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
        systemfd::cli::run(args, &mut out, &mut err)
    });
    std::process::exit(code);
}
