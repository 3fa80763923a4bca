fn main() {
    std::process::exit(stieltjes_hyp_cli::run(std::env::args_os()));
}
