fn main() {
    std::process::exit(oc_verifier::cli::run(std::env::args_os()));
}
