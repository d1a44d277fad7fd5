fn main() {
    std::process::exit(semicontract::harness::cli_main(std::env::args_os()));
}
