fn main() {
    std::process::exit(trace_io_cli::cli_main(std::env::args_os()));
}
