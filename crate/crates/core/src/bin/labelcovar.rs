fn main() -> std::process::ExitCode {
    labelcovar::cli::main()
}
