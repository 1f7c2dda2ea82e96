fn main() -> std::process::ExitCode {
    emotrace::cli::main()
}
