fn main() -> std::process::ExitCode {
    ptcache::cli::main()
}
