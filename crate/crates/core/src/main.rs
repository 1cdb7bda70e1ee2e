fn main() -> std::process::ExitCode {
    dephase_ee::cli::main_with_args(std::env::args())
}
