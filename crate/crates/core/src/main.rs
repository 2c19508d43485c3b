fn main() {
    std::process::exit(hurwitz_tr::cli::main_exit_code());
}
