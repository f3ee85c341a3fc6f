fn main() {
    std::process::exit(mopip::cli::main_with_env());
}
