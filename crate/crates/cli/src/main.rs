fn main() {
    std::process::exit(semiclab::run(std::env::args_os()));
}
