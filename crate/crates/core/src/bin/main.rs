fn main() {
    std::process::exit(disk_resolvents::cli::run(std::env::args_os()));
}
