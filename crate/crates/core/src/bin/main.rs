fn main() {
    std::process::exit(meridian_map::cli::run(std::env::args_os()));
}
