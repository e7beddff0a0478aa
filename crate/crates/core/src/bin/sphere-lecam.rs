fn main() {
    std::process::exit(sphere_lecam::cli::run(std::env::args_os()));
}
