fn main() {
    std::process::exit(vis_enrich::cli::run(std::env::args_os()));
}
