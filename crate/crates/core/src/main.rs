fn main() {
    std::process::exit(cluster_teleport::cli::main_with_args(std::env::args_os()));
}
