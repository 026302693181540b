fn main() {
    std::process::exit(cluster_nz::cli::main_from_env());
}
