fn main() {
    std::process::exit(rscorr::cli::run());
}
