fn main() { std::process::exit(qcldpc::cli::run()); }
