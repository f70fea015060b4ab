// Copyright 2026 sqlaser Contributors
// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = sqlaser_cli::cli::Args::parse();
    std::process::exit(sqlaser_cli::cli::main_with(args));
}
