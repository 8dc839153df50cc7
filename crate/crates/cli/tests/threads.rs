use std::path::PathBuf;

use braess_cli::{run_command, EXIT_OK, EXIT_USAGE, THREADS_ENV};

// Kept in its own binary: the variable is process-wide.
#[test]
fn thread_count_from_environment() {
    let theta = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/theta.json").display().to_string();
    std::env::set_var(THREADS_ENV, "2");
    let o = run_command(["braess", "worst-nash", "-i", &theta]);
    assert_eq!(o.exit_code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.document.unwrap().outputs["worst_nash_cost"], "1/1");
    std::env::set_var(THREADS_ENV, "zero");
    assert_eq!(run_command(["braess", "paths", "-i", &theta]).exit_code, EXIT_USAGE);
    std::env::remove_var(THREADS_ENV);
}
