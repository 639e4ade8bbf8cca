//! Driving the config-based pipelines programmatically.
//!
//! The `framelab` binary is a thin wrapper over `runner::run`; this example
//! builds a config in code, runs two subcommands against it, and shows the
//! report verdicts plus the produced files.
//!
//! Run with: cargo run --example cli_reports

use framelab::config::RunConfig;
use framelab::runner;

fn main() {
    let dir = std::env::temp_dir().join("framelab_cli_example");
    let config = RunConfig::from_json_str(
        r#"{
            "system": {"kind": "explicit",
                       "vectors": [[1,0],[0,1],[0.7071067811865476,0.7071067811865476]]},
            "truncation": 3,
            "band": [0.9, 1.1],
            "seed": 42
        }"#,
    )
    .expect("valid config");

    for command in ["spectrum", "band"] {
        let report = runner::run(command, &config, &dir).expect("run");
        println!("`{command}` verdicts:");
        for (name, pass) in &report.verdicts {
            println!("  {name}: {}", if *pass { "pass" } else { "FAIL" });
        }
        assert!(report.all_pass());
    }

    println!("\nfiles under {}:", dir.display());
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .expect("read dir")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    println!("\nthe same pipelines are available from the shell:");
    println!("  framelab band --config config.json --out reports/");
}
