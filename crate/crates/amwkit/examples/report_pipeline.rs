//! Programmatic use of the batch front-end: write a run specification,
//! execute it, and read back the deterministic report. The same pipeline
//! backs the `amwkit` binary.

use amwkit::cli::{run, CliArgs};

fn main() -> amwkit::Result<()> {
    let dir = tempfile::tempdir()?;
    let spec_path = dir.path().join("spec.json");
    std::fs::write(
        &spec_path,
        r#"{
  "command": "certify",
  "family": {
    "kind": "scaled",
    "scalars": { "kind": "harmonic" },
    "base": { "kind": "transplant", "source": { "kind": "power", "c": 1.0 } }
  }
}"#,
    )?;

    let args = CliArgs {
        spec: spec_path,
        out: dir.path().to_path_buf(),
        depth: None,
        seed: "0x5EED".into(),
        csv: true,
    };
    let code = run(&args);
    println!("exit code: {code}\n");

    println!("--- report.json ---");
    print!(
        "{}",
        std::fs::read_to_string(dir.path().join("report.json"))?
    );
    println!("--- series.csv ---");
    print!("{}", std::fs::read_to_string(dir.path().join("series.csv"))?);
    Ok(())
}
