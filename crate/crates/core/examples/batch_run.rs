//! Running a grid of maps, curves and points from a JSON config in parallel.

use dmlwb::batch::{run_batch, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("dmlwb-batch-example");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("shift.json"), r#"{"f1": "x + 1", "f2": "-y"}"#)?;
    std::fs::write(dir.join("flip.json"), r#"{"f1": "-x", "f2": "-y"}"#)?;
    let cfg = ExperimentConfig::from_json(
        r#"{"maps": ["shift.json", "flip.json"], "curves": ["y - 1", "x - 1"],
            "points": ["0,1", "1,1"], "horizon": 30}"#,
    )?
    .resolve(&dir)?;
    let out = run_batch(&cfg, 4)?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}
