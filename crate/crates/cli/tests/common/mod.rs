#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_safemdp"));
    cmd.env_remove("SAFEMDP_OUT");
    cmd
}

pub fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("binary runs")
}

pub fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// A small synthetic crater config with output into `out`.
pub fn small_config(out: &Path, seeds: &str, extra_terrain: &str) -> String {
    format!(
        r#"[terrain]
source = "synth"
rows = 12
cols = 12
hill_amplitude = 0.0
crater_row = 8.0
crater_col = 4.0
crater_radius = 3.0
crater_depth = 4.0
{extra_terrain}

[safety]
h = "derived"
seed_row = 1
seed_col = 10

[explorer]
max_iterations = 60
seeds = {seeds}

[output]
dir = "{}"
"#,
        out.display()
    )
}

pub fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn metric(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}:")))
        .unwrap_or_else(|| panic!("no {key} in metrics"))
        .trim()
        .to_string()
}
