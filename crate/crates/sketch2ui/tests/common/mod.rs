#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use sketch2ui::pipeline::{run, Mode, PipelineConfig};
use sketch2ui_core::{EmitOptions, Target};

pub const GOLDEN: [&str; 3] = ["login", "survey", "gallery"];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn classes() -> PathBuf {
    fixtures().join("classes.csv")
}

/// IR, HTML and Android XML for one golden fixture, as (file name, contents).
pub fn render_golden(name: &str) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for target in Target::ALL {
        let mut config = PipelineConfig::new(
            fixtures().join("golden").join(format!("{name}.csv")),
            classes(),
            "unused",
        );
        config.target = target;
        let result = run(&config, Mode::Compile, &EmitOptions::default()).expect("golden fixture compiles");
        for (path, contents) in result.files {
            let file = path.file_name().unwrap().to_string_lossy().into_owned();
            if !out.iter().any(|(f, _)| *f == file) {
                out.push((file, contents));
            }
        }
    }
    out
}

/// Compares every golden output with the checked-in copy. With `update`,
/// rewrites the checked-in copies instead.
pub fn check_golden(update: bool) -> Vec<String> {
    let dir = fixtures().join("golden").join("expected");
    let mut mismatches = Vec::new();
    for name in GOLDEN {
        for (file, contents) in render_golden(name) {
            let path = dir.join(&file);
            if update {
                fs::write(&path, &contents).unwrap();
                continue;
            }
            match fs::read_to_string(&path) {
                Ok(expected) if expected == contents => {}
                Ok(_) => mismatches.push(format!("{file}: differs")),
                Err(e) => mismatches.push(format!("{file}: {e}")),
            }
        }
    }
    mismatches
}
