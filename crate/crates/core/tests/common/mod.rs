#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct Run(pub Output);

impl Run {
    pub fn code(&self) -> i32 {
        self.0.status.code().expect("process exited normally")
    }

    pub fn stdout(&self) -> String {
        String::from_utf8_lossy(&self.0.stdout).into_owned()
    }

    pub fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.0.stderr).into_owned()
    }

    pub fn success(&self) -> Result<&Self, String> {
        if self.code() == 0 {
            Ok(self)
        } else {
            Err(format!("exit {}: {}", self.code(), self.stderr().trim()))
        }
    }
}

pub fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_healthmine"))
        .args(args)
        .output()
        .expect("spawn healthmine");
    Run(out)
}

pub fn bundled_labeled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/labeled_400.ndjson")
}

pub fn read_csv_rows(path: &Path) -> Vec<HashMap<String, String>> {
    let mut r = csv::Reader::from_path(path).expect("readable CSV");
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            headers
                .iter()
                .map(String::from)
                .zip(rec.iter().map(String::from))
                .collect()
        })
        .collect()
}

/// `metric,value` files as a map.
pub fn read_csv_map(path: &Path) -> HashMap<String, String> {
    read_csv_rows(path)
        .into_iter()
        .map(|r| (r["metric"].clone(), r["value"].clone()))
        .collect()
}
