#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const WORDS: &[&str] = &[
    "schools", "taxes", "safety", "health", "freedom", "jobs", "prices", "children", "future", "energy", "crime",
    "rights",
];

pub const TOPICS: [&str; 3] = ["We should ban guns", "We should fund schools", "We should tax sugar"];
pub const SIZES: [usize; 4] = [20, 18, 16, 15];

pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub arguments: PathBuf,
    pub key_points: PathBuf,
    pub labels: PathBuf,
}

impl Fixture {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// `--arguments ... --key-points ... --labels ...`
    pub fn data_args(&self) -> Vec<String> {
        vec![
            "--arguments".into(),
            self.arguments.display().to_string(),
            "--key-points".into(),
            self.key_points.display().to_string(),
            "--labels".into(),
            self.labels.display().to_string(),
        ]
    }
}

/// Three ArgKP topics with four key points each; every argument has exactly
/// one positive label, plus one negative label to another key point.
pub fn argkp_fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let mut args = String::from("arg_id,argument,topic,stance\n");
    let mut kps = String::from("key_point_id,key_point,topic,stance\n");
    let mut labels = String::from("arg_id,key_point_id,label\n");
    for (t, topic) in TOPICS.iter().enumerate() {
        for (k, &size) in SIZES.iter().enumerate() {
            writeln!(kps, "kp_{t}_{k},\"The {} matter most, {}\",{topic},1", WORDS[k], WORDS[k + 4]).unwrap();
            for m in 0..size {
                let text = format!(
                    "\"We think {} and {}, case {m}\"",
                    WORDS[(t + k + m) % WORDS.len()],
                    WORDS[(3 * m + k) % WORDS.len()]
                );
                writeln!(args, "arg_{t}_{k}_{m:02},{text},{topic},1").unwrap();
                writeln!(labels, "arg_{t}_{k}_{m:02},kp_{t}_{k},1").unwrap();
                writeln!(labels, "arg_{t}_{k}_{m:02},kp_{t}_{},0", (k + 1) % SIZES.len()).unwrap();
            }
        }
    }
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    Fixture {
        arguments: write("arguments.csv", &args),
        key_points: write("key_points.csv", &kps),
        labels: write("labels.csv", &labels),
        dir,
    }
}

pub fn kpsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpsum")).args(args).output().unwrap()
}

/// Runs `kpsum <command> <data flags> <extra...>`.
pub fn run(fixture: &Fixture, command: &str, extra: &[&str]) -> Output {
    let mut all: Vec<String> = vec![command.to_string()];
    all.extend(fixture.data_args());
    all.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = all.iter().map(String::as_str).collect();
    kpsum(&refs)
}

pub fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

pub fn stderr_error(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|e| panic!("stderr is not a JSON error report ({e}): {text}"))
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}
