//! Golden CLI fixtures: `fixtures/<name>.json` holds the arguments, the input
//! document and the expected exit code; `<name>.out` and `<name>.err` hold
//! the expected standard output and standard error.

#![allow(dead_code)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::Value;

pub struct Fixture {
    pub name: String,
    pub args: Vec<String>,
    pub stdin: String,
    pub exit: i32,
    dir: PathBuf,
}

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn load_fixtures() -> Vec<Fixture> {
    let dir = fixture_dir();
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .expect("fixture directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let doc: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
            let args = doc["args"]
                .as_array()
                .expect("args")
                .iter()
                .map(|a| a.as_str().unwrap().to_string())
                .collect();
            let stdin = match (&doc["input"], &doc["input_text"]) {
                (Value::Null, Value::String(s)) => s.clone(),
                (v, Value::Null) => serde_json::to_string(v).unwrap(),
                _ => panic!("{}: give input or input_text", p.display()),
            };
            Fixture {
                name: p.file_stem().unwrap().to_string_lossy().into_owned(),
                args,
                stdin,
                exit: doc["exit"].as_i64().unwrap_or(0) as i32,
                dir: dir.clone(),
            }
        })
        .collect()
}

pub fn run_cli(args: &[String], stdin: &str) -> Outcome {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chowtower"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn chowtower");
    // usage errors may exit before reading stdin
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    let out = child.wait_with_output().expect("wait");
    Outcome {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        exit: out.status.code().unwrap_or(-1),
    }
}

impl Fixture {
    fn golden(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.name))
    }

    pub fn run(&self) -> Outcome {
        run_cli(&self.args, &self.stdin)
    }

    /// Compare one run against the golden files; with `bless`, rewrite them.
    pub fn check(&self, bless: bool) -> Result<(), String> {
        let got = self.run();
        if bless {
            fs::write(self.golden("out"), &got.stdout).unwrap();
            fs::write(self.golden("err"), &got.stderr).unwrap();
        }
        if got.exit != self.exit {
            return Err(format!("{}: exit {} (expected {})\n{}", self.name, got.exit, self.exit, got.stderr));
        }
        for (ext, actual) in [("out", &got.stdout), ("err", &got.stderr)] {
            let expected = fs::read_to_string(self.golden(ext))
                .map_err(|e| format!("{}: missing golden .{ext}: {e}", self.name))?;
            if &expected != actual {
                return Err(format!(
                    "{}: .{ext} differs\n--- expected\n{expected}\n--- actual\n{actual}",
                    self.name
                ));
            }
        }
        Ok(())
    }
}

pub fn blessing() -> bool {
    std::env::var_os("CHOWTOWER_BLESS").is_some()
}
