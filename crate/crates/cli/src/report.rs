use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// What a command found. `lines` is the text rendering, `result` the JSON one.
#[derive(Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub lines: Vec<String>,
    pub result: Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

#[derive(Serialize, Debug)]
pub struct RunReport<'a> {
    pub command: &'a [String],
    pub status: &'static str,
    pub inputs: &'a [FileDigest],
    pub outputs: &'a [FileDigest],
    pub result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn render_json(argv: &[String], outcome: &Outcome, elapsed: Option<Duration>) -> String {
    let report = RunReport {
        command: argv,
        status: status(outcome.pass),
        inputs: &outcome.inputs,
        outputs: &outcome.outputs,
        result: &outcome.result,
        wall_time_ms: elapsed.map(|d| d.as_millis()),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    text
}

pub fn render_text(argv: &[String], outcome: &Outcome, elapsed: Option<Duration>) -> String {
    let mut text = format!("dynchoice {}\n", argv.join(" "));
    for line in &outcome.lines {
        text.push_str(line);
        text.push('\n');
    }
    for out in &outcome.outputs {
        text.push_str(&format!("wrote {} (sha256 {})\n", out.path, out.sha256));
    }
    if let Some(d) = elapsed {
        text.push_str(&format!("wall time: {} ms\n", d.as_millis()));
    }
    text.push_str(&format!("result: {}\n", status(outcome.pass)));
    text
}
