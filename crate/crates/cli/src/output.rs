use mfcore::{Error, ErrorKind};
use serde::Serialize;
use serde_json::json;
use std::io::Write;

use crate::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// Result of one command: the JSON document, its table rendering, and
/// whether every verdict in it passed.
pub struct Outcome {
    pub json: serde_json::Value,
    pub table: String,
    pub pass: bool,
}

impl Outcome {
    pub fn new<T: Serialize>(report: &T, table: String, pass: bool) -> Self {
        Outcome {
            json: serde_json::to_value(report).expect("reports serialize"),
            table,
            pass,
        }
    }
}

pub fn emit(format: Format, outcome: &Outcome) -> u8 {
    match format {
        Format::Json => print_stdout(&format!(
            "{}\n",
            serde_json::to_string_pretty(&outcome.json).expect("json values serialize")
        )),
        Format::Table => print_stdout(&outcome.table),
    }
    if outcome.pass {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

pub fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Verification => EXIT_VERIFY,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Usage => EXIT_USAGE,
    }
}

pub fn emit_error(format: Format, e: &Error) -> u8 {
    let code = exit_code(e);
    eprintln!("error[{}]: {e}", e.code());
    if format == Format::Json {
        let mut doc = json!({ "error": { "code": e.code(), "message": e.to_string() } });
        if code == EXIT_VERIFY {
            doc["verdict"] = json!("fail");
        }
        print_stdout(&format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("json values serialize")
        ));
    }
    code
}

/// Plain-text table with left-aligned columns.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.iter().map(|s| s.to_string()).collect());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}
