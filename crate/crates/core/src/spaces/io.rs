//! JSON basis files:
//! `{"weight": k, "level": N, "prec": B, "cuspidal": bool, "basis": [["c0", "c1", ...], ...]}`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::basis::{SpaceBasis, Source};
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisFile {
    weight: u32,
    level: u64,
    prec: usize,
    cuspidal: bool,
    basis: Vec<Vec<String>>,
}

pub fn parse_basis(text: &str) -> Result<SpaceBasis> {
    let file: BasisFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = file
        .basis
        .iter()
        .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<Q>>>())
        .collect::<Result<Vec<_>>>()?;
    SpaceBasis::new(
        file.weight,
        file.level,
        file.prec,
        file.cuspidal,
        rows,
        Source::Fixture,
    )
}

pub fn ingest_basis(path: &Path) -> Result<SpaceBasis> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_basis(&text)
}

/// Canonical text of a basis file: one row per line, trailing newline.
pub fn render_basis(b: &SpaceBasis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"weight\": {},", b.weight());
    let _ = writeln!(out, "  \"level\": {},", b.level());
    let _ = writeln!(out, "  \"prec\": {},", b.prec());
    let _ = writeln!(out, "  \"cuspidal\": {},", b.is_cuspidal());
    if b.dim() == 0 {
        let _ = writeln!(out, "  \"basis\": []");
    } else {
        let _ = writeln!(out, "  \"basis\": [");
        for i in 0..b.dim() {
            let cells: Vec<String> = b
                .basis()
                .row(i)
                .iter()
                .map(|c| format!("\"{}\"", format_q(c)))
                .collect();
            let sep = if i + 1 < b.dim() { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
        }
        let _ = writeln!(out, "  ]");
    }
    out.push_str("}\n");
    out
}

pub fn export_basis(b: &SpaceBasis, path: &Path) -> Result<()> {
    fs::write(path, render_basis(b)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// File name used for shipped bases: `s_{k}_{N}.json` or `m_{k}_{N}.json`.
pub fn fixture_name(k: u32, n: u64, cuspidal: bool) -> String {
    format!("{}_{k}_{n}.json", if cuspidal { "s" } else { "m" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::build_sk_basis;

    #[test]
    fn render_parse_round_trip() {
        let b = build_sk_basis(12, 1, 5).unwrap();
        let text = render_basis(&b);
        assert!(text.contains("[\"0\", \"1\", \"-24\", \"252\", \"-1472\", \"4830\"]"));
        let back = parse_basis(&text).unwrap();
        assert_eq!(back.basis(), b.basis());
        assert_eq!(render_basis(&back), text);
    }

    #[test]
    fn empty_basis() {
        let b = build_sk_basis(2, 1, 3).unwrap();
        let text = render_basis(&b);
        assert!(text.contains("\"basis\": []"));
        assert_eq!(parse_basis(&text).unwrap().dim(), 0);
    }

    #[test]
    fn rejects_bad_files() {
        let five_rows = r#"{"weight": 2, "level": 11, "prec": 3, "cuspidal": true,
            "basis": [["0","1","0","0"],["0","0","1","0"],["0","0","0","1"],["0","1","1","0"],["0","1","0","1"]]}"#;
        assert!(matches!(parse_basis(five_rows), Err(Error::DimensionMismatch(_))));
        let short = r#"{"weight": 2, "level": 11, "prec": 2, "cuspidal": true, "basis": [["0","1","-2"]]}"#;
        assert!(matches!(parse_basis(short), Err(Error::InsufficientPrecision { .. })));
        assert!(matches!(parse_basis("{"), Err(Error::Parse(_))));
        let bad_q = r#"{"weight": 2, "level": 11, "prec": 3, "cuspidal": true, "basis": [["0","1","x","0"]]}"#;
        assert!(matches!(parse_basis(bad_q), Err(Error::Parse(_))));
    }
}
