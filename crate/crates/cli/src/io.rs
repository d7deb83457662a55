use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use meshsig_core::{Mesh, Point2, Signature};
use serde::Deserialize;

/// A failed command: message plus process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }
}

#[derive(Deserialize)]
struct MeshJson {
    points: Vec<[f64; 2]>,
    #[serde(default)]
    closed: bool,
    #[serde(default)]
    label: Option<String>,
}

/// Reads a mesh from JSON (by `.json` extension) or CSV. CSV carries no
/// closed flag, so `closed` applies to CSV input only.
pub fn read_mesh(path: &Path, closed: bool) -> Result<Mesh, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let (mesh, label) = if is_json {
        parse_json(&text)
    } else {
        parse_csv(&text, closed).map(|m| (m, None))
    }
    .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let label = label.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    Ok(mesh.with_label(label))
}

fn parse_json(text: &str) -> Result<(Mesh, Option<String>), String> {
    let raw: MeshJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let points = raw.points.iter().map(|&[x, y]| Point2::new(x, y)).collect();
    let mesh = Mesh::new(points, raw.closed).map_err(|e| format!("field \"points\": {e}"))?;
    Ok((mesh, raw.label))
}

pub fn parse_csv(text: &str, closed: bool) -> Result<Mesh, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(format!(
                "line {line}: expected 2 fields \"x,y\", found {}",
                record.len()
            ));
        }
        let parsed: Vec<Result<f64, _>> = record.iter().map(str::parse::<f64>).collect();
        match (&parsed[0], &parsed[1]) {
            (Ok(x), Ok(y)) => points.push(Point2::new(*x, *y)),
            // a header is allowed before the first point only
            (Err(_), Err(_)) if k == 0 => {}
            _ => {
                let bad = if parsed[0].is_err() { 0 } else { 1 };
                return Err(format!(
                    "line {line}: field {} is not a number: {:?}",
                    bad + 1,
                    &record[bad]
                ));
            }
        }
    }
    Mesh::new(points, closed).map_err(|e| e.to_string())
}

pub fn mesh_csv(mesh: &Mesh) -> String {
    let mut out = String::from("x,y\n");
    for p in mesh.points() {
        let _ = writeln!(out, "{:.16e},{:.16e}", p.x, p.y);
    }
    out
}

/// Signature table with `#` provenance lines ahead of the header.
pub fn signature_csv(sig: &Signature, provenance: &[String]) -> String {
    let mut out = String::new();
    for line in provenance {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("index,kappa,kappa_s,scheme,m1,m2\n");
    for p in &sig.points {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{},{},{}",
            p.index, p.kappa, p.kappa_s, sig.scheme, sig.spec.m1, sig.spec.m2
        );
    }
    out
}

pub fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_comments() {
        let m = parse_csv("# unit square\nx,y\n0,0\n1,0\n\n1,1\n0,1\n", true).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.is_closed());
    }

    #[test]
    fn csv_errors_name_the_line() {
        let e = parse_csv("0,0\n1,0\n1,oops\n", false).unwrap_err();
        assert!(e.starts_with("line 3: field 2"), "{e}");
        let e = parse_csv("0,0\n1,0,2\n", false).unwrap_err();
        assert!(e.starts_with("line 2:"), "{e}");
        let e = parse_csv("0,0\nx,y\n1,1\n", false).unwrap_err();
        assert!(e.starts_with("line 2:"), "{e}");
    }

    #[test]
    fn json_mesh() {
        let (m, label) =
            parse_json(r#"{"points": [[0,0],[1,0],[1,1]], "closed": true, "label": "tri"}"#)
                .unwrap();
        assert!(m.is_closed());
        assert_eq!(label.as_deref(), Some("tri"));
        assert!(parse_json(r#"{"points": [[0,0],[0,0],[1,1]]}"#).is_err());
    }

    #[test]
    fn mesh_csv_round_trips() {
        let m = parse_csv("0.1,0.7\n2.5e-3,1e10\n-3.3333333333333335,0.2\n", false).unwrap();
        let back = parse_csv(&mesh_csv(&m), false).unwrap();
        assert_eq!(m.points(), back.points());
    }
}
