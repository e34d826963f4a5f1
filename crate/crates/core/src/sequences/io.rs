//! Plain-text sequence files: one `RE IM` pair per line, `#` comments.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use super::{ComplexSequence, Provenance};
use crate::error::{Error, Result};

pub fn read_sequence(path: impl AsRef<Path>) -> Result<ComplexSequence> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (re, im) = match (fields.next(), fields.next(), fields.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => return Err(parse_err(i + 1, format!("expected \"RE IM\", found {line:?}"))),
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(i + 1, format!("not a finite decimal: {s:?}")))
        };
        values.push(Complex64::new(parse(re)?, parse(im)?));
    }
    if values.is_empty() {
        return Err(Error::invalid(format!(
            "{}: file contains no values (N = 0)",
            path.display()
        )));
    }
    ComplexSequence::new(
        values,
        Provenance::File {
            path: path.display().to_string(),
        },
    )
}

/// Writes shortest round-trip decimals, so reading the file back yields
/// bit-identical values.
pub fn write_sequence(path: impl AsRef<Path>, seq: &ComplexSequence) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(seq.len() * 8);
    out.push_str(&format!("# {}\n", seq.provenance()));
    for z in seq.values() {
        out.push_str(&format!("{:?} {:?}\n", z.re, z.im));
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{mobius_sequence, polynomial_phase_sequence};

    #[test]
    fn mobius_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mu.txt");
        let mu = mobius_sequence(100).unwrap();
        write_sequence(&path, &mu).unwrap();
        let back = read_sequence(&path).unwrap();
        assert_eq!(back.values(), mu.values());
    }

    #[test]
    fn full_precision_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phase.txt");
        let s = polynomial_phase_sequence(0.123_456_789_012_345_68, 3, 500).unwrap();
        write_sequence(&path, &s).unwrap();
        assert_eq!(read_sequence(&path).unwrap().values(), s.values());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        fs::write(&path, "1 0\n-1 0\nabc\n").unwrap();
        match read_sequence(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_and_missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.txt");
        fs::write(&path, "# only a comment\n").unwrap();
        assert!(matches!(read_sequence(&path), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            read_sequence(dir.path().join("nope.txt")),
            Err(Error::Io { .. })
        ));
    }
}
