//! Text format for generating matrices:
//!
//! ```text
//! b s l d
//! <l rows of d space-separated digits for G_1>
//! ...
//! <l rows of d space-separated digits for G_s>
//! ```

use std::path::Path;

use crate::basefield::MatrixZb;
use crate::error::{Error, Result};

use super::GeneratingMatrices;

pub fn write_matrices(g: &GeneratingMatrices) -> String {
    let mut out = format!("{} {} {} {}\n", g.base(), g.dim(), g.precision(), g.log_size());
    for m in g.matrices() {
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(u8::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_matrices(text: &str) -> Result<GeneratingMatrices> {
    let mut lines = text.lines().enumerate().map(|(n, line)| (n + 1, line));
    let bad = |line: usize, message: String| Error::MatrixFormat { line, message };

    let (hline, header) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let fields: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| bad(hline, format!("bad header field {t:?}"))))
        .collect::<Result<_>>()?;
    let [b, s, l, d] = fields[..] else {
        return Err(bad(hline, format!("header needs 4 fields \"b s l d\", got {}", fields.len())));
    };
    if !(2..=255).contains(&b) || s == 0 || d == 0 || d > l {
        return Err(bad(hline, format!("invalid header values b={b} s={s} l={l} d={d}")));
    }
    let (s, l, d) = (s as usize, l as usize, d as usize);

    let mut matrices = Vec::with_capacity(s);
    for _ in 0..s {
        let mut entries = Vec::with_capacity(l * d);
        for _ in 0..l {
            let (n, line) = lines
                .next()
                .ok_or_else(|| bad(hline, format!("expected {} matrix rows", s * l)))?;
            let row: Vec<u8> = line
                .split_whitespace()
                .map(|t| match t.parse::<u8>() {
                    Ok(x) if (x as u64) < b => Ok(x),
                    _ => Err(bad(n, format!("bad digit {t:?} for base {b}"))),
                })
                .collect::<Result<_>>()?;
            if row.len() != d {
                return Err(bad(n, format!("expected {d} digits, got {}", row.len())));
            }
            entries.extend(row);
        }
        matrices.push(MatrixZb::new(b as u32, l, d, entries)?);
    }
    if let Some((n, line)) = lines.find(|(_, line)| !line.trim().is_empty()) {
        return Err(bad(n, format!("unexpected trailing content {line:?}")));
    }
    GeneratingMatrices::new(matrices)
}

pub fn read_matrices(path: &Path) -> Result<GeneratingMatrices> {
    parse_matrices(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_text() {
        let g = GeneratingMatrices::new(vec![
            MatrixZb::from_rows(3, &[vec![1, 2], vec![0, 1], vec![2, 2]]).unwrap(),
            MatrixZb::identity(3, 3, 2).unwrap(),
        ])
        .unwrap();
        let text = write_matrices(&g);
        assert_eq!(text, "3 2 3 2\n1 2\n0 1\n2 2\n1 0\n0 1\n0 0\n");
        assert_eq!(parse_matrices(&text).unwrap(), g);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_matrices("2 1 2 1\n1\nx\n").unwrap_err();
        assert!(matches!(err, Error::MatrixFormat { line: 3, .. }), "{err}");
        let err = parse_matrices("2 1 2 1\n1\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::MatrixFormat { line: 3, .. }));
        let err = parse_matrices("2 1 2\n").unwrap_err();
        assert!(matches!(err, Error::MatrixFormat { line: 1, .. }));
        let err = parse_matrices("2 1 1 1\n2\n").unwrap_err();
        assert!(matches!(err, Error::MatrixFormat { line: 2, .. }));
        let err = parse_matrices("2 1 1 1\n1\n1\n").unwrap_err();
        assert!(matches!(err, Error::MatrixFormat { line: 3, .. }));
        assert!(parse_matrices("2 1 1 2\n").is_err());
    }
}
