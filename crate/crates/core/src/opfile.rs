//! Plain-text operator files.
//!
//! ```text
//! d1 d2
//! <d1·d2 entries>      one line per row, row-major in the composite index
//! ...
//! ```
//!
//! Entries are whitespace separated complex literals `re±imj` such as
//! `0.5-0.5j`. Bare reals (`1`, `-0.25`) and bare imaginaries (`2j`, `-j`)
//! are accepted on input. The writer emits every entry as
//! `{re:.16e}{±}{|im|:.16e}j`, i.e. 17 significant digits, which reproduces
//! every `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{BipartiteOperator, ComplexMatrix};

/// Default unitarity tolerance for operators read from files.
pub const FILE_UNITARITY_TOL: f64 = 1e-8;

fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

/// Parses one complex literal.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let token = token.trim();
    if token.is_empty() {
        return None;
    }
    let Some(body) = token.strip_suffix(['j', 'J']) else {
        return parse_real(token).map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_real(s)?,
    };
    Some(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}j", z.re, z.im.abs())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses an operator without checking unitarity.
pub fn parse_operator(text: &str) -> Result<BipartiteOperator> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty operator file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(hline, format!("expected `d1 d2`, found `{header}`")))?;
    let [d1, d2] = dims[..] else {
        return Err(parse_err(hline, format!("expected `d1 d2`, found `{header}`")));
    };
    if d1 == 0 || d2 == 0 {
        return Err(parse_err(hline, "dimensions must be positive"));
    }
    let n = d1 * d2;

    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (lno, line) in lines {
        if rows == n {
            return Err(parse_err(lno, format!("more than {n} matrix rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let z = parse_complex(tok)
                .ok_or_else(|| parse_err(lno, format!("invalid complex literal `{tok}`")))?;
            data.push(z);
        }
        if data.len() - before != n {
            return Err(parse_err(
                lno,
                format!("expected {n} entries, found {}", data.len() - before),
            ));
        }
        rows += 1;
    }
    if rows != n {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {n} matrix rows, found {rows}"),
        ));
    }
    BipartiteOperator::new(d1, d2, ComplexMatrix::from_vec(n, n, data)?)
}

/// Parses an operator and requires `max|U†U − I| ≤ tol`.
pub fn read_operator(text: &str, tol: f64) -> Result<BipartiteOperator> {
    let op = parse_operator(text)?;
    op.ensure_unitary(tol)?;
    Ok(op)
}

pub fn load_operator(path: &Path, tol: f64) -> Result<BipartiteOperator> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_operator(&text, tol)
}

pub fn write_operator(op: &BipartiteOperator) -> String {
    let m = op.matrix();
    let mut out = format!("{} {}\n", op.d1(), op.d2());
    for r in 0..m.rows() {
        for (c, &z) in m.row(r).iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", format_complex(z));
        }
        out.push('\n');
    }
    out
}

pub fn save_operator(op: &BipartiteOperator, path: &Path) -> Result<()> {
    std::fs::write(path, write_operator(op)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_bipartite_unitary;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn literals() {
        assert_eq!(parse_complex("0.5-0.5j"), Some(z(0.5, -0.5)));
        assert_eq!(parse_complex("1"), Some(z(1.0, 0.0)));
        assert_eq!(parse_complex("-2.5"), Some(z(-2.5, 0.0)));
        assert_eq!(parse_complex("2j"), Some(z(0.0, 2.0)));
        assert_eq!(parse_complex("-j"), Some(z(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3+2.5E+2j"), Some(z(1e-3, 250.0)));
        assert_eq!(parse_complex("-1e-3-1e-3j"), Some(z(-1e-3, -1e-3)));
        assert_eq!(parse_complex("1+j"), Some(z(1.0, 1.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("nan"), None);
        assert_eq!(parse_complex("1+2"), None);
    }

    #[test]
    fn writer_format() {
        assert_eq!(format_complex(z(0.5, -0.5)), "5.0000000000000000e-1-5.0000000000000000e-1j");
        let text = write_operator(&BipartiteOperator::identity(1, 1));
        assert_eq!(text, "1 1\n1.0000000000000000e0+0.0000000000000000e0j\n");
    }

    #[test]
    fn reads_hand_written_file() {
        let text = "# swap\n2 2\n1 0 0 0\n0 0 1 0\n0 1 0 0\n0 0 0 1\n";
        let op = read_operator(text, FILE_UNITARITY_TOL).unwrap();
        assert_eq!(op, BipartiteOperator::swap(2));
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(parse_operator(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_operator("1 2\n1 0\n0 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_operator("1 2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("1 1\n1\n1\n"), Err(Error::Parse { line: 3, .. })));
        let err = read_operator("1 2\n2 0\n0 1\n", FILE_UNITARITY_TOL).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(err.to_string().contains("U†U"));
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let op = random_bipartite_unitary(d1, d2, &mut rng);
            let back = read_operator(&write_operator(&op), FILE_UNITARITY_TOL).unwrap();
            prop_assert!(back.matrix().max_abs_diff(op.matrix()) <= 1e-15);
            prop_assert_eq!(back, op);
        }
    }
}
