//! Plain-text matrix exchange format.
//!
//! One matrix is a block of lines, one row per line, entries separated
//! by whitespace; the dimension is inferred.  Blank lines separate
//! blocks; everything from a `#` to the end of its line is a comment.
//! A complex matrix is two consecutive blocks of the same shape, real
//! part then imaginary part.  Numbers are written with 17 significant
//! digits so that values round-trip exactly.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix};

/// Parse every block in the text, with 1-based line numbers in errors.
pub fn parse_matrices(text: &str) -> Result<Vec<RealMatrix>> {
    let mut blocks: Vec<RealMatrix> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut row_start_line = 0usize;

    let mut flush = |rows: &mut Vec<Vec<f64>>, line: usize| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Parse {
                line,
                msg: "rows in a block must have equal length".into(),
            });
        }
        blocks.push(RealMatrix::from_rows(rows)?);
        rows.clear();
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if content.trim().is_empty() {
            if raw.trim_start().starts_with('#') {
                continue; // Comment lines do not break a block.
            }
            flush(&mut rows, line_no)?;
            continue;
        }
        let mut parsed = Vec::new();
        for field in content.split_whitespace() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid number '{field}'"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("non-finite number '{field}'"),
                });
            }
            parsed.push(v);
        }
        if rows.is_empty() {
            row_start_line = line_no;
        }
        if let Some(first) = rows.first() {
            if parsed.len() != first.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!(
                        "row has {} entries, block starting at line {} has {}",
                        parsed.len(),
                        row_start_line,
                        first.len()
                    ),
                });
            }
        }
        rows.push(parsed);
    }
    let last = text.lines().count();
    flush(&mut rows, last)?;
    Ok(blocks)
}

/// Parse text that must contain exactly one matrix.
pub fn parse_single(text: &str) -> Result<RealMatrix> {
    let blocks = parse_matrices(text)?;
    match blocks.len() {
        1 => Ok(blocks.into_iter().next().unwrap()),
        n => Err(Error::Parse {
            line: 1,
            msg: format!("expected exactly one matrix, found {n}"),
        }),
    }
}

/// Parse text holding a complex matrix as two same-shape blocks.
pub fn parse_complex(text: &str) -> Result<ComplexMatrix> {
    let blocks = parse_matrices(text)?;
    if blocks.len() != 2 {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "expected two blocks (real then imaginary), found {}",
                blocks.len()
            ),
        });
    }
    let (re, im) = (&blocks[0], &blocks[1]);
    if re.rows() != im.rows() || re.cols() != im.cols() {
        return Err(Error::Parse {
            line: 1,
            msg: "real and imaginary blocks differ in shape".into(),
        });
    }
    Ok(ComplexMatrix::from_fn(re.rows(), re.cols(), |i, j| {
        num_complex::Complex64::new(re[(i, j)], im[(i, j)])
    }))
}

/// Format one number with 17 significant digits; negative zero is
/// normalized so output bytes are a function of the value.
pub fn format_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Format a matrix as one block.
pub fn format_matrix(m: &RealMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&format_f64(m[(i, j)]));
        }
        out.push('\n');
    }
    out
}

/// Format a complex matrix as two blocks separated by a blank line.
pub fn format_complex(m: &ComplexMatrix) -> String {
    let (re, im) = m.to_parts();
    format!("{}\n{}", format_matrix(&re), format_matrix(&im))
}
