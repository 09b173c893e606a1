//! Headerless CSV for matrices and vectors: one row per line, `.` decimal.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::numkit::matrix::DenseMatrix;
use crate::numkit::vector::DenseVector;

pub fn matrix_to_csv(a: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// A vector is written as a single column.
pub fn vector_to_csv(v: &DenseVector) -> String {
    let mut out = String::new();
    for x in v {
        let _ = writeln!(out, "{x:?}");
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<DenseMatrix> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(|cell| {
                    cell.trim().parse::<f64>().map_err(|e| {
                        Error::Parse(format!("line {}: `{}`: {e}", i + 1, cell.trim()))
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DenseMatrix::from_rows(&rows)
}

/// Accepts a single column or a single row.
pub fn vector_from_csv(text: &str) -> Result<DenseVector> {
    let m = matrix_from_csv(text)?;
    if m.cols() == 1 || m.rows() == 1 {
        DenseVector::new(m.data().to_vec())
    } else {
        Err(Error::Parse(format!(
            "expected a single row or column, got {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matrix_roundtrip(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let mut s = crate::numkit::GaussianStream::new(seed);
            let a = DenseMatrix::new(rows, cols, s.gaussians(rows * cols)).unwrap();
            let back = matrix_from_csv(&matrix_to_csv(&a)).unwrap();
            prop_assert_eq!(a, back);
        }
    }

    #[test]
    fn vector_column_and_row() {
        let v = DenseVector::from(vec![1.5, -2.0, 1e-300]);
        assert_eq!(vector_from_csv(&vector_to_csv(&v)).unwrap(), v);
        assert_eq!(vector_from_csv("1,2,3\n").unwrap().as_slice(), &[1.0, 2.0, 3.0]);
        assert!(vector_from_csv("1,2\n3,4\n").is_err());
        assert!(vector_from_csv("1,x\n").is_err());
    }
}
