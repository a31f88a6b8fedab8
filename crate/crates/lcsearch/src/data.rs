//! CSV ingestion.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lcsearch_core::{DMatrix, DVector, RegressionProblem};

/// Load a regression problem from a CSV file with a header row.
///
/// `response` names the response column; every other column is a numeric
/// covariate. With `add_intercept` an all-ones column is appended last.
/// Otherwise an existing all-ones column, if any, is recorded as the
/// intercept.
pub fn load_problem(path: &Path, response: &str, add_intercept: bool) -> Result<RegressionProblem> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let headers = reader.headers().context("cannot read CSV header")?.clone();
    let y_col = headers
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| anyhow!("response column '{response}' not found in {}", path.display()))?;
    let cov_cols: Vec<usize> = (0..headers.len()).filter(|&j| j != y_col).collect();

    let mut y = Vec::new();
    let mut x = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("malformed CSV row {}", i + 1))?;
        if record.len() != headers.len() {
            bail!("row {} has {} fields, header has {}", i + 1, record.len(), headers.len());
        }
        let cell = |j: usize| -> Result<f64> {
            let raw = &record[j];
            let v: f64 = raw
                .parse()
                .map_err(|_| anyhow!("non-numeric cell '{raw}' in row {}, column '{}'", i + 1, &headers[j]))?;
            if !v.is_finite() {
                bail!("non-finite cell in row {}, column '{}'", i + 1, &headers[j]);
            }
            Ok(v)
        };
        y.push(cell(y_col)?);
        for &j in &cov_cols {
            x.push(cell(j)?);
        }
    }
    let n = y.len();
    if n == 0 {
        bail!("{} has no data rows", path.display());
    }
    let x = DMatrix::from_row_slice(n, cov_cols.len(), &x);
    let y = DVector::from_vec(y);
    let problem = if add_intercept {
        RegressionProblem::with_intercept(x, y)
    } else {
        RegressionProblem::detect_intercept(x, y)
    };
    Ok(problem?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn csv_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn plain_parse() {
        let f = csv_file("y,x1\n1,1\n2,2\n3,3\n");
        let p = load_problem(f.path(), "y", false).unwrap();
        assert_eq!((p.n(), p.q()), (3, 1));
        assert_eq!(p.x().column(0).as_slice(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.y().as_slice(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.intercept_col(), None);
    }

    #[test]
    fn appended_intercept() {
        let f = csv_file("y,x1\n1,1\n2,2\n3,3\n");
        let p = load_problem(f.path(), "y", true).unwrap();
        assert_eq!(p.q(), 2);
        assert_eq!(p.intercept_col(), Some(1));
        assert!(p.x().column(1).iter().all(|&v| v == 1.0));
    }

    #[test]
    fn existing_ones_column_is_detected() {
        let f = csv_file("one,y,x\n1,0.5,2\n1,1.5,3\n1,0.1,4\n");
        let p = load_problem(f.path(), "y", false).unwrap();
        assert_eq!(p.intercept_col(), Some(0));
    }

    #[test]
    fn shape_with_four_covariates() {
        let mut s = String::from("a,b,y,c,d\n");
        for i in 0..100 {
            let v = i as f64;
            s.push_str(&format!("{},{},{},{},{}\n", v, v * v, v.sin(), v.cos(), 1.0 / (v + 1.0)));
        }
        let p = load_problem(csv_file(&s).path(), "y", true).unwrap();
        assert_eq!((p.n(), p.q()), (100, 5));
    }

    #[test]
    fn input_errors() {
        assert!(load_problem(Path::new("/nonexistent/file.csv"), "y", false).is_err());
        assert!(load_problem(csv_file("y,x\n1,abc\n").path(), "y", false).is_err());
        assert!(load_problem(csv_file("y,x\n").path(), "y", false).is_err());
        assert!(load_problem(csv_file("z,x\n1,2\n").path(), "y", false).is_err());
        assert!(load_problem(csv_file("y,x\n1,\n").path(), "y", false).is_err());
    }
}
