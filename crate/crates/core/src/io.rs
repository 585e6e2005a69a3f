//! Text file formats.
//!
//! * Matrix CSV: a header line `m,n`, then `m` lines of `n` comma-separated
//!   decimals.
//! * Vector file: one decimal per line.
//! * Trace, bounds and experiment CSVs with fixed column order.
//!
//! Reals are written with 17 significant digits so every value survives a
//! write/read round trip bit for bit. Undefined values are written `nan`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::{TrialConfig, TrialRecord};
use crate::matrix::DenseMatrix;
use crate::recovery::RecoveryResult;
use crate::theory::{BoundsRow, DaiVariant};

pub const TRACE_HEADER: &str =
    "iter,residual_norm,support_size,missed_energy,missed_energy_merged,support";
pub const BOUNDS_HEADER: &str = "delta,rho_4k,rho_3k,c_cosamp,c_sp,dai_per_k";
pub const EXPERIMENT_HEADER: &str =
    "trial,seed,m,n,K,algorithm,noise_sigma,iterations,converged,exact_recovery,relative_error,bound";

/// 17 significant digits in scientific notation; `nan`, `inf`, `-inf` for
/// non-finite values.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_real(field: &str, line: usize) -> Result<f64> {
    let t = field.trim();
    t.parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid number '{t}'"),
    })
}

fn parse_dim(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    field
        .map(str::trim)
        .and_then(|f| f.parse::<usize>().ok())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("expected {what} in header 'm,n'"),
        })
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty matrix file".into(),
    })?;
    let mut dims = header.split(',');
    let m = parse_dim(dims.next(), hline, "row count")?;
    let n = parse_dim(dims.next(), hline, "column count")?;
    if dims.next().is_some() {
        return Err(Error::Parse {
            line: hline,
            message: "header must be exactly 'm,n'".into(),
        });
    }
    let mut data = Vec::with_capacity(m * n);
    let mut rows = 0;
    for (line, text) in lines {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != n {
            return Err(Error::Parse {
                line,
                message: format!("expected {n} fields, found {}", fields.len()),
            });
        }
        for f in fields {
            data.push(parse_real(f, line)?);
        }
        rows += 1;
    }
    if rows != m {
        return Err(Error::Parse {
            line: hline,
            message: format!("header declares {m} rows, file has {rows}"),
        });
    }
    DenseMatrix::new(m, n, data)
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = format!("{},{}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|&v| format_real(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_real(l, i + 1))
        .collect()
}

pub fn format_vector(v: &[f64]) -> String {
    v.iter().map(|&x| format_real(x) + "\n").collect()
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    Ok(fs::write(path, format_matrix(a))?)
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    parse_vector(&fs::read_to_string(path)?)
}

pub fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    Ok(fs::write(path, format_vector(v))?)
}

fn opt_real(v: Option<f64>) -> String {
    v.map(format_real).unwrap_or_default()
}

pub fn trace_csv(result: &RecoveryResult) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &result.trace.records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.iteration,
            format_real(r.residual_norm),
            r.support.len(),
            opt_real(r.missed_energy),
            opt_real(r.missed_energy_merged),
            r.support
        ));
    }
    out
}

/// `dai_per_k` holds the column for `variant`.
pub fn bounds_csv(rows: &[BoundsRow], variant: DaiVariant) -> String {
    let mut out = String::from(BOUNDS_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [
            r.delta,
            r.rho_4k,
            r.rho_3k,
            r.c_cosamp,
            r.c_sp,
            r.dai_per_k(variant),
        ];
        let cells: Vec<String> = cells.iter().map(|&v| format_real(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn experiment_csv(config: &TrialConfig, records: &[TrialRecord]) -> String {
    let mut out = String::from(EXPERIMENT_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.trial,
            r.seed,
            config.m,
            config.n,
            config.k,
            config.algorithm,
            format_real(config.noise_sigma),
            r.iterations_used,
            r.converged,
            r.exact_recovery,
            format_real(r.relative_error),
            r.bound.map(|b| b.to_string()).unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recovery::{run, Algorithm, RecoveryConfig};
    use crate::sparse::SparseSignal;
    use crate::theory::bounds_row;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(f64::NAN), "nan");
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        assert_eq!(format_real(-0.1).parse::<f64>().unwrap(), -0.1);
    }

    #[test]
    fn matrix_parse_errors() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2\n1\n").is_err());
        assert!(parse_matrix("1,2\n1.0\n").is_err());
        assert!(parse_matrix("2,1\n1.0\n").is_err());
        assert!(parse_matrix("1,1\nabc\n").is_err());
        assert!(matches!(
            parse_matrix("1,2\n1,x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn matrix_text_layout() {
        let a = parse_matrix("2,2\n1,0\n0,1\n").unwrap();
        assert_eq!(a, DenseMatrix::identity(2));
        assert!(format_matrix(&a).starts_with("2,2\n"));
    }

    #[test]
    fn vector_parse() {
        assert_eq!(
            parse_vector("1\n-2.5\n\n3e-3\n").unwrap(),
            vec![1.0, -2.5, 3e-3]
        );
        assert!(parse_vector("1\nz\n").is_err());
    }

    #[test]
    fn trace_layout() {
        let a = DenseMatrix::identity(4);
        let x = SparseSignal::new(vec![0.0, 5.0, 0.0, -2.0]);
        let y = a.apply(x.values()).unwrap();
        let res = run(Algorithm::Cosamp, &a, &y, &RecoveryConfig::new(2), Some(&x)).unwrap();
        let csv = trace_csv(&res);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("1,"));
        assert!(
            lines[1].ends_with(",2,0.0000000000000000e0,0.0000000000000000e0,1;3"),
            "{}",
            lines[1]
        );

        let res = run(Algorithm::Cosamp, &a, &y, &RecoveryConfig::new(2), None).unwrap();
        assert!(trace_csv(&res)
            .lines()
            .nth(1)
            .unwrap()
            .ends_with(",2,,,1;3"));
    }

    #[test]
    fn bounds_layout() {
        let csv = bounds_csv(
            &[bounds_row(0.49, DaiVariant::SameRho)],
            DaiVariant::SameRho,
        );
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), 6);
        assert_eq!(row[4], "nan");
        assert_eq!(row[5], "nan");
    }
}
