//! Matrix and report I/O: bit-exact JSON round trips, 17-digit CSV, and the
//! spec strings for kernels and partitions on the command line.

use crate::report::fmt17;
use crate::{CliError, Result};
use schur_core::discretize::{uniform_partition, KernelKind, KernelSpec, Partition, Rect, StepFunction};
use schur_core::Matrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

pub fn write_matrix_json(path: &Path, m: &Matrix) -> Result<()> {
    let mj = MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        data: m.data().to_vec(),
    };
    std::fs::write(path, serde_json::to_string(&mj)?)?;
    Ok(())
}

pub fn read_matrix_json(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)?;
    let mj: MatrixJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if mj.data.len() != mj.rows * mj.cols {
        return Err(CliError::Parse(format!(
            "{}: rows*cols = {} but data has {} entries",
            path.display(),
            mj.rows * mj.cols,
            mj.data.len()
        )));
    }
    Ok(Matrix::new(mj.rows, mj.cols, mj.data)?)
}

/// CSV export, one row per line, 17 significant digits per entry.
pub fn matrix_to_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| fmt17(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<Matrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match cols {
            None => cols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(CliError::Parse(format!(
                    "line {}: expected {c} fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            _ => {}
        }
        for (fieldno, f) in fields.iter().enumerate() {
            let v: f64 = f.trim().parse().map_err(|_| {
                CliError::Parse(format!(
                    "line {}, field {}: cannot parse '{}' as a number",
                    lineno + 1,
                    fieldno + 1,
                    f
                ))
            })?;
            data.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| CliError::Parse("empty csv".into()))?;
    Ok(Matrix::new(rows, cols, data)?)
}

/// Partition spec string: `uniform:<a>:<b>:<n>`.
pub fn parse_partition(s: &str) -> Result<Partition> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["uniform", a, b, n] => {
            let a: f64 = a
                .parse()
                .map_err(|_| CliError::Parse(format!("bad partition start '{a}'")))?;
            let b: f64 = b
                .parse()
                .map_err(|_| CliError::Parse(format!("bad partition end '{b}'")))?;
            let n: usize = n
                .parse()
                .map_err(|_| CliError::Parse(format!("bad cell count '{n}'")))?;
            Ok(uniform_partition(a, b, n)?)
        }
        _ => Err(CliError::Parse(format!(
            "unknown partition spec '{s}' (expected uniform:<a>:<b>:<n>)"
        ))),
    }
}

/// Kernel spec string: `signstep`, `const:<c>`, `gauss:<sigma>`, or
/// `grid:<path>` (a matrix JSON treated as piecewise constant on a uniform
/// grid over the domain).
pub fn parse_kernel(s: &str, domain: Rect) -> Result<KernelSpec> {
    if s == "signstep" {
        return Ok(KernelSpec::new(KernelKind::SignStep, domain));
    }
    if let Some(c) = s.strip_prefix("const:") {
        let c: f64 = c
            .parse()
            .map_err(|_| CliError::Parse(format!("bad constant '{c}'")))?;
        return Ok(KernelSpec::new(KernelKind::Constant(c), domain));
    }
    if let Some(sigma) = s.strip_prefix("gauss:") {
        let sigma: f64 = sigma
            .parse()
            .map_err(|_| CliError::Parse(format!("bad sigma '{sigma}'")))?;
        if sigma <= 0.0 {
            return Err(CliError::Parse("sigma must be positive".into()));
        }
        return Ok(KernelSpec::new(KernelKind::Gaussian(sigma), domain));
    }
    if let Some(path) = s.strip_prefix("grid:") {
        let values = read_matrix_json(Path::new(path))?;
        let pa = uniform_partition(domain.s.0, domain.s.1, values.cols())?;
        let pb = uniform_partition(domain.t.0, domain.t.1, values.rows())?;
        return Ok(KernelSpec::new(KernelKind::Grid { values, pa, pb }, domain));
    }
    Err(CliError::Parse(format!(
        "unknown kernel spec '{s}' (expected signstep | const:<c> | gauss:<sigma> | grid:<path>)"
    )))
}

/// Product-kernel helper used by tests and experiments: step functions from
/// coefficient lists over a uniform partition of the domain edge.
pub fn product_kernel(
    domain: Rect,
    f_coeffs: &[f64],
    g_coeffs: &[f64],
) -> Result<KernelSpec> {
    let fp = uniform_partition(domain.s.0, domain.s.1, f_coeffs.len())?;
    let gp = uniform_partition(domain.t.0, domain.t.1, g_coeffs.len())?;
    let f = StepFunction::new(fp, f_coeffs.to_vec())?;
    let g = StepFunction::new(gp, g_coeffs.to_vec())?;
    Ok(KernelSpec::new(KernelKind::Product(f, g), domain))
}
