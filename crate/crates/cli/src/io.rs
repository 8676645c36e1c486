//! JSON file formats. Complex scalars are `[re, im]` pairs and matrices are
//! row-major nested arrays of them.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use contraction_models::linalg::{c, CMat};
use serde::{Deserialize, Serialize};

pub type WireMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dim: usize,
    pub matrix: WireMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MarkedDiscFile {
    pub n_plus: usize,
    pub n_minus: usize,
    pub state_dim: usize,
    #[serde(rename = "A")]
    pub a: WireMatrix,
    #[serde(rename = "B_in")]
    pub b_in: WireMatrix,
    #[serde(rename = "C")]
    pub c: WireMatrix,
    #[serde(rename = "D")]
    pub d: WireMatrix,
    pub mark: WireMatrix,
}

/// A bare matrix, used for `--mark FILE`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub matrix: WireMatrix,
}

pub fn to_wire(m: &CMat) -> WireMatrix {
    m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// Converts a wire matrix, checking it is `rows × cols`.
pub fn from_wire(w: &WireMatrix, rows: usize, cols: usize, what: &str) -> Result<CMat> {
    if w.len() != rows {
        bail!("{what}: expected {rows} rows, found {}", w.len());
    }
    let mut m = CMat::zeros(rows, cols);
    for (i, row) in w.iter().enumerate() {
        if row.len() != cols {
            bail!("{what}: row {i} has {} entries, expected {cols}", row.len());
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                bail!("{what}: entry ({i}, {j}) is not finite");
            }
            m[(i, j)] = c(z[0], z[1]);
        }
    }
    Ok(m)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn read_operator(path: &Path) -> Result<CMat> {
    let f: OperatorFile = read_json(path)?;
    if f.dim == 0 {
        bail!("{}: dim must be positive", path.display());
    }
    from_wire(&f.matrix, f.dim, f.dim, "matrix")
}

pub fn write_operator(path: &Path, m: &CMat) -> Result<()> {
    let f = OperatorFile { dim: m.nrows(), matrix: to_wire(m) };
    let text = serde_json::to_string(&f)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_matrix(path: &Path, rows: usize, cols: usize) -> Result<CMat> {
    let f: MatrixFile = read_json(path)?;
    from_wire(&f.matrix, rows, cols, "matrix")
}

pub struct MarkedDiscData {
    pub a: CMat,
    pub b_in: CMat,
    pub c: CMat,
    pub d: CMat,
    pub mark: CMat,
}

pub fn read_marked_disc(path: &Path) -> Result<MarkedDiscData> {
    let f: MarkedDiscFile = read_json(path)?;
    let (np, nm, s) = (f.n_plus, f.n_minus, f.state_dim);
    Ok(MarkedDiscData {
        a: from_wire(&f.a, s, s, "A")?,
        b_in: from_wire(&f.b_in, s, np, "B_in")?,
        c: from_wire(&f.c, nm, s, "C")?,
        d: from_wire(&f.d, nm, np, "D")?,
        mark: from_wire(&f.mark, nm, np, "mark")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_round_trip() {
        let m = CMat::from_row_slice(2, 1, &[c(1.0, -2.0), c(0.5, 0.0)]);
        let w = to_wire(&m);
        assert_eq!(w, vec![vec![[1.0, -2.0]], vec![[0.5, 0.0]]]);
        assert_eq!(from_wire(&w, 2, 1, "m").unwrap(), m);
        assert!(from_wire(&w, 1, 2, "m").is_err());
    }

    #[test]
    fn empty_state_matrices_parse() {
        assert_eq!(from_wire(&vec![], 0, 0, "A").unwrap().shape(), (0, 0));
        assert_eq!(from_wire(&vec![vec![]], 1, 0, "C").unwrap().shape(), (1, 0));
    }
}
