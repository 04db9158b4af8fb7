//! Dense square matrices over F_p, the signed index line and the two
//! dagger involutions.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::Prime;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    p: Prime,
    d: Vec<u32>,
}

impl Mat {
    pub fn zeros(n: usize, p: Prime) -> Self {
        Mat { n, p, d: vec![0; n * n] }
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        let mut m = Self::zeros(n, p);
        for i in 0..n {
            m.d[i * n + i] = 1;
        }
        m
    }

    /// Matrix unit with a single entry `v` at (i, j).
    pub fn unit(n: usize, p: Prime, i: usize, j: usize, v: i64) -> Self {
        let mut m = Self::zeros(n, p);
        m.set(i, j, p.reduce(v));
        m
    }

    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n, p);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension(format!("row {} has length {}, expected {}", i, r.len(), n)));
            }
            for (j, &v) in r.iter().enumerate() {
                m.d[i * n + j] = p.reduce(v);
            }
        }
        Ok(m)
    }

    pub fn diag(p: Prime, entries: &[u32]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, p);
        for (i, &v) in entries.iter().enumerate() {
            m.d[i * n + i] = v % p.get();
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.d[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[u32] {
        &self.d
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.d.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    fn check(&self, o: &Mat) -> Result<()> {
        if self.n != o.n || self.p != o.p {
            return Err(Error::Dimension(format!("{}x{} vs {}x{}", self.n, self.n, o.n, o.n)));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        debug_assert!(self.check(o).is_ok());
        let n = self.n;
        let p = self.p.get() as u64;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.d[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                let row = &o.d[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] = ((dst[j] as u64 + a * row[j] as u64) % p) as u32;
                }
            }
        }
        Mat { n, p: self.p, d: out }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        debug_assert!(self.check(o).is_ok());
        Mat { n: self.n, p: self.p, d: self.d.iter().zip(&o.d).map(|(&a, &b)| self.p.add(a, b)).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        debug_assert!(self.check(o).is_ok());
        Mat { n: self.n, p: self.p, d: self.d.iter().zip(&o.d).map(|(&a, &b)| self.p.sub(a, b)).collect() }
    }

    pub fn neg(&self) -> Mat {
        Mat { n: self.n, p: self.p, d: self.d.iter().map(|&a| self.p.neg(a)).collect() }
    }

    pub fn scale(&self, s: u32) -> Mat {
        Mat { n: self.n, p: self.p, d: self.d.iter().map(|&a| self.p.mul(a, s)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = Self::zeros(n, self.p);
        for i in 0..n {
            for j in 0..n {
                out.d[j * n + i] = self.d[i * n + j];
            }
        }
        out
    }

    /// Keeps the entries where `keep(i, j)` holds and zeroes the rest.
    pub fn masked(&self, keep: impl Fn(usize, usize) -> bool) -> Mat {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if !keep(i, j) {
                    out.d[i * self.n + j] = 0;
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<usize> = (0..self.n).collect();
        self.submatrix_rank(&rows, &rows)
    }

    /// Rank of the submatrix on the given row and column positions.
    pub fn submatrix_rank(&self, rows: &[usize], cols: &[usize]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j)).collect()).collect();
        rank_rows(self.p, &mut m)
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.n;
        let p = self.p;
        let mut a: Vec<Vec<u32>> = self.rows();
        let mut inv = Mat::identity(n, p).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0).ok_or(Error::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = p.inv(a[col][col])?;
            for j in 0..n {
                a[col][j] = p.mul(a[col][j], s);
                inv[col][j] = p.mul(inv[col][j], s);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for j in 0..n {
                        a[r][j] = p.sub(a[r][j], p.mul(f, a[col][j]));
                        inv[r][j] = p.sub(inv[r][j], p.mul(f, inv[col][j]));
                    }
                }
            }
        }
        let mut out = Mat::zeros(n, p);
        for i in 0..n {
            for j in 0..n {
                out.d[i * n + j] = inv[i][j];
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }
}

/// Row rank of a rectangular matrix, destroying its contents.
pub fn rank_rows(p: Prime, m: &mut [Vec<u32>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let s = p.inv(m[r][c]).expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = p.mul(m[r][j], s);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let t = p.mul(f, m[r][j]);
                    m[i][j] = p.sub(m[i][j], t);
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    Add,
    Rank,
    Inverse,
    Transpose,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatValue {
    Matrix(Mat),
    Integer(usize),
}

/// Matrix operations; `b` is only read by `Mul` and `Add`.
pub fn mat_arith(a: &Mat, b: &Mat, op: MatOp) -> Result<MatValue> {
    Ok(match op {
        MatOp::Mul => {
            a.check(b)?;
            MatValue::Matrix(a.mul(b))
        }
        MatOp::Add => {
            a.check(b)?;
            MatValue::Matrix(a.add(b))
        }
        MatOp::Rank => MatValue::Integer(a.rank()),
        MatOp::Inverse => MatValue::Matrix(a.inverse()?),
        MatOp::Transpose => MatValue::Matrix(a.transpose()),
    })
}

/// Rank of the block `rows × cols` given as position ranges.
pub fn block_rank(x: &Mat, rows: Range<usize>, cols: Range<usize>) -> usize {
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let r: Vec<usize> = rows.collect();
    let c: Vec<usize> = cols.collect();
    x.submatrix_rank(&r, &c)
}

/// Row and column labelling of a matrix.
///
/// `Plain` labels positions 1..M; `Signed` labels them n, …, 1, (0), −1, …, −n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexStyle {
    Plain { m: usize },
    Signed { n: usize, zero: bool },
}

impl IndexStyle {
    pub fn size(self) -> usize {
        match self {
            IndexStyle::Plain { m } => m,
            IndexStyle::Signed { n, zero } => 2 * n + usize::from(zero),
        }
    }

    pub fn label(self, pos: usize) -> i64 {
        match self {
            IndexStyle::Plain { .. } => pos as i64 + 1,
            IndexStyle::Signed { n, zero } => {
                let n = n as i64;
                let pos = pos as i64;
                if pos < n {
                    n - pos
                } else if zero && pos == n {
                    0
                } else {
                    n - pos - i64::from(!zero)
                }
            }
        }
    }

    pub fn position(self, label: i64) -> Option<usize> {
        (0..self.size()).find(|&q| self.label(q) == label)
    }

    pub fn labels(self) -> Vec<i64> {
        (0..self.size()).map(|q| self.label(q)).collect()
    }
}

/// The bilinear form defining O(M) or Sp(M).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormKind {
    Orthogonal { m: usize },
    Symplectic { m: usize },
}

impl FormKind {
    pub fn new_symplectic(m: usize) -> Result<Self> {
        if m % 2 != 0 {
            return Err(Error::Spec(format!("symplectic form needs even dimension, got {}", m)));
        }
        Ok(FormKind::Symplectic { m })
    }

    pub fn dim(self) -> usize {
        match self {
            FormKind::Orthogonal { m } | FormKind::Symplectic { m } => m,
        }
    }

    /// The anti-identity I_M, or J = [[0, I], [−I, 0]] with anti-identity blocks.
    pub fn matrix(self, p: Prime) -> Mat {
        let m = self.dim();
        let mut j = Mat::zeros(m, p);
        match self {
            FormKind::Orthogonal { .. } => {
                for i in 0..m {
                    j.set(i, m - 1 - i, 1);
                }
            }
            FormKind::Symplectic { .. } => {
                for i in 0..m / 2 {
                    j.set(i, m - 1 - i, 1);
                    j.set(m - 1 - i, i, p.neg(1));
                }
            }
        }
        j
    }

    /// X ↦ X^†, the involutive antiautomorphism fixing the form.
    ///
    /// Orthogonal: I X^t I. Symplectic: J^{-1} X^t J.
    pub fn dagger(self, x: &Mat) -> Mat {
        let m = x.dim();
        let p = x.prime();
        let mut out = Mat::zeros(m, p);
        match self {
            FormKind::Orthogonal { .. } => {
                for i in 0..m {
                    for j in 0..m {
                        out.set(i, j, x.get(m - 1 - j, m - 1 - i));
                    }
                }
            }
            FormKind::Symplectic { .. } => {
                let h = m / 2;
                for i in 0..m {
                    for j in 0..m {
                        let v = x.get(m - 1 - j, m - 1 - i);
                        let flip = (i < h) != (j < h);
                        out.set(i, j, if flip { p.neg(v) } else { v });
                    }
                }
            }
        }
        out
    }
}
