//! Root systems of types A, B, C, D in the pair encoding, parabolic
//! partitions of the index line and root vectors.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfq::{FormKind, IndexStyle, Mat};
use crate::scalars::Prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl std::str::FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            other => Err(Error::Spec(format!("unknown series {:?}", other))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Series and rank. For A the rank is the matrix size n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LieTypeSpec {
    pub series: Series,
    pub n: usize,
}

impl LieTypeSpec {
    pub fn new(series: Series, n: usize) -> Result<Self> {
        let ok = match series {
            Series::A => n >= 1,
            Series::B | Series::C => n >= 1,
            Series::D => n >= 2,
        };
        if !ok {
            return Err(Error::Spec(format!("rank {} is too small for series {}", n, series)));
        }
        Ok(LieTypeSpec { series, n })
    }

    pub fn m(self) -> usize {
        match self.series {
            Series::A => self.n,
            Series::B => 2 * self.n + 1,
            Series::C | Series::D => 2 * self.n,
        }
    }

    pub fn is_classical_form(self) -> bool {
        self.series != Series::A
    }

    pub fn index_style(self) -> IndexStyle {
        match self.series {
            Series::A => IndexStyle::Plain { m: self.n },
            Series::B => IndexStyle::Signed { n: self.n, zero: true },
            Series::C | Series::D => IndexStyle::Signed { n: self.n, zero: false },
        }
    }

    pub fn form(self) -> Option<FormKind> {
        match self.series {
            Series::A => None,
            Series::B | Series::D => Some(FormKind::Orthogonal { m: self.m() }),
            Series::C => Some(FormKind::Symplectic { m: self.m() }),
        }
    }
}

/// The ε-expression of a root, before the overall sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum EpsForm {
    /// ε_i − ε_j
    Diff(i64, i64),
    /// ε_i + ε_j
    Sum(i64, i64),
    /// ε_i
    Short(i64),
    /// 2ε_i
    Long(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Root {
    /// Row and column labels.
    pub pair: (i64, i64),
    pub positive: bool,
    pub eps: EpsForm,
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pair.0, self.pair.1)
    }
}

impl Root {
    pub fn row(&self) -> i64 {
        self.pair.0
    }
    pub fn col(&self) -> i64 {
        self.pair.1
    }
    pub fn eps_string(&self) -> String {
        let s = match self.eps {
            EpsForm::Diff(i, j) => format!("e{}-e{}", i, j),
            EpsForm::Sum(i, j) => format!("e{}+e{}", i, j),
            EpsForm::Short(i) => format!("e{}", i),
            EpsForm::Long(i) => format!("2e{}", i),
        };
        if self.positive {
            s
        } else {
            format!("-({})", s)
        }
    }
}

/// α = (i, j) ↦ α′ = (−j, −i).
pub fn prime_map(pair: (i64, i64)) -> (i64, i64) {
    (-pair.1, -pair.0)
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub spec: LieTypeSpec,
    pub roots: Vec<Root>,
    by_pair: HashMap<(i64, i64), usize>,
}

/// All roots of the series with their pairs.
pub fn build_root_system(spec: LieTypeSpec) -> RootSystem {
    let n = spec.n as i64;
    let mut pos = Vec::new();
    match spec.series {
        Series::A => {
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        pos.push(Root { pair: (i, j), positive: i < j, eps: EpsForm::Diff(i, j) });
                    }
                }
            }
        }
        _ => {
            for i in (1..=n).rev() {
                for j in (1..i).rev() {
                    pos.push(Root { pair: (i, j), positive: true, eps: EpsForm::Diff(i, j) });
                    pos.push(Root { pair: (i, -j), positive: true, eps: EpsForm::Sum(i, j) });
                }
                match spec.series {
                    Series::B => pos.push(Root { pair: (i, 0), positive: true, eps: EpsForm::Short(i) }),
                    Series::C => pos.push(Root { pair: (i, -i), positive: true, eps: EpsForm::Long(i) }),
                    _ => {}
                }
            }
            let neg: Vec<Root> =
                pos.iter().map(|r| Root { pair: (r.pair.1, r.pair.0), positive: false, eps: r.eps }).collect();
            pos.extend(neg);
        }
    }
    let by_pair = pos.iter().enumerate().map(|(k, r)| (r.pair, k)).collect();
    RootSystem { spec, roots: pos, by_pair }
}

impl RootSystem {
    pub fn find(&self, pair: (i64, i64)) -> Option<&Root> {
        self.by_pair.get(&pair).map(|&k| &self.roots[k])
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// (i, j) + (j, k) = (i, k) when i ≠ k and the result is a root.
    pub fn root_sum(&self, a: &Root, b: &Root) -> Option<Root> {
        root_sum_pair(a.pair, b.pair).and_then(|q| self.find(q).copied())
    }
}

/// The pair-level sum: defined iff the middle indices agree and the outer differ.
pub fn root_sum_pair(a: (i64, i64), b: (i64, i64)) -> Option<(i64, i64)> {
    (a.1 == b.0 && a.0 != b.1).then_some((a.0, b.1))
}

/// Consecutive segments of the index line, listed in position order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    sizes: Vec<usize>,
    block_of: Vec<usize>,
    starts: Vec<usize>,
    central: Option<usize>,
}

impl PartitionSpec {
    /// Validates block sizes for the given type. BCD partitions must be
    /// symmetric about the centre; a middle block of odd-length lists is
    /// the self-symmetric segment I₀.
    pub fn new(spec: LieTypeSpec, sizes: &[usize]) -> Result<Self> {
        let m = spec.m();
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::Partition("empty segment".into()));
        }
        let total: usize = sizes.iter().sum();
        if total != m {
            return Err(Error::Partition(format!("segment sizes sum to {}, expected {}", total, m)));
        }
        let mut central = None;
        if spec.is_classical_form() {
            let rev: Vec<usize> = sizes.iter().rev().copied().collect();
            if rev != sizes {
                return Err(Error::Partition(format!("{:?} is not symmetric about zero", sizes)));
            }
            if sizes.len() % 2 == 1 {
                central = Some(sizes.len() / 2);
            } else if spec.series == Series::B {
                return Err(Error::Partition("type B needs a central segment containing 0".into()));
            }
            if spec.series == Series::C {
                if let Some(c) = central {
                    if sizes[c] % 2 != 0 {
                        return Err(Error::Partition("central segment must have even size".into()));
                    }
                }
            }
        }
        let mut block_of = Vec::with_capacity(m);
        let mut starts = Vec::with_capacity(sizes.len());
        for (b, &s) in sizes.iter().enumerate() {
            starts.push(block_of.len());
            block_of.extend(std::iter::repeat(b).take(s));
        }
        Ok(PartitionSpec { sizes: sizes.to_vec(), block_of, starts, central })
    }

    pub fn borel(spec: LieTypeSpec) -> Self {
        Self::new(spec, &vec![1; spec.m()]).expect("Borel partition is valid")
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.block_of[pos]
    }

    pub fn range(&self, b: usize) -> std::ops::Range<usize> {
        self.starts[b]..self.starts[b] + self.sizes[b]
    }

    /// Index of the self-symmetric central segment, if present.
    pub fn central(&self) -> Option<usize> {
        self.central
    }

    pub fn is_borel(&self) -> bool {
        self.sizes.iter().all(|&s| s == 1)
    }

    /// Block index of the mirror segment.
    pub fn mirror(&self, b: usize) -> usize {
        self.sizes.len() - 1 - b
    }
}

/// Roots whose matrix unit sits strictly above (Δ₊(u^a)) or strictly below
/// (Δ₋(u^a)) the diagonal blocks.
pub fn delta_ua(sys: &RootSystem, part: &PartitionSpec) -> (Vec<Root>, Vec<Root>) {
    let style = sys.spec.index_style();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for r in &sys.roots {
        let i = style.position(r.pair.0).expect("label in range");
        let j = style.position(r.pair.1).expect("label in range");
        let (bi, bj) = (part.block_of(i), part.block_of(j));
        if bi < bj {
            plus.push(*r);
        } else if bi > bj {
            minus.push(*r);
        }
    }
    (plus, minus)
}

/// Root vector E_α + η(α)E_α′ as an M×M matrix, together with η.
///
/// For type A this is the plain matrix unit with η = 0.
pub fn root_vector(spec: LieTypeSpec, p: Prime, root: &Root) -> Result<(Mat, i64)> {
    let style = spec.index_style();
    let m = spec.m();
    let i = style.position(root.pair.0).ok_or_else(|| Error::Internal("bad label".into()))?;
    let j = style.position(root.pair.1).ok_or_else(|| Error::Internal("bad label".into()))?;
    let e = Mat::unit(m, p, i, j, 1);
    let Some(form) = spec.form() else { return Ok((e, 0)) };
    let q = prime_map(root.pair);
    let qi = style.position(q.0).ok_or_else(|| Error::Internal("bad label".into()))?;
    let qj = style.position(q.1).ok_or_else(|| Error::Internal("bad label".into()))?;
    let ep = Mat::unit(m, p, qi, qj, 1);
    let etas: &[i64] = if q == root.pair { &[0] } else { &[1, -1, 0] };
    for &eta in etas {
        let x = e.add(&ep.scale(p.reduce(eta)));
        if form.dagger(&x) == x.neg() {
            return Ok((x, eta));
        }
    }
    Err(Error::Internal(format!("no sign makes the root vector of {} antisymmetric", root)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: Series, n: usize) -> RootSystem {
        build_root_system(LieTypeSpec::new(s, n).unwrap())
    }

    #[test]
    fn root_counts() {
        for n in 1..5 {
            assert_eq!(sys(Series::A, n).len(), n * (n - 1));
            assert_eq!(sys(Series::B, n).len(), 2 * n * n);
            assert_eq!(sys(Series::C, n).len(), 2 * n * n);
            if n >= 2 {
                assert_eq!(sys(Series::D, n).len(), 2 * n * (n - 1));
            }
        }
    }

    #[test]
    fn pair_table() {
        let b = sys(Series::B, 3);
        assert_eq!(b.find((2, 0)).unwrap().eps, EpsForm::Short(2));
        let c = sys(Series::C, 3);
        assert_eq!(c.find((1, -1)).unwrap().eps, EpsForm::Long(1));
        let a = sys(Series::A, 2);
        let pairs: Vec<_> = a.roots.iter().map(|r| r.pair).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn sums_and_primes() {
        assert_eq!(root_sum_pair((1, 2), (2, 3)), Some((1, 3)));
        assert_eq!(root_sum_pair((2, 1), (1, 2)), None);
        assert_eq!(root_sum_pair((1, 2), (3, 4)), None);
        assert_eq!(prime_map((2, -1)), (1, -2));
        assert_eq!(prime_map((3, -3)), (3, -3));
        assert_eq!(prime_map(prime_map((2, 1))), (2, 1));
    }

    #[test]
    fn delta_examples() {
        let spec = LieTypeSpec::new(Series::A, 3).unwrap();
        let part = PartitionSpec::new(spec, &[2, 1]).unwrap();
        let (plus, minus) = delta_ua(&build_root_system(spec), &part);
        let pp: Vec<_> = plus.iter().map(|r| r.pair).collect();
        assert_eq!(pp, vec![(1, 3), (2, 3)]);
        assert_eq!(minus.len(), 2);
        let c2 = LieTypeSpec::new(Series::C, 2).unwrap();
        let (plus, minus) = delta_ua(&build_root_system(c2), &PartitionSpec::borel(c2));
        assert_eq!(plus.len() + minus.len(), 8);
    }

    #[test]
    fn etas() {
        let p = Prime::new(3).unwrap();
        let c = LieTypeSpec::new(Series::C, 2).unwrap();
        let r = *build_root_system(c).find((1, -1)).unwrap();
        assert_eq!(root_vector(c, p, &r).unwrap().1, 0);
        let d = LieTypeSpec::new(Series::D, 3).unwrap();
        let r = *build_root_system(d).find((2, 1)).unwrap();
        assert_eq!(root_vector(d, p, &r).unwrap().1, -1);
        for s in [Series::B, Series::C, Series::D] {
            let spec = LieTypeSpec::new(s, 3).unwrap();
            let form = spec.form().unwrap();
            for r in &build_root_system(spec).roots {
                let (x, _) = root_vector(spec, p, r).unwrap();
                assert_eq!(form.dagger(&x), x.neg());
            }
        }
    }

    #[test]
    fn partitions() {
        let c2 = LieTypeSpec::new(Series::C, 2).unwrap();
        assert!(PartitionSpec::new(c2, &[1, 2, 1]).unwrap().central().is_some());
        assert!(PartitionSpec::new(c2, &[2, 2]).unwrap().central().is_none());
        assert!(PartitionSpec::new(c2, &[1, 3]).is_err());
        let b2 = LieTypeSpec::new(Series::B, 2).unwrap();
        assert!(PartitionSpec::new(b2, &[2, 1, 2]).is_ok());
        assert!(PartitionSpec::new(b2, &[1, 1, 1, 1, 1]).is_ok());
    }
}
