//! Graded blocks of `T = ½(S_w ⊗ S_w* + S_w* ⊗ S_w)`.
//!
//! `T` maps the span `V_k` of the degree-`k` monomials `z^i ω^{k-i}` into
//! itself, and so do its symmetric and antisymmetric parts `V_k^±`. In the
//! orthonormal bases `(z^i ω^{k-i} ± z^{k-i} ω^i)/√2` (plus `z^{k/2} ω^{k/2}`
//! for even `k`, symmetric side) the restriction is a real symmetric
//! tridiagonal matrix `B_k^±`, and its characteristic polynomial obeys the
//! three-term recurrences evaluated here.
//!
//! Weights always enter through their moduli.

use std::fmt;
use std::str::FromStr;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Symmetric part, `S_w ⊙ S_w*`.
    Sym,
    /// Antisymmetric part, `S_w ∧ S_w*`.
    Asym,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Sym => "sym",
            Kind::Asym => "asym",
        }
    }

    /// First level with a non-empty block.
    pub fn first_level(self) -> usize {
        match self {
            Kind::Sym => 0,
            Kind::Asym => 1,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(Kind::Sym),
            "asym" => Ok(Kind::Asym),
            _ => Err(Error::Invalid(format!("unknown kind `{s}`"))),
        }
    }
}

/// Identifies one block `B_k^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSpec {
    pub kind: Kind,
    pub k: usize,
    pub dim: usize,
}

impl BlockSpec {
    pub fn new(kind: Kind, k: usize) -> Self {
        Self {
            kind,
            k,
            dim: block_dimension(kind, k),
        }
    }
}

/// `dim V_k^+ = ⌊k/2⌋ + 1`, `dim V_k^- = ⌊(k-1)/2⌋ + 1` (and `V_0^- = {0}`).
pub fn block_dimension(kind: Kind, k: usize) -> usize {
    match kind {
        Kind::Sym => k / 2 + 1,
        Kind::Asym if k == 0 => 0,
        Kind::Asym => (k - 1) / 2 + 1,
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSym {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalSym {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if offdiag.len() + 1 != diag.len().max(1) {
            return Err(Error::Invalid(format!(
                "tridiagonal with {} diagonal entries needs {} off-diagonal entries, got {}",
                diag.len(),
                diag.len().saturating_sub(1),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite tridiagonal entry".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let d = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..d {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < d { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Largest absolute entry, the reference scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let d = self.dim();
        let mut m = DenseMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = self.diag[i];
            if i + 1 < d {
                m[(i, i + 1)] = self.offdiag[i];
                m[(i + 1, i)] = self.offdiag[i];
            }
        }
        m
    }
}

/// The tridiagonal matrix `B_k^±` of `T` on `V_k^±`.
///
/// Off-diagonal entry `i` is `w(i)·w(k-1-i)/2`, except that the last entry of
/// an even symmetric block carries an extra `√2`. Odd blocks have a single
/// non-zero diagonal entry `±w((k-1)/2)²/2` in the last position.
pub fn build_block_matrix(kind: Kind, k: usize, w: &WeightSequence) -> Result<TridiagonalSym> {
    let d = block_dimension(kind, k);
    if d == 0 {
        return Err(Error::EmptyBlock { kind, k });
    }
    let mut diag = vec![0.0; d];
    let mut offdiag = Vec::with_capacity(d - 1);
    for i in 0..d - 1 {
        offdiag.push(w.modulus_at(i)? * w.modulus_at(k - 1 - i)? / 2.0);
    }
    if k % 2 == 1 {
        let mid = w.modulus_at((k - 1) / 2)?;
        let corner = mid * mid / 2.0;
        diag[d - 1] = match kind {
            Kind::Sym => corner,
            Kind::Asym => -corner,
        };
    } else if kind == Kind::Sym && d >= 2 {
        offdiag[d - 2] *= std::f64::consts::SQRT_2;
    }
    TridiagonalSym::new(diag, offdiag)
}

/// Runs `p_j = x·p_{j-1} - c(j)·p_{j-2}` from `p_{-1} = 0`, `p_0 = 1` up to
/// `j = m` and returns `p_m`. `c(j)` is only requested for `j >= 2`.
fn three_term(m: i64, x: f64, coupling: impl Fn(usize) -> Result<f64>) -> Result<f64> {
    if m < 0 {
        return Ok(0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    if m == 0 {
        return Ok(prev);
    }
    for j in 2..=m as usize {
        let next = x * cur - coupling(j)? * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn check_index(n: usize, m: i64) -> Result<()> {
    if n == 0 || m < -1 || m > n as i64 {
        Err(Error::PolynomialIndex { m, n })
    } else {
        Ok(())
    }
}

fn sq(w: &WeightSequence, i: usize) -> Result<f64> {
    w.modulus_at(i).map(|x| x * x)
}

/// `D^{(n)}_m(x)`: the leading `m×m` minor of `xI - B_{2n-1}^±`.
pub fn eval_d(n: usize, m: i64, x: f64, w: &WeightSequence) -> Result<f64> {
    check_index(n, m)?;
    three_term(m, x, |j| Ok(sq(w, j - 2)? * sq(w, 2 * n - j)? / 4.0))
}

/// `K^{(n)}_m(x)`: the leading `m×m` minor of `xI - B_{2n}^±`.
pub fn eval_k(n: usize, m: i64, x: f64, w: &WeightSequence) -> Result<f64> {
    check_index(n, m)?;
    three_term(m, x, |j| Ok(sq(w, j - 2)? * sq(w, 2 * n - j + 1)? / 4.0))
}

/// `det(xI - B_k^±)` through the recurrences: `C^±_{2n}` for `k = 2n-1`,
/// `G^±_{2n+1}` for `k = 2n >= 2`, and `x` for the `1×1` zero block `B_0^+`.
///
/// Only meant for moderate degrees; the values overflow for large `k`.
pub fn eval_char_poly(kind: Kind, k: usize, x: f64, w: &WeightSequence) -> Result<f64> {
    if block_dimension(kind, k) == 0 {
        return Err(Error::EmptyBlock { kind, k });
    }
    if k == 0 {
        return Ok(x);
    }
    if k % 2 == 1 {
        let n = (k + 1) / 2;
        let corner = sq(w, n - 1)? / 2.0;
        let shifted = match kind {
            Kind::Sym => x - corner,
            Kind::Asym => x + corner,
        };
        let mut value = shifted * eval_d(n, n as i64 - 1, x, w)?;
        if n >= 2 {
            value -= sq(w, n - 2)? * sq(w, n)? / 4.0 * eval_d(n, n as i64 - 2, x, w)?;
        }
        Ok(value)
    } else {
        let n = k / 2;
        let kn = eval_k(n, n as i64, x, w)?;
        match kind {
            Kind::Sym => {
                let tail = sq(w, n - 1)? * sq(w, n)? / 2.0 * eval_k(n, n as i64 - 1, x, w)?;
                Ok(x * kn - tail)
            }
            Kind::Asym => Ok(kn),
        }
    }
}
