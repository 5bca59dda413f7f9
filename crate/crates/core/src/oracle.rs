//! Brute-force truncations built straight from the defining actions.
//!
//! Nothing here touches the recurrences or the tridiagonal blocks. The
//! `V_k` operator is written down on monomials and split into its `±`
//! sectors by an explicit change of basis; the products `S_α ⊙ M` and
//! `S_α* ⊙ M` are assembled from `½(A⊗B + B⊗A)` acting on elementary
//! tensors and projected back onto the orthonormal basis
//!
//! ```text
//! f_ij = √2 · e_i⊙e_j   (i < j),      f_ii = e_i⊙e_i,
//! ```
//!
//! ordered by level `s = i + j`, then by `i`. Images leaving `j <= N` are
//! dropped.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::blocks::Kind;
use crate::dense::DenseMatrix;
use crate::eig::dense_sym_eigenvalues;
use crate::error::{Error, Result};
use crate::shiftdiag::SymCoefficientMap;
use crate::weights::WeightSequence;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// `z^z ω^w`.
    Monomial { z: usize, w: usize },
    /// `f_ij`, `i <= j`.
    Pair { i: usize, j: usize },
}

impl BasisLabel {
    pub fn level(&self) -> usize {
        match *self {
            BasisLabel::Monomial { z, w } => z + w,
            BasisLabel::Pair { i, j } => i + j,
        }
    }
}

/// Which first factor is paired with the diagonal operator `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    /// `S_α ⊙ M`.
    ShiftDiag,
    /// `S_α* ⊙ M`.
    AdjShiftDiag,
}

/// A finite section of an operator over a labelled orthonormal basis,
/// stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    basis: Vec<BasisLabel>,
    index: HashMap<BasisLabel, usize>,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl TruncatedOperator {
    /// `columns[c]` lists the nonzero `(row, value)` pairs of column `c`.
    pub fn new(basis: Vec<BasisLabel>, columns: Vec<Vec<(usize, Complex64)>>) -> Result<Self> {
        let n = basis.len();
        if columns.len() != n {
            return Err(Error::Shape {
                rows: n,
                cols: columns.len(),
            });
        }
        if let Some(&(r, _)) = columns.iter().flatten().find(|(r, _)| *r >= n) {
            return Err(Error::OutOfRange { index: r, len: n });
        }
        let index = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let columns = columns
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, v)| *v != ZERO).collect())
            .collect();
        Ok(Self {
            basis,
            index,
            columns,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn position(&self, label: BasisLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn column(&self, c: usize) -> &[(usize, Complex64)] {
        &self.columns[c]
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.columns[col]
            .iter()
            .filter(|(r, _)| *r == row)
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim(), "dimension mismatch");
        let mut y = vec![ZERO; self.dim()];
        for (col, &xc) in self.columns.iter().zip(x) {
            if xc == ZERO {
                continue;
            }
            for &(r, v) in col {
                y[r] += v * xc;
            }
        }
        y
    }

    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim(), "dimension mismatch");
        self.columns
            .iter()
            .map(|col| col.iter().map(|&(r, v)| v.conj() * x[r]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix<Complex64> {
        let mut m = DenseMatrix::zeros(self.dim(), self.dim());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Real part as a dense matrix, or `None` if any entry is complex.
    pub fn to_dense_real(&self) -> Option<DenseMatrix> {
        let mut m = DenseMatrix::zeros(self.dim(), self.dim());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                if v.im != 0.0 {
                    return None;
                }
                m[(r, c)] += v.re;
            }
        }
        Some(m)
    }

    /// `true` if every nonzero entry maps a basis vector of level `s` to
    /// one of level `s + delta`.
    pub fn is_graded(&self, delta: i64) -> bool {
        self.columns.iter().enumerate().all(|(c, col)| {
            let from = self.basis[c].level() as i64;
            col.iter()
                .all(|&(r, _)| self.basis[r].level() as i64 == from + delta)
        })
    }

    /// Coordinates of a coefficient map in the `f_ij` basis. Entries
    /// outside the basis are an error.
    pub fn coords(&self, v: &SymCoefficientMap) -> Result<Vec<Complex64>> {
        let mut x = vec![ZERO; self.dim()];
        for ((i, j), c) in v.iter() {
            let pos = self
                .position(BasisLabel::Pair { i, j })
                .ok_or(Error::OutOfRange {
                    index: j,
                    len: self.dim(),
                })?;
            x[pos] = c * pair_scale(i, j);
        }
        Ok(x)
    }

    /// Inverse of [`coords`](Self::coords) for a pair basis.
    pub fn to_map(&self, x: &[Complex64]) -> SymCoefficientMap {
        let mut v = SymCoefficientMap::new();
        for (label, &c) in self.basis.iter().zip(x) {
            if let BasisLabel::Pair { i, j } = *label {
                if c != ZERO {
                    v.add(i, j, c / pair_scale(i, j));
                }
            }
        }
        v
    }
}

/// Coordinate of `e_i⊙e_j` along `f_ij`.
fn pair_scale(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        FRAC_1_SQRT_2
    }
}

/// `T = ½(S_w⊗S_w* + S_w*⊗S_w)` on the monomials `z^i ω^{k-i}`,
/// `i = 0..=k`. Weights enter by modulus; a complex weighted shift is
/// unitarily equivalent to the one with weights `|w(i)|`.
pub fn build_vk_operator(k: usize, w: &WeightSequence) -> Result<TruncatedOperator> {
    let basis: Vec<BasisLabel> = (0..=k)
        .map(|i| BasisLabel::Monomial { z: i, w: k - i })
        .collect();
    let mut columns = vec![Vec::new(); k + 1];
    for (i, col) in columns.iter_mut().enumerate() {
        let j = k - i;
        // S⊗S*: z^i ω^j -> w(i) w(j-1) z^{i+1} ω^{j-1}
        if j >= 1 {
            let v = 0.5 * w.modulus_at(i)? * w.modulus_at(j - 1)?;
            col.push((i + 1, Complex64::new(v, 0.0)));
        }
        // S*⊗S: z^i ω^j -> w(i-1) w(j) z^{i-1} ω^{j+1}
        if i >= 1 {
            let v = 0.5 * w.modulus_at(i - 1)? * w.modulus_at(j)?;
            col.push((i - 1, Complex64::new(v, 0.0)));
        }
    }
    TruncatedOperator::new(basis, columns)
}

/// Orthonormal vectors spanning `V_k^+` or `V_k^-`, as dense columns over
/// the monomial basis.
fn sector_basis(kind: Kind, k: usize) -> Vec<Vec<f64>> {
    let sign = match kind {
        Kind::Sym => 1.0,
        Kind::Asym => -1.0,
    };
    let mut out = Vec::new();
    for i in 0..=k {
        if i < k - i {
            let mut q = vec![0.0; k + 1];
            q[i] = FRAC_1_SQRT_2;
            q[k - i] = sign * FRAC_1_SQRT_2;
            out.push(q);
        } else if i == k - i && kind == Kind::Sym {
            let mut q = vec![0.0; k + 1];
            q[i] = 1.0;
            out.push(q);
        }
    }
    out
}

/// `P^T M Q` for dense column sets `P`, `Q`.
fn compress(m: &DenseMatrix, p: &[Vec<f64>], q: &[Vec<f64>]) -> DenseMatrix {
    let n = m.rows();
    let mut out = DenseMatrix::zeros(p.len(), q.len());
    for (b, qb) in q.iter().enumerate() {
        let mq: Vec<f64> = (0..n)
            .map(|r| m.row(r).iter().zip(qb).map(|(x, y)| x * y).sum())
            .collect();
        for (a, pa) in p.iter().enumerate() {
            out[(a, b)] = pa.iter().zip(&mq).map(|(x, y)| x * y).sum();
        }
    }
    out
}

/// Spectrum of `T` restricted to `V_k^±`, obtained by conjugating the
/// monomial matrix into the `±` basis and eigensolving the sector densely.
/// The cross-sector block is checked to vanish.
pub fn oracle_block_eigenvalues(
    kind: Kind,
    k: usize,
    w: &WeightSequence,
    tol: f64,
) -> Result<Vec<f64>> {
    if kind == Kind::Asym && k == 0 {
        return Err(Error::EmptyBlock { kind, k });
    }
    let m = build_vk_operator(k, w)?
        .to_dense_real()
        .expect("moduli are real");
    let own = sector_basis(kind, k);
    let other = sector_basis(
        match kind {
            Kind::Sym => Kind::Asym,
            Kind::Asym => Kind::Sym,
        },
        k,
    );
    let coupling = compress(&m, &other, &own).max_abs();
    if coupling > 1e-12 * m.max_abs().max(1.0) {
        return Err(Error::Coupling(coupling));
    }
    dense_sym_eigenvalues(&compress(&m, &own, &own), tol)
}

/// Level-ordered pair basis `{(i, j) : i <= j <= n}`.
pub fn pair_basis(n: usize) -> Vec<BasisLabel> {
    let mut basis = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for s in 0..=2 * n {
        for i in s.saturating_sub(n)..=s / 2 {
            basis.push(BasisLabel::Pair { i, j: s - i });
        }
    }
    basis
}

/// Weights needed by a truncation at `n`: `α_0..α_{n-1}` and `μ_0..μ_n`.
struct Coefficients {
    alpha: Vec<Complex64>,
    mu: Vec<Complex64>,
}

impl Coefficients {
    fn fetch(alpha: &WeightSequence, mu: &WeightSequence, n: usize) -> Result<Self> {
        Ok(Self {
            alpha: (0..n).map(|i| alpha.weight_at(i)).collect::<Result<_>>()?,
            mu: (0..=n).map(|i| mu.weight_at(i)).collect::<Result<_>>()?,
        })
    }
}

/// Image of `f_ij` in `f`-coordinates, indices above `n` dropped.
///
/// Works on `H⊗H`: `f_ij` is expanded into elementary tensors, each factor
/// is hit by `½(A⊗M + M⊗A)`, and the result is projected back.
fn image_of_pair(
    which: ProductKind,
    i: usize,
    j: usize,
    c: &Coefficients,
    n: usize,
) -> Vec<((usize, usize), Complex64)> {
    // A e_a, as (index, coefficient); S* e_a = conj(α_{a-1}) e_{a-1}.
    let act = |a: usize| -> Option<(usize, Complex64)> {
        match which {
            ProductKind::ShiftDiag => (a < n).then(|| (a + 1, c.alpha[a])),
            ProductKind::AdjShiftDiag => (a >= 1).then(|| (a - 1, c.alpha[a - 1].conj())),
        }
    };
    let input: Vec<((usize, usize), f64)> = if i == j {
        vec![((i, i), 1.0)]
    } else {
        vec![((i, j), FRAC_1_SQRT_2), ((j, i), FRAC_1_SQRT_2)]
    };
    let mut tensor: HashMap<(usize, usize), Complex64> = HashMap::new();
    for ((a, b), x) in input {
        if let Some((a2, ca)) = act(a) {
            *tensor.entry((a2, b)).or_insert(ZERO) += 0.5 * x * ca * c.mu[b];
        }
        if let Some((b2, cb)) = act(b) {
            *tensor.entry((a, b2)).or_insert(ZERO) += 0.5 * x * c.mu[a] * cb;
        }
    }
    let mut out: Vec<((usize, usize), Complex64)> = Vec::new();
    let mut keys: Vec<(usize, usize)> = tensor
        .keys()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for (k, l) in keys {
        let coeff = if k == l {
            tensor[&(k, k)]
        } else {
            let t = |p| tensor.get(&p).copied().unwrap_or(ZERO);
            (t((k, l)) + t((l, k))) * FRAC_1_SQRT_2
        };
        if coeff != ZERO {
            out.push(((k, l), coeff));
        }
    }
    out
}

/// Compression of `S_α ⊙ M` or `S_α* ⊙ M` to the pairs `i <= j <= n`.
pub fn build_truncated_sym_product(
    which: ProductKind,
    alpha: &WeightSequence,
    mu: &WeightSequence,
    n: usize,
) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::Invalid("truncation order must be positive".into()));
    }
    let c = Coefficients::fetch(alpha, mu, n)?;
    let basis = pair_basis(n);
    let position: HashMap<(usize, usize), usize> = basis
        .iter()
        .enumerate()
        .map(|(p, b)| match *b {
            BasisLabel::Pair { i, j } => ((i, j), p),
            BasisLabel::Monomial { .. } => unreachable!(),
        })
        .collect();
    let columns = basis
        .iter()
        .map(|b| match *b {
            BasisLabel::Pair { i, j } => image_of_pair(which, i, j, &c, n)
                .into_iter()
                .map(|(key, v)| (position[&key], v))
                .collect(),
            BasisLabel::Monomial { .. } => unreachable!(),
        })
        .collect();
    TruncatedOperator::new(basis, columns)
}

/// The same compression applied to a single coefficient map, without
/// assembling the matrix. Input and output use plain coefficients on
/// `e_i⊙e_j`.
pub fn apply_sym_product(
    which: ProductKind,
    alpha: &WeightSequence,
    mu: &WeightSequence,
    n: usize,
    v: &SymCoefficientMap,
) -> Result<SymCoefficientMap> {
    if let Some((i, j)) = v.keys().find(|&(_, j)| j > n) {
        return Err(Error::Invalid(format!(
            "entry ({i}, {j}) lies outside the truncation {n}"
        )));
    }
    let c = Coefficients::fetch(alpha, mu, n)?;
    let mut out = SymCoefficientMap::new();
    for ((i, j), x) in v.iter() {
        let x = x * pair_scale(i, j);
        for ((k, l), y) in image_of_pair(which, i, j, &c, n) {
            out.add(k, l, x * y / pair_scale(k, l));
        }
    }
    Ok(out)
}
