//! `S_α ⊙ M` and `S_α* ⊙ M` for a weighted shift `S_α` and a diagonal
//! `M = diag(μ_0, μ_1, ...)`.
//!
//! Coefficient maps use *plain* coefficients: a [`SymCoefficientMap`] with
//! entries `c_ij` stands for `v = Σ_{i<=j} c_ij e_i⊙e_j`, where
//! `e_i⊙e_j = ½(e_i⊗e_j + e_j⊗e_i)` has norm `1/√2` off the diagonal and
//! `1` on it. The induction in [`kernel_induction_solve`] works with the
//! doubled unknowns `b_ij = c_ij / 2`, which only rescales each equation.
//!
//! The adjoint acts by `S_α* e_i = conj(α_{i-1}) e_{i-1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{apply_sym_product, build_truncated_sym_product, ProductKind, TruncatedOperator};
use crate::weights::{Aggregate, WeightSequence};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Finitely supported vector of `H⊙H` in plain `e_i⊙e_j` coefficients,
/// keyed by `(i, j)` with `i <= j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymCoefficientMap {
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SymCoefficientMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// `e_i⊙e_j`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut v = Self::new();
        v.add(i, j, Complex64::new(1.0, 0.0));
        v
    }

    fn key(i: usize, j: usize) -> (usize, usize) {
        (i.min(j), i.max(j))
    }

    /// Accumulates `c` onto `e_i⊙e_j`; entries that cancel to exactly zero
    /// are removed.
    pub fn add(&mut self, i: usize, j: usize, c: Complex64) {
        let key = Self::key(i, j);
        let slot = self.entries.entry(key).or_insert(ZERO);
        *slot += c;
        if *slot == ZERO {
            self.entries.remove(&key);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries.get(&Self::key(i, j)).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index appearing in any key.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().map(|&(_, j)| j).max()
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        for ((i, j), x) in other.iter() {
            self.add(i, j, c * x);
        }
    }

    /// Norm in `H⊙H`.
    pub fn norm(&self) -> f64 {
        self.iter()
            .map(|((i, j), c)| {
                let n2 = c.norm_sqr();
                if i == j {
                    n2
                } else {
                    0.5 * n2
                }
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut d = self.clone();
        d.add_scaled(other, Complex64::new(-1.0, 0.0));
        d.norm()
    }
}

fn check_pair(i: usize, j: usize) -> Result<()> {
    if i > j {
        return Err(Error::Invalid(format!("expected i <= j, got ({i}, {j})")));
    }
    Ok(())
}

/// `(S_α ⊙ M)(e_i⊙e_j) = ½ μ_i α_j e_i⊙e_{j+1} + ½ μ_j α_i e_{i+1}⊙e_j`.
pub fn apply_shift_diag(
    i: usize,
    j: usize,
    alpha: &WeightSequence,
    mu: &WeightSequence,
) -> Result<SymCoefficientMap> {
    check_pair(i, j)?;
    let mut v = SymCoefficientMap::new();
    v.add(i, j + 1, 0.5 * mu.weight_at(i)? * alpha.weight_at(j)?);
    v.add(i + 1, j, 0.5 * mu.weight_at(j)? * alpha.weight_at(i)?);
    Ok(v)
}

/// `(S_α* ⊙ M)(e_i⊙e_j) = ½ μ_j conj(α_{i-1}) e_{i-1}⊙e_j
/// + ½ μ_i conj(α_{j-1}) e_i⊙e_{j-1}`, terms with a negative index omitted.
pub fn apply_adj_shift_diag(
    i: usize,
    j: usize,
    alpha: &WeightSequence,
    mu: &WeightSequence,
) -> Result<SymCoefficientMap> {
    check_pair(i, j)?;
    let mut v = SymCoefficientMap::new();
    if i >= 1 {
        v.add(i - 1, j, 0.5 * mu.weight_at(j)? * alpha.weight_at(i - 1)?.conj());
    }
    if j >= 1 {
        v.add(i, j - 1, 0.5 * mu.weight_at(i)? * alpha.weight_at(j - 1)?.conj());
    }
    Ok(v)
}

/// Shape of the coefficient equation of `e_k⊙e_l` in `(S_α⊙M − λ)v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// `k = l = 0`.
    Origin,
    /// `k = 0, l = 1`.
    RowZeroFirst,
    /// `k = 0, l >= 2`.
    RowZero,
    /// `k = l >= 1`.
    Diagonal,
    /// `k >= 1, l = k + 1`.
    SuperDiagonal,
    /// `k >= 1, l >= k + 2`.
    Interior,
}

impl Equation {
    fn of(k: usize, l: usize) -> Self {
        match (k, l) {
            (0, 0) => Equation::Origin,
            (0, 1) => Equation::RowZeroFirst,
            (0, _) => Equation::RowZero,
            _ if k == l => Equation::Diagonal,
            _ if l == k + 1 => Equation::SuperDiagonal,
            _ => Equation::Interior,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Origin => "origin",
            Equation::RowZeroFirst => "row-zero-first",
            Equation::RowZero => "row-zero",
            Equation::Diagonal => "diagonal",
            Equation::SuperDiagonal => "super-diagonal",
            Equation::Interior => "interior",
        })
    }
}

/// One step of the induction: `entry` was forced to zero by the equation
/// of `e_k⊙e_l`, `at = (k, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forcing {
    pub entry: (usize, usize),
    pub equation: Equation,
    pub at: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InductionReport {
    pub lambda: Complex64,
    pub n: usize,
    /// Forced entries in the order they were forced.
    pub forced: Vec<Forcing>,
    /// Entries of the claimed region left undetermined.
    pub unforced: Vec<(usize, usize)>,
    /// Indices `i <= n` with `μ_i = 0`.
    pub zero_mu: Vec<usize>,
    /// `(i, i)` such that `e_i⊙e_i` is a kernel vector, when `λ = 0`.
    pub kernel_witness: Option<(usize, usize)>,
}

impl InductionReport {
    /// Rows the claim covers: with `λ = 0` only `i + j <= n - 1` is
    /// determined by equations inside the truncation, otherwise every
    /// `i <= j <= n`.
    pub fn in_claim(&self, (i, j): (usize, usize)) -> bool {
        i <= j && j <= self.n && (self.lambda != ZERO || i + j < self.n)
    }

    pub fn last_claimed_row(&self) -> usize {
        if self.lambda == ZERO {
            self.n.saturating_sub(1) / 2
        } else {
            self.n
        }
    }

    pub fn trivial_only(&self) -> bool {
        self.unforced.is_empty() && self.kernel_witness.is_none()
    }
}

fn nonvanishing_alpha(alpha: &WeightSequence, count: usize) -> Result<Vec<Complex64>> {
    let a: Vec<Complex64> = (0..count).map(|i| alpha.weight_at(i)).collect::<Result<_>>()?;
    if let Some(i) = a.iter().position(|x| *x == ZERO) {
        return Err(Error::Hypothesis(format!("α_{i} = 0")));
    }
    Ok(a)
}

/// Solves `(S_α⊙M − λ)v = 0` on the coefficients `b_ij`, `i <= j <= n`,
/// by forced-zero propagation through the coefficient equations of every
/// `e_k⊙e_l` with `l <= n`, sweeping rows in order until nothing changes.
///
/// Zero `μ_i` are reported rather than rejected; with `λ = 0` they leave
/// `e_i⊙e_i` as a kernel witness. A zero `α_i`, `i < n`, is an error.
pub fn kernel_induction_solve(
    alpha: &WeightSequence,
    mu: &WeightSequence,
    lambda: Complex64,
    n: usize,
) -> Result<InductionReport> {
    if n == 0 {
        return Err(Error::Invalid("truncation order must be positive".into()));
    }
    let a = nonvanishing_alpha(alpha, n)?;
    let m: Vec<Complex64> = (0..=n).map(|i| mu.weight_at(i)).collect::<Result<_>>()?;
    let zero_mu: Vec<usize> = (0..=n).filter(|&i| m[i] == ZERO).collect();

    let equations: Vec<((usize, usize), Vec<((usize, usize), Complex64)>)> = (0..=n)
        .flat_map(|k| (k..=n).map(move |l| (k, l)))
        .map(|(k, l)| {
            let mut terms = Vec::with_capacity(3);
            match Equation::of(k, l) {
                Equation::Origin => {}
                Equation::RowZeroFirst => terms.push(((0, 0), 2.0 * m[0] * a[0])),
                Equation::RowZero => terms.push(((0, l - 1), m[0] * a[l - 1])),
                Equation::Diagonal => terms.push(((k - 1, k), m[k] * a[k - 1])),
                Equation::SuperDiagonal => {
                    terms.push(((k, k), 2.0 * m[k] * a[k]));
                    terms.push(((k - 1, k + 1), m[k + 1] * a[k - 1]));
                }
                Equation::Interior => {
                    terms.push(((k, l - 1), m[k] * a[l - 1]));
                    terms.push(((k - 1, l), m[l] * a[k - 1]));
                }
            }
            // v carries b_kl with weight 2, so λv contributes 2λ b_kl.
            terms.push(((k, l), -2.0 * lambda));
            terms.retain(|(_, c)| *c != ZERO);
            ((k, l), terms)
        })
        .collect();

    let mut zero: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut forced = Vec::new();
    loop {
        let before = forced.len();
        for &(at, ref terms) in &equations {
            let mut open = terms.iter().filter(|(e, _)| !zero.contains(e));
            if let (Some(&(entry, _)), None) = (open.next(), open.next()) {
                zero.insert(entry);
                forced.push(Forcing {
                    entry,
                    equation: Equation::of(at.0, at.1),
                    at,
                });
            }
        }
        if forced.len() == before {
            break;
        }
    }

    let mut report = InductionReport {
        lambda,
        n,
        forced,
        unforced: Vec::new(),
        zero_mu,
        kernel_witness: None,
    };
    report.unforced = (0..=n)
        .flat_map(|i| (i..=n).map(move |j| (i, j)))
        .filter(|&e| report.in_claim(e) && !zero.contains(&e))
        .collect();
    if lambda == ZERO {
        report.kernel_witness = report.zero_mu.first().map(|&i| (i, i));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `0` is an eigenvalue with eigenvector `e_i⊙e_i`, `i = witness`.
    ContainsZero { witness: usize },
    /// No eigenvalue is visible on the truncation.
    EmptyWithinTruncation,
}

/// Point spectrum of `S_α ⊙ M` as seen on the truncation `i <= j <= n`.
///
/// The empty verdict is cross-checked twice: the induction must return
/// only the trivial solution at `λ = 0`, and the compressed operator must
/// raise the level `i + j` by exactly one (hence be nilpotent).
pub fn classify_point_spectrum_shift_diag(
    alpha: &WeightSequence,
    mu: &WeightSequence,
    n: usize,
) -> Result<Classification> {
    nonvanishing_alpha(alpha, n)?;
    for i in 0..=n {
        if mu.weight_at(i)? == ZERO {
            return Ok(Classification::ContainsZero { witness: i });
        }
    }
    let report = kernel_induction_solve(alpha, mu, ZERO, n)?;
    if !report.trivial_only() {
        return Err(Error::Invalid(format!(
            "induction left {} entries open with all μ nonzero",
            report.unforced.len()
        )));
    }
    if !build_truncated_sym_product(ProductKind::ShiftDiag, alpha, mu, n)?.is_graded(1) {
        return Err(Error::Invalid("truncation is not level-raising".into()));
    }
    Ok(Classification::EmptyWithinTruncation)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    /// `max_{1<=i<=range} |α_{i-1} μ_i| / √2`.
    pub lower: f64,
    /// `sup|α| · sup|μ|`.
    pub upper: f64,
    pub lower_witness: Option<usize>,
    pub alpha_sup: Aggregate,
    pub mu_sup: Aggregate,
}

impl NormBounds {
    /// `true` when either supremum is only a finite-range value.
    pub fn upper_is_estimate(&self) -> bool {
        self.alpha_sup.is_estimate() || self.mu_sup.is_estimate()
    }
}

/// Bounds on `‖S_α* ⊙ M‖`.
pub fn norm_bounds_adj(alpha: &WeightSequence, mu: &WeightSequence, range: usize) -> NormBounds {
    let mut lower = 0.0;
    let mut lower_witness = None;
    for i in 1..=range {
        let (Ok(a), Ok(m)) = (alpha.modulus_at(i - 1), mu.modulus_at(i)) else {
            break;
        };
        let x = a * m * FRAC_1_SQRT_2;
        if lower_witness.is_none() || x > lower {
            lower = x;
            lower_witness = Some(i);
        }
    }
    let alpha_sup = alpha.sup_modulus(range);
    let mu_sup = mu.sup_modulus(range);
    NormBounds {
        lower,
        upper: alpha_sup.value() * mu_sup.value(),
        lower_witness,
        alpha_sup,
        mu_sup,
    }
}

/// Largest singular value of `a`, from the top eigenvalue of `a* a`.
///
/// Runs restarted Lanczos (full reorthogonalisation, restart from the top
/// Ritz vector) from a seeded random start, spending at most `iters`
/// products with `a* a`. Ritz values are Rayleigh quotients, so the result
/// never exceeds the true norm of the truncation. Plain power iteration
/// stalls when the top singular values cluster, which they do here.
pub fn estimate_norm_truncated(a: &TruncatedOperator, iters: usize, seed: u64) -> f64 {
    const RESTART: usize = 40;
    let n = a.dim();
    if n == 0 || a.nnz() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    normalize(&mut x);
    let mut best: f64 = 0.0;
    let mut budget = iters;
    while budget > 0 {
        let steps = RESTART.min(budget).min(n);
        let mut basis = vec![x.clone()];
        let (mut diag, mut off) = (Vec::new(), Vec::new());
        for j in 0..steps {
            let mut w = a.apply_adjoint(&a.apply(&basis[j]));
            budget -= 1;
            diag.push(dot(&basis[j], &w).re);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(p, q)| *p -= c * q);
                }
            }
            let b = normalize(&mut w);
            if j + 1 == steps || b <= 1e-14 * diag[0].abs().max(f64::MIN_POSITIVE) {
                break;
            }
            off.push(b);
            basis.push(w);
        }
        let m = diag.len();
        let t = nalgebra::DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                diag[r]
            } else if r == c + 1 {
                off[c]
            } else if c == r + 1 {
                off[r]
            } else {
                0.0
            }
        });
        let eig = nalgebra::SymmetricEigen::new(t);
        let top = eig.eigenvalues.imax();
        let theta = eig.eigenvalues[top];
        let settled = theta <= best * (1.0 + 1e-14);
        best = best.max(theta);
        if settled || m < steps {
            break;
        }
        x = vec![ZERO; n];
        for (v, y) in basis.iter().zip(eig.eigenvectors.column(top).iter()) {
            x.iter_mut().zip(v).for_each(|(p, q)| *p += *y * q);
        }
        normalize(&mut x);
    }
    best.max(0.0).sqrt()
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(p, q)| p.conj() * q).sum()
}

/// Scales `v` to unit length (leaving a zero vector alone); returns the
/// original norm.
fn normalize(v: &mut [Complex64]) -> f64 {
    let n = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|c| *c /= n);
    }
    n
}

/// Radius of the eigenvalue disk of `S_α* ⊙ M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskRadius {
    pub radius: f64,
    /// `true` when the infimum of geometric means is a finite-range value.
    pub is_estimate: bool,
    /// `μ_0 = 0`: the disk is empty but `0` is an eigenvalue.
    pub zero_eigenvalue: bool,
}

/// `½ |μ_0| inf_j |α_0···α_{j-1}|^{1/j}`, scanning `j <= max_j` when no
/// closed form is known.
pub fn disk_radius(alpha: &WeightSequence, mu: &WeightSequence, max_j: usize) -> Result<DiskRadius> {
    let m0 = mu.modulus_at(0)?;
    let inf = alpha.inf_geo_mean(max_j);
    Ok(DiskRadius {
        radius: 0.5 * m0 * inf.value(),
        is_estimate: inf.is_estimate(),
        zero_eigenvalue: m0 == 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskCertificate {
    pub lambda: Complex64,
    pub radius: f64,
    /// Last index `J` of the series.
    pub order: usize,
    /// `‖Av − λv‖ / ‖v‖` on a truncation containing the support of `v`.
    pub residual: f64,
    /// `|2λ| / (|μ_0| inf_j |α_0···α_{j-1}|^{1/j})`.
    pub beta: f64,
}

/// Relative residual of `(S_α* ⊙ M) v = λ v`, with the operator applied
/// through the tensor definition.
fn eigen_residual(
    alpha: &WeightSequence,
    mu: &WeightSequence,
    n: usize,
    lambda: Complex64,
    v: &SymCoefficientMap,
) -> Result<f64> {
    let mut r = apply_sym_product(ProductKind::AdjShiftDiag, alpha, mu, n, v)?;
    r.add_scaled(v, -lambda);
    Ok(r.norm() / v.norm())
}

/// `v = e_0⊙e_0 + Σ_{j=1..J} c_j e_0⊙e_j` with
/// `c_j = (2λ)^j / (μ_0^j conj(α_0···α_{j-1}))`, an approximate eigenvector
/// of `S_α* ⊙ M` for `λ` inside the disk.
pub fn build_disk_eigenvector(
    lambda: Complex64,
    alpha: &WeightSequence,
    mu: &WeightSequence,
    order: usize,
) -> Result<(SymCoefficientMap, DiskCertificate)> {
    if order == 0 {
        return Err(Error::Invalid("series order must be positive".into()));
    }
    let mu0 = mu.weight_at(0)?;
    if mu0 == ZERO {
        return Err(Error::Hypothesis("μ_0 = 0".into()));
    }
    let a = nonvanishing_alpha(alpha, order)?;
    let radius = disk_radius(alpha, mu, order)?.radius;
    let beta = 2.0 * lambda.norm() / (2.0 * radius);
    if !(beta < 1.0) {
        return Err(Error::OutsideDisk {
            modulus: lambda.norm(),
            beta,
        });
    }
    let mut v = SymCoefficientMap::unit(0, 0);
    if lambda == ZERO {
        return Ok((
            v,
            DiskCertificate {
                lambda,
                radius,
                order,
                residual: 0.0,
                beta,
            },
        ));
    }
    let mut c = Complex64::new(1.0, 0.0);
    for (j, aj) in a.iter().enumerate() {
        c *= 2.0 * lambda / (mu0 * aj.conj());
        v.add(0, j + 1, c);
    }
    let residual = eigen_residual(alpha, mu, order + 1, lambda, &v)?;
    Ok((
        v,
        DiskCertificate {
            lambda,
            radius,
            order,
            residual,
            beta,
        },
    ))
}

/// Grows `J` from the estimate `log(tol)/log(β)` until the residual is at
/// most `tol`, giving up past `max_order`.
pub fn build_disk_eigenvector_adaptive(
    lambda: Complex64,
    alpha: &WeightSequence,
    mu: &WeightSequence,
    tol: f64,
    max_order: usize,
) -> Result<(SymCoefficientMap, DiskCertificate)> {
    if !(tol > 0.0) {
        return Err(Error::Tolerance(tol));
    }
    let (_, probe) = build_disk_eigenvector(lambda, alpha, mu, 1)?;
    let mut order = if probe.beta > 0.0 {
        (tol.ln() / probe.beta.ln()).ceil().clamp(1.0, max_order as f64) as usize
    } else {
        1
    };
    loop {
        let (v, cert) = build_disk_eigenvector(lambda, alpha, mu, order)?;
        if cert.residual <= tol {
            return Ok((v, cert));
        }
        if order >= max_order {
            return Err(Error::Residual {
                residual: cert.residual,
                tol,
                order,
            });
        }
        order = (order + order.div_ceil(4)).min(max_order);
    }
}

/// `count` points uniformly distributed in the disk `|z| < radius`.
pub fn sample_disk(radius: f64, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let t = 2.0 * PI * rng.random::<f64>();
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// Certificates for `lambdas`, computed in parallel, in input order.
pub fn certify_disk(
    alpha: &WeightSequence,
    mu: &WeightSequence,
    lambdas: &[Complex64],
    tol: f64,
    max_order: usize,
) -> Vec<Result<DiskCertificate>> {
    lambdas
        .par_iter()
        .map(|&l| build_disk_eigenvector_adaptive(l, alpha, mu, tol, max_order).map(|(_, c)| c))
        .collect()
}

/// `f_λ = e_λ ⊗ e_λ` with `e_λ = Σ_{i<=n} λ^i e_i`, in plain coefficients:
/// `2λ^{i+j}` on `e_i⊙e_j` for `i < j` and `λ^{2i}` on `e_i⊙e_i`.
/// Returns the map and the relative residual of `(S* ⊙ I) f = λ f` for the
/// unweighted shift.
pub fn unweighted_disk_eigenvector(lambda: Complex64, n: usize) -> Result<(SymCoefficientMap, f64)> {
    if !(lambda.norm() < 1.0) {
        return Err(Error::OutsideDisk {
            modulus: lambda.norm(),
            beta: lambda.norm(),
        });
    }
    if n == 0 {
        return Err(Error::Invalid("truncation order must be positive".into()));
    }
    let pow: Vec<Complex64> = (0..=2 * n as u32).map(|p| lambda.powu(p)).collect();
    let mut f = SymCoefficientMap::new();
    for i in 0..=n {
        f.add(i, i, pow[2 * i]);
        for j in i + 1..=n {
            f.add(i, j, 2.0 * pow[i + j]);
        }
    }
    let one = WeightSequence::constant(1.0);
    let residual = eigen_residual(&one, &one, n, lambda, &f)?;
    Ok((f, residual))
}

/// Grows `n` from `log(tol)/log|λ|` until the residual is at most `tol`.
pub fn unweighted_disk_eigenvector_adaptive(
    lambda: Complex64,
    tol: f64,
    max_n: usize,
) -> Result<(SymCoefficientMap, f64, usize)> {
    if !(tol > 0.0) {
        return Err(Error::Tolerance(tol));
    }
    let m = lambda.norm();
    let mut n = if m > 0.0 && m < 1.0 {
        ((tol.ln() / m.ln()).ceil() as usize).clamp(1, max_n.max(1))
    } else {
        1
    };
    loop {
        let (f, residual) = unweighted_disk_eigenvector(lambda, n)?;
        if residual <= tol {
            return Ok((f, residual, n));
        }
        if n >= max_n {
            return Err(Error::Residual {
                residual,
                tol,
                order: n,
            });
        }
        n = (n + n.div_ceil(4)).min(max_n);
    }
}
