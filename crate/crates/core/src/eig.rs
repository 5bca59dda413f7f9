//! Eigenvalue extraction.
//!
//! The production path for the blocks `B_k^±` is bisection on Sturm counts
//! ([`tridiag_eigenvalues`]); counts are overflow-free where direct
//! polynomial evaluation is not. The oracle path uses cyclic Jacobi
//! rotations on dense matrices ([`dense_sym_eigenvalues`]). The two share no
//! code.

use num_complex::Complex64;

use crate::blocks::{BlockSpec, TridiagonalSym};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_JACOBI_SWEEPS: usize = 100;

/// One distinct eigenvalue together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEntry {
    pub value: f64,
    pub block: Option<BlockSpec>,
    pub multiplicity: usize,
    /// Magnitude reference of the source matrix (its largest entry); zero
    /// tests are made relative to it.
    pub scale: f64,
}

/// Sorted eigenvalues with provenance. Equal values coming from different
/// blocks stay separate entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EigenMultiset {
    entries: Vec<EigenEntry>,
}

impl EigenMultiset {
    pub fn new(mut entries: Vec<EigenEntry>) -> Self {
        entries.retain(|e| e.multiplicity > 0);
        entries.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then_with(|| a.block.cmp(&b.block))
        });
        Self { entries }
    }

    /// Untagged multiset with unit scale (zero tests become absolute).
    pub fn from_values(values: &[f64]) -> Self {
        Self::new(
            values
                .iter()
                .map(|&value| EigenEntry {
                    value,
                    block: None,
                    multiplicity: 1,
                    scale: 1.0,
                })
                .collect(),
        )
    }

    /// Tag the eigenvalues of one block, folding bitwise-equal values into a
    /// single entry.
    pub fn from_block(block: BlockSpec, values: &[f64], scale: f64) -> Self {
        let mut entries: Vec<EigenEntry> = Vec::with_capacity(values.len());
        for &value in values {
            match entries.last_mut() {
                Some(last) if last.value == value => last.multiplicity += 1,
                _ => entries.push(EigenEntry {
                    value,
                    block: Some(block),
                    multiplicity: 1,
                    scale,
                }),
            }
        }
        Self::new(entries)
    }

    pub fn union(sets: impl IntoIterator<Item = EigenMultiset>) -> Self {
        Self::new(sets.into_iter().flat_map(|s| s.entries).collect())
    }

    pub fn entries(&self) -> &[EigenEntry] {
        &self.entries
    }

    /// Total count with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All values, repeated by multiplicity, ascending.
    pub fn values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    pub fn sum(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value * e.multiplicity as f64)
            .sum()
    }
}

/// Number of eigenvalues of `t` strictly less than `x`, from the signs of
/// the pivots of the `LDLᵀ` factorisation of `t - xI`.
pub fn sturm_count(t: &TridiagonalSym, x: f64) -> usize {
    sturm_count_raw(t.diag(), t.offdiag(), x, pivot_floor(t.scale()))
}

fn pivot_floor(scale: f64) -> f64 {
    if scale > 0.0 {
        EPS * scale
    } else {
        f64::MIN_POSITIVE
    }
}

fn sturm_count_raw(diag: &[f64], offdiag: &[f64], x: f64, floor: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 {
            d - x
        } else {
            let safe = if q.abs() < floor { floor.copysign(q) } else { q };
            (d - x) - offdiag[i - 1] * offdiag[i - 1] / safe
        };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of `t`, ascending, by bisection on Sturm counts inside
/// the Gershgorin enclosure.
///
/// `tol` is an absolute bracket width. Brackets are narrowed further, to
/// a few ulps of the block's own scale, so that eigenvalues of tiny blocks
/// keep their relative accuracy.
pub fn tridiag_eigenvalues(t: &TridiagonalSym, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Tolerance(tol));
    }
    let (diag, offdiag) = (t.diag(), t.offdiag());
    let mut out = Vec::with_capacity(diag.len());
    let mut start = 0;
    for end in 1..=diag.len() {
        let split = end == diag.len()
            || offdiag[end - 1].abs() <= EPS * (diag[end - 1].abs() + diag[end].abs());
        if split {
            bisect_irreducible(&diag[start..end], &offdiag[start..end - 1], tol, &mut out);
            start = end;
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn bisect_irreducible(diag: &[f64], offdiag: &[f64], tol: f64, out: &mut Vec<f64>) {
    if diag.len() == 1 {
        out.push(diag[0]);
        return;
    }
    let block = TridiagonalSym::new(diag.to_vec(), offdiag.to_vec()).expect("well-formed slice");
    let scale = block.scale();
    if scale == 0.0 {
        out.extend(std::iter::repeat_n(0.0, diag.len()));
        return;
    }
    let floor = pivot_floor(scale);
    let (lo, hi) = block.gershgorin();
    let pad = 2.0 * EPS * scale + f64::MIN_POSITIVE;
    let (lo, hi) = (lo - pad, hi + pad);
    let width = tol.min(4.0 * EPS * scale);
    for j in 0..diag.len() {
        let (mut a, mut b) = (lo, hi);
        while b - a > width {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count_raw(diag, offdiag, mid, floor) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
}

/// Eigenvalues of a dense real symmetric matrix by cyclic Jacobi rotations,
/// iterated until the off-diagonal Frobenius mass is at most `tol·‖M‖_F`.
pub fn dense_sym_eigenvalues(m: &DenseMatrix, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Tolerance(tol));
    }
    let n = m.rows();
    if n == 0 || !m.is_square() {
        return Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let sym_tol = 1e-12 * m.max_abs();
    for i in 0..n {
        for j in 0..i {
            let gap = (m[(i, j)] - m[(j, i)]).abs();
            if gap > sym_tol {
                return Err(Error::Asymmetric {
                    row: i,
                    col: j,
                    gap,
                });
            }
        }
    }

    let mut a = m.clone();
    // Work on the exactly symmetric part.
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let target = tol * a.frobenius_norm();
    let mut last_off = f64::INFINITY;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off = off_diagonal_mass(&a);
        if off <= target || off >= last_off {
            return Ok(sorted_diagonal(&a));
        }
        last_off = off;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if off_diagonal_mass(&a) <= target {
        Ok(sorted_diagonal(&a))
    } else {
        Err(Error::NoConvergence(MAX_JACOBI_SWEEPS))
    }
}

fn off_diagonal_mass(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn sorted_diagonal(a: &DenseMatrix) -> Vec<f64> {
    let mut d: Vec<f64> = (0..a.rows()).map(|i| a[(i, i)]).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_p = c * arp - s * arq;
        let new_q = s * arp + c * arq;
        a[(r, p)] = new_p;
        a[(p, r)] = new_p;
        a[(r, q)] = new_q;
        a[(q, r)] = new_q;
    }
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}

/// Eigenvalues of a general complex square matrix.
///
/// Indices whose row or column is empty off the diagonal are peeled off
/// first, exactly, the way balancing isolates eigenvalues; whatever core is
/// left goes through a Schur decomposition. Triangular-after-permutation
/// inputs (such as graded nilpotent truncations) therefore come back exact.
pub fn general_eigenvalues(m: &DenseMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.rows();
    if n == 0 || !m.is_square() {
        return Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let nz = |i: usize, j: usize| m[(i, j)] != Complex64::new(0.0, 0.0);
    let mut active = vec![true; n];
    let mut row_cnt = vec![0usize; n];
    let mut col_cnt = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && nz(i, j) {
                row_cnt[i] += 1;
                col_cnt[j] += 1;
            }
        }
    }
    let mut values = Vec::with_capacity(n);
    let mut queue: Vec<usize> = (0..n).filter(|&i| row_cnt[i] == 0 || col_cnt[i] == 0).collect();
    while let Some(i) = queue.pop() {
        if !active[i] {
            continue;
        }
        active[i] = false;
        values.push(m[(i, i)]);
        for r in 0..n {
            if active[r] && nz(r, i) {
                row_cnt[r] -= 1;
                if row_cnt[r] == 0 {
                    queue.push(r);
                }
            }
            if active[r] && nz(i, r) {
                col_cnt[r] -= 1;
                if col_cnt[r] == 0 {
                    queue.push(r);
                }
            }
        }
    }
    let core: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
    if !core.is_empty() {
        let c = nalgebra::DMatrix::from_fn(core.len(), core.len(), |a, b| m[(core[a], core[b])]);
        let schur = c
            .try_schur(EPS, 10_000)
            .ok_or(Error::NoConvergence(10_000))?;
        let eig = schur.eigenvalues().ok_or(Error::NoConvergence(10_000))?;
        values.extend(eig.iter().copied());
    }
    values.sort_by(|a, b| {
        a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
    });
    Ok(values)
}

/// Result of pairing two sorted lists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchReport {
    pub matched: bool,
    pub len_a: usize,
    pub len_b: usize,
    /// Largest `|a_i - b_i|` over the paired prefix.
    pub max_deviation: f64,
    /// First index where the pairing fails: a deviation above tolerance, or
    /// the end of the shorter list when the lengths differ.
    pub first_mismatch: Option<usize>,
}

/// Greedy pairing of two ascending lists within an absolute tolerance.
pub fn multiset_match(a: &[f64], b: &[f64], tol: f64) -> MatchReport {
    let mut max_deviation: f64 = 0.0;
    let mut first_mismatch = None;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let dev = (x - y).abs();
        max_deviation = max_deviation.max(dev);
        if first_mismatch.is_none() && !(dev <= tol) {
            first_mismatch = Some(i);
        }
    }
    if first_mismatch.is_none() && a.len() != b.len() {
        first_mismatch = Some(a.len().min(b.len()));
    }
    MatchReport {
        matched: first_mismatch.is_none(),
        len_a: a.len(),
        len_b: b.len(),
        max_deviation,
        first_mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::Kind;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tri(d: &[f64], e: &[f64]) -> TridiagonalSym {
        TridiagonalSym::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_count(&tri(&[0.5], &[]), 0.0), 0);
        assert_eq!(sturm_count(&tri(&[0.0, 0.0], &[FRAC_1_SQRT_2]), 0.0), 1);
        assert_eq!(sturm_count(&tri(&[0.0, 0.0], &[FRAC_1_SQRT_2]), 1.0), 2);
        assert_eq!(sturm_count(&tri(&[0.0, 0.0], &[FRAC_1_SQRT_2]), -1.0), 0);
    }

    #[test]
    fn tridiag_examples() {
        assert_eq!(tridiag_eigenvalues(&tri(&[0.5], &[]), 1e-12).unwrap(), vec![0.5]);
        let ev = tridiag_eigenvalues(&tri(&[0.0, 0.0], &[FRAC_1_SQRT_2]), 1e-12).unwrap();
        assert!((ev[0] + FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((ev[1] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(matches!(
            tridiag_eigenvalues(&tri(&[0.5], &[]), 0.0),
            Err(Error::Tolerance(_))
        ));
        assert!(tridiag_eigenvalues(&tri(&[0.5], &[]), f64::NAN).is_err());
    }

    #[test]
    fn zero_couplings_split() {
        // Decoupled 2x2 and 1x1 pieces.
        let t = tri(&[0.0, 0.0, 3.0], &[1.0, 0.0]);
        let ev = tridiag_eigenvalues(&t, 1e-13).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-13);
        assert!((ev[1] - 1.0).abs() < 1e-13);
        assert_eq!(ev[2], 3.0);
        let z = tri(&[0.0, 0.0, 0.0], &[0.0, 0.0]);
        assert_eq!(tridiag_eigenvalues(&z, 1e-10).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn tiny_blocks_keep_relative_accuracy() {
        let s = 2f64.powi(-99);
        let t = tri(&[0.0, 0.0], &[s]);
        let ev = tridiag_eigenvalues(&t, 1e-10).unwrap();
        assert!((ev[1] - s).abs() <= 8.0 * f64::EPSILON * s);
    }

    #[test]
    fn jacobi_examples() {
        let ev = dense_sym_eigenvalues(&DenseMatrix::identity(3), 1e-14).unwrap();
        assert_eq!(ev, vec![1.0, 1.0, 1.0]);
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let ev = dense_sym_eigenvalues(&m, 1e-14).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        let bad = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]);
        assert!(matches!(
            dense_sym_eigenvalues(&bad, 1e-14),
            Err(Error::Asymmetric { .. })
        ));
        let rect = DenseMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            dense_sym_eigenvalues(&rect, 1e-14),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn general_eigenvalues_triangular_and_core() {
        let c = |re: f64| Complex64::new(re, 0.0);
        // Strictly lower triangular: exact zeros.
        let mut m = DenseMatrix::zeros(4, 4);
        m[(1, 0)] = c(1.0);
        m[(2, 1)] = c(1.0);
        m[(3, 2)] = c(1.0);
        assert!(general_eigenvalues(&m)
            .unwrap()
            .iter()
            .all(|z| z.norm() == 0.0));
        // Rotation by 90 degrees: ±i, left for the Schur core.
        let r = DenseMatrix::from_rows(&[vec![c(0.0), c(-1.0)], vec![c(1.0), c(0.0)]]);
        let ev = general_eigenvalues(&r).unwrap();
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn match_reports() {
        let r = multiset_match(&[0.5], &[0.5 + 1e-13], 1e-10);
        assert!(r.matched);
        assert!((r.max_deviation - 1e-13).abs() < 1e-15);
        let r = multiset_match(&[0.0, 1.0], &[0.0], 1.0);
        assert!(!r.matched);
        assert_eq!(r.first_mismatch, Some(1));
        let r = multiset_match(&[0.0, 1.0], &[0.0, 1.5], 0.1);
        assert_eq!(r.first_mismatch, Some(1));
        assert_eq!(r.max_deviation, 0.5);
    }

    #[test]
    fn multiset_bookkeeping() {
        let b = BlockSpec::new(Kind::Sym, 4);
        let s = EigenMultiset::from_block(b, &[-1.0, 0.0, 0.0], 1.0);
        assert_eq!(s.entries().len(), 2);
        assert_eq!(s.len(), 3);
        assert_eq!(s.values(), vec![-1.0, 0.0, 0.0]);
        let u = EigenMultiset::union([s.clone(), EigenMultiset::from_values(&[0.0])]);
        assert_eq!(u.len(), 4);
        assert_eq!(u.entries().len(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn tridiagonal() -> impl Strategy<Value = TridiagonalSym> {
            (1usize..14).prop_flat_map(|d| {
                (
                    proptest::collection::vec(-2.0f64..2.0, d),
                    proptest::collection::vec(-2.0f64..2.0, d - 1),
                )
                    .prop_map(|(a, b)| TridiagonalSym::new(a, b).unwrap())
            })
        }

        proptest! {
            #[test]
            fn sturm_monotone_and_complete(t in tridiagonal(), xs in proptest::collection::vec(-5.0f64..5.0, 2..10)) {
                let mut xs = xs;
                xs.sort_by(f64::total_cmp);
                let counts: Vec<usize> = xs.iter().map(|&x| sturm_count(&t, x)).collect();
                prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
                let (_, hi) = t.gershgorin();
                prop_assert_eq!(sturm_count(&t, hi + 1.0), t.dim());
            }

            #[test]
            fn bisection_agrees_with_jacobi(t in tridiagonal()) {
                let fast = tridiag_eigenvalues(&t, 1e-13).unwrap();
                let slow = dense_sym_eigenvalues(&t.to_dense(), 1e-15).unwrap();
                let r = multiset_match(&fast, &slow, 1e-10);
                prop_assert!(r.matched, "{r:?}");
                let tr = t.trace();
                prop_assert!((fast.iter().sum::<f64>() - tr).abs() <= 1e-9 * (1.0 + tr.abs()));
                let (lo, hi) = t.gershgorin();
                prop_assert!(fast.iter().all(|&x| x >= lo - 1e-12 && x <= hi + 1e-12));
            }

            #[test]
            fn jacobi_preserves_trace_and_frobenius(
                entries in proptest::collection::vec(-3.0f64..3.0, 78)
            ) {
                let n = 12;
                let mut m = DenseMatrix::zeros(n, n);
                let mut it = entries.into_iter();
                for i in 0..n {
                    for j in 0..=i {
                        let v = it.next().unwrap();
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
                let ev = dense_sym_eigenvalues(&m, 1e-15).unwrap();
                let tr = m.trace();
                prop_assert!((ev.iter().sum::<f64>() - tr).abs() <= 1e-10 * (1.0 + tr.abs()));
                let f2 = m.frobenius_norm().powi(2);
                let s2: f64 = ev.iter().map(|x| x * x).sum();
                prop_assert!((s2 - f2).abs() <= 1e-9 * f2);
            }
        }
    }
}
