//! Recurrence and action paths against independent constructions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specshift_core::blocks::{build_block_matrix, eval_char_poly};
use specshift_core::eig::{
    dense_sym_eigenvalues, general_eigenvalues, multiset_match, tridiag_eigenvalues,
};
use specshift_core::oracle::{
    build_truncated_sym_product, build_vk_operator, oracle_block_eigenvalues,
};
use specshift_core::shiftdiag::{apply_adj_shift_diag, apply_shift_diag};
use specshift_core::{BasisLabel, DenseMatrix, Kind, ProductKind, WeightSequence};

fn random_weights(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> WeightSequence {
    let v: Vec<f64> = (0..len).map(|_| rng.random_range(lo..hi)).collect();
    WeightSequence::explicit_real(&v).unwrap()
}

/// `det(m)` by Gaussian elimination with partial pivoting.
fn det(mut m: DenseMatrix) -> f64 {
    let n = m.rows();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[(a, c)].abs().total_cmp(&m[(b, c)].abs()))
            .unwrap();
        if m[(p, c)] == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..n {
                let t = m[(p, j)];
                m[(p, j)] = m[(c, j)];
                m[(c, j)] = t;
            }
            d = -d;
        }
        d *= m[(c, c)];
        for r in c + 1..n {
            let f = m[(r, c)] / m[(c, c)];
            for j in c..n {
                let v = m[(c, j)];
                m[(r, j)] -= f * v;
            }
        }
    }
    d
}

#[test]
fn characteristic_polynomial_matches_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..6 {
        let w = random_weights(&mut rng, 40, 0.5, 1.5);
        for kind in [Kind::Sym, Kind::Asym] {
            for k in kind.first_level()..=25 {
                let b = build_block_matrix(kind, k, &w).unwrap().to_dense();
                let d = b.rows();
                for _ in 0..3 {
                    let x = rng.random_range(-1.5..1.5);
                    let mut shifted = b.clone();
                    for i in 0..d {
                        for j in 0..d {
                            shifted[(i, j)] = -shifted[(i, j)];
                        }
                        shifted[(i, i)] += x;
                    }
                    let reference = det(shifted);
                    let value = eval_char_poly(kind, k, x, &w).unwrap();
                    let scale = (x.abs() + 2.0 * b.max_abs()).powi(d as i32);
                    assert!(
                        (value - reference).abs() <= 1e-10 * scale,
                        "trial {trial} {kind} k={k} x={x}: {value} vs {reference}"
                    );
                }
            }
        }
    }
}

#[test]
fn blocks_match_oracle_sectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let w = random_weights(&mut rng, 50, 0.1, 2.0);
        for k in 0..=30 {
            let mut union = Vec::new();
            for kind in [Kind::Sym, Kind::Asym] {
                if k < kind.first_level() {
                    continue;
                }
                let fast = tridiag_eigenvalues(&build_block_matrix(kind, k, &w).unwrap(), 1e-12)
                    .unwrap();
                let slow = oracle_block_eigenvalues(kind, k, &w, 1e-12).unwrap();
                let r = multiset_match(&fast, &slow, 1e-8);
                assert!(r.matched, "{kind} k={k}: {r:?}");
                union.extend(slow);
            }
            let full = dense_sym_eigenvalues(
                &build_vk_operator(k, &w).unwrap().to_dense_real().unwrap(),
                1e-12,
            )
            .unwrap();
            union.sort_by(f64::total_cmp);
            assert!(multiset_match(&union, &full, 1e-9).matched, "k={k}");
        }
    }
}

#[test]
fn actions_agree_with_truncation_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 31;
    let cplx = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
        (0..=n + 1)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    };
    let alpha = WeightSequence::explicit(cplx(&mut rng)).unwrap();
    let mu = WeightSequence::explicit(cplx(&mut rng)).unwrap();
    for (which, act) in [
        (ProductKind::ShiftDiag, apply_shift_diag as fn(_, _, &_, &_) -> _),
        (ProductKind::AdjShiftDiag, apply_adj_shift_diag),
    ] {
        let op = build_truncated_sym_product(which, &alpha, &mu, n).unwrap();
        for i in 0..=30 {
            for j in i..=30 {
                let image = act(i, j, &alpha, &mu).unwrap();
                let col = op.position(BasisLabel::Pair { i, j }).unwrap();
                let mut x = vec![Complex64::new(0.0, 0.0); op.dim()];
                x[col] = Complex64::new(if i == j { 1.0 } else { std::f64::consts::FRAC_1_SQRT_2 }, 0.0);
                let from_matrix = op.to_map(&op.apply(&x));
                assert!(
                    image.distance(&from_matrix) < 1e-14,
                    "{which:?} ({i},{j}): {image:?} vs {from_matrix:?}"
                );
            }
        }
    }
}

#[test]
fn shift_diag_truncation_is_nilpotent() {
    let alpha = WeightSequence::dirichlet();
    let mu = WeightSequence::bergman();
    let n = 40;
    let op = build_truncated_sym_product(ProductKind::ShiftDiag, &alpha, &mu, n).unwrap();
    assert!(op.is_graded(1));
    let a = op.to_dense();
    let mut power = a.clone();
    let levels = 2 * n + 1;
    for p in 2..=levels {
        power = a.matmul(&power);
        assert_eq!(power.is_zero(), p == levels, "power {p}");
    }
    let ev = general_eigenvalues(&a).unwrap();
    assert_eq!(ev.len(), op.dim());
    assert!(ev.iter().all(|z| z.norm() <= 1e-10));
}

#[test]
fn adjoint_norm_sandwich() {
    use specshift_core::shiftdiag::{estimate_norm_truncated, norm_bounds_adj};
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..4 {
        let alpha = random_weights(&mut rng, 80, -1.5, 1.5);
        let mu = random_weights(&mut rng, 80, -1.5, 1.5);
        let bounds = norm_bounds_adj(&alpha, &mu, 60);
        let mut last = 0.0;
        for n in [20, 40, 60] {
            let op = build_truncated_sym_product(ProductKind::AdjShiftDiag, &alpha, &mu, n).unwrap();
            let est = estimate_norm_truncated(&op, 400, seed);
            assert!(est <= bounds.upper + 1e-8);
            assert!(est >= last - 1e-9, "estimate dropped at n={n}");
            last = est;
        }
        assert!(bounds.lower <= last + 1e-12);
    }
}
