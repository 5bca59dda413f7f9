//! Point spectra of `S_w ⊙ S_w*` and `S_w ∧ S_w*`, block by block.
//!
//! The symmetric (antisymmetric) product is the direct sum of the blocks
//! `B_k^+`, `k >= 0` (`B_k^-`, `k >= 1`), so its point spectrum is the
//! multiset union of the block spectra. Only a truncation `k <= k_max` is
//! ever materialised; [`PointSpectrum::tail_bound`] bounds the first block
//! left out.

use rayon::prelude::*;

use crate::blocks::{build_block_matrix, BlockSpec, Kind};
use crate::eig::{tridiag_eigenvalues, EigenMultiset};
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpectrum {
    pub block: BlockSpec,
    /// Ascending, repeated by multiplicity.
    pub eigenvalues: Vec<f64>,
    /// Magnitude reference used for zero tests.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSpectrum {
    pub kind: Kind,
    pub k_max: usize,
    /// Ordered by `k`.
    pub blocks: Vec<BlockSpectrum>,
    /// Bound on `|λ|` over block `k_max + 1`, when it can be formed.
    pub tail_bound: Option<f64>,
}

impl PointSpectrum {
    pub fn multiset(&self) -> EigenMultiset {
        EigenMultiset::union(
            self.blocks
                .iter()
                .map(|b| EigenMultiset::from_block(b.block, &b.eigenvalues, b.scale)),
        )
    }

    pub fn block(&self, k: usize) -> Option<&BlockSpectrum> {
        self.blocks.iter().find(|b| b.block.k == k)
    }

    pub fn total_count(&self) -> usize {
        self.blocks.iter().map(|b| b.eigenvalues.len()).sum()
    }
}

/// Block spectra of `S_w ⊙ S_w*` (`Kind::Sym`, levels `0..=k_max`) or
/// `S_w ∧ S_w*` (`Kind::Asym`, levels `1..=k_max`).
///
/// The level-0 symmetric block is the `1×1` zero matrix and supplies the
/// single isolated `0`.
pub fn point_spectrum(
    kind: Kind,
    w: &WeightSequence,
    k_max: usize,
    tol: f64,
) -> Result<PointSpectrum> {
    if !(tol > 0.0) {
        return Err(Error::Tolerance(tol));
    }
    let blocks = (kind.first_level()..=k_max)
        .into_par_iter()
        .map(|k| {
            let t = build_block_matrix(kind, k, w)?;
            Ok(BlockSpectrum {
                block: BlockSpec::new(kind, k),
                eigenvalues: tridiag_eigenvalues(&t, tol)?,
                scale: t.scale(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail_bound = build_block_matrix(kind, k_max + 1, w).ok().map(|t| {
        let (lo, hi) = t.gershgorin();
        lo.abs().max(hi.abs())
    });
    Ok(PointSpectrum {
        kind,
        k_max,
        blocks,
        tail_bound,
    })
}

/// Exact spectra for `w(i) = a^{-i}`, `a >= 1`:
/// `a^{-(k-1)} cos((2j-1)π/(k+2))`, `1 <= j <= ⌊(k+2)/2⌋` on the symmetric
/// side and `a^{-(k-1)} cos(2jπ/(k+2))`, `1 <= j <= ⌊(k+1)/2⌋` on the
/// antisymmetric side.
pub fn closed_form_spectrum(a: f64, kind: Kind, k_max: usize) -> Result<PointSpectrum> {
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::GeometricBase(a));
    }
    let pi = std::f64::consts::PI;
    let blocks = (kind.first_level()..=k_max)
        .map(|k| {
            let factor = a.powf(1.0 - k as f64);
            let denom = (k + 2) as f64;
            let mut eigenvalues: Vec<f64> = match kind {
                Kind::Sym => (1..=(k + 2) / 2)
                    .map(|j| factor * ((2 * j - 1) as f64 * pi / denom).cos())
                    .collect(),
                Kind::Asym => (1..=(k + 1) / 2)
                    .map(|j| factor * ((2 * j) as f64 * pi / denom).cos())
                    .collect(),
            };
            eigenvalues.sort_by(f64::total_cmp);
            BlockSpectrum {
                block: BlockSpec::new(kind, k),
                eigenvalues,
                scale: factor,
            }
        })
        .collect();
    Ok(PointSpectrum {
        kind,
        k_max,
        blocks,
        tail_bound: Some(a.powf(-(k_max as f64))),
    })
}

/// Eigenvalues (with multiplicity) within `tol` of zero, the tolerance taken
/// relative to each entry's block scale.
pub fn zero_multiplicity(spec: &EigenMultiset, tol: f64) -> usize {
    spec.entries()
        .iter()
        .filter(|e| e.value.abs() <= tol * e.scale)
        .map(|e| e.multiplicity)
        .sum()
}
