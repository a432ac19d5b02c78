// SPDX-License-Identifier: Apache-2.0

//! Closed-form simultaneous bounds and the scans that recover their
//! constants numerically.

use super::{CompatError, Pair};
use crate::metric_core::ObjectiveSpec;

/// Which pair of the four objectives is being bounded, independent of order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Identical,
    SumSumMaxSum,
    SumMaxMaxMax,
    MaxMaxMaxSum,
    SumSumSumMax,
    SumSumMaxMax,
    SumMaxMaxSum,
}

impl PairKind {
    pub fn of(pair: &Pair) -> Option<PairKind> {
        use ObjectiveSpec as S;
        let (a, b) = (pair.first, pair.second);
        let known = [S::SUM_SUM, S::MAX_SUM, S::SUM_MAX, S::MAX_MAX];
        if !known.contains(&a) || !known.contains(&b) {
            return None;
        }
        if a == b {
            return Some(PairKind::Identical);
        }
        let has = |x: ObjectiveSpec, y: ObjectiveSpec| (a == x && b == y) || (a == y && b == x);
        Some(if has(S::SUM_SUM, S::MAX_SUM) {
            PairKind::SumSumMaxSum
        } else if has(S::SUM_MAX, S::MAX_MAX) {
            PairKind::SumMaxMaxMax
        } else if has(S::MAX_MAX, S::MAX_SUM) {
            PairKind::MaxMaxMaxSum
        } else if has(S::SUM_SUM, S::SUM_MAX) {
            PairKind::SumSumSumMax
        } else if has(S::SUM_SUM, S::MAX_MAX) {
            PairKind::SumSumMaxMax
        } else {
            PairKind::SumMaxMaxSum
        })
    }
}

/// Instance quantities some bounds depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub k: usize,
    pub k1: f64,
    pub k2: f64,
}

/// `(sqrt(a^2 + 2a + 5) + a + 1) / 2`: guarantee of the better of the
/// Max-Sum and Sum-Sum optima, where `a <= 1` is the ratio of differing to
/// shared slots.
pub fn overlap_split_bound(a: f64) -> f64 {
    ((a * a + 2.0 * a + 5.0).sqrt() + a + 1.0) / 2.0
}

/// Sum-Sum / Max-Sum guarantee for an instance whose optima differ in
/// `k_prime` of `k` slots, using the best of the two optima and the
/// stitched committee.
pub fn stitched_case_bound(k: usize, k_prime: usize) -> f64 {
    match k_prime {
        0 => 1.0,
        1 if k >= 3 => overlap_split_bound(1.0 / (k - 1) as f64),
        1 => 1.0 + 2f64.sqrt(),
        kp if kp % 2 == 0 => (5.0 + 17f64.sqrt()) / 4.0,
        _ => 1.0 + (5.0f64 / 3.0).sqrt(),
    }
}

/// Guaranteed simultaneous ratio for `pair`.
pub fn bound_value(pair: &Pair, params: BoundParams) -> Result<f64, CompatError> {
    let kind = PairKind::of(pair).ok_or_else(|| CompatError::UnknownPair(pair.to_string()))?;
    let k = params.k as f64;
    Ok(match kind {
        PairKind::Identical => 1.0,
        PairKind::SumSumMaxSum => (0..=params.k)
            .map(|kp| stitched_case_bound(params.k, kp))
            .fold(f64::NEG_INFINITY, f64::max),
        PairKind::SumMaxMaxMax => 1.0 + 2f64.sqrt(),
        PairKind::MaxMaxMaxSum => (params.k2 / params.k1).sqrt().min(2.0),
        PairKind::SumSumSumMax => k.sqrt().min(3.0),
        PairKind::SumSumMaxMax | PairKind::SumMaxMaxSum => 3.0,
    })
}

/// Maximum of `f` on `[lo, hi]`: a uniform grid of `resolution` points,
/// then ternary search between the neighbours of the best grid point.
pub fn scan_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, resolution: usize) -> f64 {
    assert!(resolution >= 2, "a scan needs at least two grid points");
    let step = (hi - lo) / (resolution - 1) as f64;
    let at = |i: usize| lo + step * i as f64;
    let best = (0..resolution)
        .max_by(|&i, &j| f(at(i)).total_cmp(&f(at(j))))
        .expect("nonempty grid");
    let (mut a, mut b) = (
        at(best.saturating_sub(1)),
        at((best + 1).min(resolution - 1)),
    );
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    f(at(best)).max(f((a + b) / 2.0))
}

/// `min(x, 1/x + 2, max(2 + 1/(2x), (1 + x)/2))` for an even split.
pub fn even_split_envelope(x: f64) -> f64 {
    x.min(1.0 / x + 2.0)
        .min((2.0 + 1.0 / (2.0 * x)).max((1.0 + x) / 2.0))
}

/// `min(x, 1/x + 2, max(2 + 2/(3x), (1 + x)/2))` for an odd split.
pub fn odd_split_envelope(x: f64) -> f64 {
    x.min(1.0 / x + 2.0)
        .min((2.0 + 2.0 / (3.0 * x)).max((1.0 + x) / 2.0))
}

/// Maximum of [`even_split_envelope`] on `x` in `[1, 100]`.
pub fn scan_even_split(resolution: usize) -> f64 {
    scan_max(even_split_envelope, 1.0, 100.0, resolution)
}

/// Maximum of [`odd_split_envelope`] on `x` in `[1, 100]`.
pub fn scan_odd_split(resolution: usize) -> f64 {
    scan_max(odd_split_envelope, 1.0, 100.0, resolution)
}
