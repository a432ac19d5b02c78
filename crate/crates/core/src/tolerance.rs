// SPDX-License-Identifier: Apache-2.0

//! Floating-point comparison rules shared by every module.
//!
//! Distances are `f64` and irrational constants (square roots of 2 and 7)
//! appear in most of the closed-form instances, so exact equality is never
//! used on computed values.

/// Relative tolerance for equality and inequality checks.
pub const REL_TOL: f64 = 1e-9;

/// Absolute floor used when both operands are close to zero.
pub const ABS_TOL: f64 = 1e-12;

/// Tolerance used when comparing finite-`n` lower-bound instances against
/// their `n -> infinity` limits.
pub const LIMIT_TOL: f64 = 1e-4;

/// Allowed slack between `a` and `b`.
#[inline]
pub fn slack_of(a: f64, b: f64) -> f64 {
    REL_TOL * a.abs().max(b.abs()) + ABS_TOL
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= slack_of(a, b)
}

/// `a <= b` up to tolerance.
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + slack_of(a, b)
}

/// `a < b` by more than the tolerance.
#[inline]
pub fn strictly_less(a: f64, b: f64) -> bool {
    a < b - slack_of(a, b)
}

/// Ratio with the conventions used for approximation factors: `0/0 = 1`
/// and `x/0 = +inf` for `x > 0`.
pub fn ratio(value: f64, optimum: f64) -> f64 {
    if optimum.abs() <= ABS_TOL {
        if value.abs() <= ABS_TOL {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        value / optimum
    }
}
