//! Closed-form Haar coefficients of `Delta(., P_a(sigma))`, one formula per region.
//!
//! Signs follow the region formulas as derived case by case. Where they disagree
//! with the generic per-point formulas (the `J7` constant), the generic value is
//! the correct one; callers compare these values in absolute value.

use num_traits::{One, Signed, Zero};

use super::{classify_region, HaarIndex, RegionId};
use crate::error::{param, Result};
use crate::netgen::{bit, ShiftVector};
use crate::rational::{int, pow2, Rational};

/// Net parameters `(n, a, sigma)` of the `P_a(sigma)` family with 1-indexed accessors.
#[derive(Clone, Copy, Debug)]
pub struct PaParams<'a> {
    pub n: usize,
    a: &'a [bool],
    shift: &'a ShiftVector,
}

impl<'a> PaParams<'a> {
    pub fn new(n: usize, a: &'a [bool], shift: &'a ShiftVector) -> Result<Self> {
        if n == 0 || a.len() + 1 != n || shift.len() != n {
            return param(format!(
                "need |a| = n-1 and |shift| = n (n = {n}, |a| = {}, |shift| = {})",
                a.len(),
                shift.len()
            ));
        }
        Ok(Self { n, a, shift })
    }

    pub fn a(&self, i: i32) -> i64 {
        bit(self.a, i as usize)
    }

    pub fn sigma(&self, i: i32) -> i64 {
        self.shift.sigma(i as usize)
    }

    /// `sigma'_i = sigma_i xor a_i`.
    pub fn sigma_p(&self, i: i32) -> i64 {
        self.sigma(i) ^ self.a(i)
    }

    /// `l = sum_{i<=n} (1 - 2 sigma_i)`.
    pub fn ell(&self) -> i64 {
        (1..=self.n as i32).map(|i| 1 - 2 * self.sigma(i)).sum()
    }

    /// `L = sum_{i<n} a_i (1 - 2 sigma_i)`.
    pub fn big_l(&self) -> i64 {
        (1..self.n as i32).map(|i| self.a(i) * (1 - 2 * self.sigma(i))).sum()
    }

    pub fn a_bits(&self) -> &'a [bool] {
        self.a
    }

    pub fn shift(&self) -> &'a ShiftVector {
        self.shift
    }

    pub fn weight(&self) -> usize {
        self.a.iter().filter(|b| **b).count()
    }
}

fn q(v: i64) -> Rational {
    int(v)
}

/// `1 - |1 - x|`.
fn tent(x: Rational) -> Rational {
    Rational::one() - (Rational::one() - x).abs()
}

/// Closed-form `mu_{j,m}` for the net `P_a(sigma)`.
pub fn case_coefficient_pa(p: &PaParams, idx: &HaarIndex) -> Rational {
    let n = p.n as i32;
    let ne = n as i64;
    let (j1, j2) = (idx.j1, idx.j2);
    let (j1e, j2e) = (j1 as i64, j2 as i64);
    let r = |k: i32| idx.r(k);
    let s = |k: i32| idx.s(k);
    let sn = p.sigma(n);
    match classify_region(j1, j2, n) {
        RegionId::J1 => pow2(-ne - 1) + pow2(-2 * ne - 2) + pow2(-ne - 3) * q(p.ell() - p.big_l()),
        RegionId::J2 => {
            let sum = (1..=j2).fold(Rational::zero(), |acc, k| {
                acc + q((s(k) ^ p.sigma(k)) + (s(k) ^ p.sigma_p(k))) * pow2(-(ne + 1 - k as i64))
            });
            pow2(-2 * ne - 2) - pow2(-ne - j2e - 3)
                - pow2(-2 * ne - 1) * q(p.sigma(j2 + 1) ^ (p.a(j2 + 1) * sn))
                + pow2(-2 * j2e - 3) * sum
        }
        RegionId::J3 => {
            let sum = (1..n).fold(Rational::zero(), |acc, k| {
                acc + q(s(k) ^ (p.a(k) * (sn ^ 1)) ^ p.sigma(k)) * pow2(-(ne - k as i64))
            });
            pow2(-2 * ne - 1) * (sum - q(sn))
        }
        RegionId::J4 => pow2(-2 * j2e - 3),
        RegionId::J5 => {
            pow2(-2 * ne - 2) - pow2(-ne - 3) + pow2(-ne - 3) * q(p.big_l()) - pow2(-2 * ne - 1) * q(sn)
        }
        RegionId::J6 => {
            let eps = (2..=j1).fold(q(r(1) ^ sn) * pow2(-ne), |acc, k| {
                acc + q(r(k) ^ (p.a(n + 1 - k) * r(1)) ^ p.sigma(n + 1 - k)) * pow2(-(ne + 1 - k as i64))
            });
            pow2(-2 * ne - 2 * j1e - 3)
                * (pow2(2 * j1e + 1) - pow2(j1e + ne) + pow2(2 * ne + 1) * eps
                    - pow2(2 * j1e + 2) * q((p.a(n - j1) * r(1)) ^ p.sigma(n - j1)))
        }
        RegionId::J7 => -pow2(-2 * j1e - 3),
        RegionId::J8 => {
            let sum = (1..=j2).fold(Rational::zero(), |acc, k| {
                acc + q(p.a(k) * (2 * (s(k) ^ p.sigma(k)) - 1)) * pow2(-(ne - k as i64))
            });
            let t = p.sigma(j2 + 1);
            pow2(-2 * j2e - 4) * sum
                + pow2(-2 * ne - 2) * q(1 + 2 * t * (sn - 1) + 2 * sn * (p.sigma_p(j2 + 1) - 1))
        }
        RegionId::J9 => {
            pow2(-2 * ne - 2)
                * q(2 * ((p.a(n - j1) * r(1)) ^ p.sigma(j2 + 1)) - 1)
                * q(2 * ((p.a(j2 + 1) * r(1)) ^ p.sigma(n - j1)) - 1)
        }
        RegionId::J10 => {
            let sum = (1..n).fold(Rational::zero(), |acc, k| {
                acc + q(s(k) ^ (p.a(k) * (sn ^ 1)) ^ p.sigma(k)) * pow2(-(ne - k as i64))
            });
            pow2(-2 * ne - 2) * (Rational::one() - q(2) * (q(sn) - sum).abs())
        }
        RegionId::J11 => {
            // the free digit t_{j2+1} decides both tents
            let head = (p.a(j2 + 1) * r(1)) ^ p.sigma(j2 + 1);
            let tail = (2..=j1).fold(q(r(1) ^ sn) * pow2(-j1e), |acc, k| {
                acc + q(r(k) ^ (p.a(n + 1 - k) * r(1)) ^ p.sigma(n + 1 - k)) * pow2(-(j1e - k as i64 + 1))
            });
            let v = (1..=j2).fold(Rational::zero(), |acc, k| {
                acc + q(s(k) ^ (p.a(k) * r(1)) ^ p.sigma(k)) * pow2(-(j2e - k as i64 + 1))
            });
            let y0 = tent(q(head) + &tail);
            let y1 = tent(q(head ^ 1) + &tail);
            pow2(-2 * ne - 1) * (y0 * &v + y1 * (Rational::one() - v)) - pow2(-2 * ne - 2)
        }
        RegionId::J12 => {
            let empty = -pow2(-2 * j1e - 2 * j2e - 4);
            if !j12_occupied(p, idx) {
                return empty;
            }
            let x = (1..=n - j1).fold(Rational::zero(), |acc, k| {
                acc + q(s(k) ^ (p.a(k) * r(1)) ^ p.sigma(k)) * pow2(-(ne - j1e - k as i64))
            });
            let y = (2..=n - j2).fold(q(r(1) ^ sn) * pow2(-(ne - j2e - 1)), |acc, k| {
                acc + q(r(k) ^ (p.a(n + 1 - k) * r(1)) ^ p.sigma(n + 1 - k)) * pow2(-(ne - j2e - k as i64))
            });
            pow2(-ne - j1e - j2e - 2) * tent(x) * tent(y) + empty
        }
        RegionId::J13 => -pow2(-2 * j1e - 2 * j2e - 4),
    }
}

/// The digit system deciding whether a `J12` box holds a point of `P_a(sigma)`:
/// `s_mu xor a_mu r_1 xor sigma_mu = r_{n+1-mu}` for `n+1-j1 <= mu <= j2`.
pub fn j12_occupied(p: &PaParams, idx: &HaarIndex) -> bool {
    let n = p.n as i32;
    (n + 1 - idx.j1..=idx.j2)
        .all(|mu| idx.s(mu) ^ (p.a(mu) * idx.r(1)) ^ p.sigma(mu) == idx.r(n + 1 - mu))
}

/// The `L` and `l` statistics of the parameters, for reports.
pub fn shift_statistics(p: &PaParams) -> (i64, i64) {
    (p.ell(), p.big_l())
}
