//! Closed-form Haar coefficients of the symmetrized net `P_a(sigma) u P_a(sigma*)`.
//!
//! The symmetrized discrepancy function is the mean of the two shifted ones, so
//! `mu~ = (mu^sigma + mu^sigma*) / 2`; [`sym_from_halves`] evaluates that relation
//! directly and [`sym_case_coefficient`] the per-region simplifications.

use num_traits::{One, Signed, Zero};

use super::cases::{case_coefficient_pa, PaParams};
use super::{classify_region, HaarIndex, RegionId};
use crate::netgen::complement_shift;
use crate::rational::{frac, int, pow2, Rational};

fn q(v: i64) -> Rational {
    int(v)
}

fn tent(x: Rational) -> Rational {
    Rational::one() - (Rational::one() - x).abs()
}

/// `(mu^sigma + mu^sigma*) / 2` from the plain-net closed forms.
pub fn sym_from_halves(p: &PaParams, idx: &HaarIndex) -> Rational {
    let shift_star = complement_shift(p.shift());
    let star = PaParams::new(p.n, p.a_bits(), &shift_star).expect("same sizes");
    (case_coefficient_pa(p, idx) + case_coefficient_pa(&star, idx)) * frac(1, 2)
}

/// Closed-form `mu~_{j,m}` of the symmetrized net.
pub fn sym_case_coefficient(p: &PaParams, idx: &HaarIndex) -> Rational {
    let n = p.n as i32;
    let ne = n as i64;
    let (j1, j2) = (idx.j1, idx.j2);
    let (j1e, j2e) = (j1 as i64, j2 as i64);
    let r = |k: i32| idx.r(k);
    let s = |k: i32| idx.s(k);
    let sn = p.sigma(n);
    // (-1)^sigma_n
    let parity = 1 - 2 * sn;
    match classify_region(j1, j2, n) {
        RegionId::J1 => pow2(-ne - 1) + pow2(-2 * ne - 2),
        RegionId::J2 => {
            pow2(-2 * ne - 3) * (q(2) - pow2(ne - 2 * j2e))
                - q(1 + p.a(j2 + 1) * (2 * (p.sigma(j2 + 1) ^ sn) - 1)) * pow2(-2 * ne - 2)
        }
        RegionId::J3 => {
            let sum = (1..n).fold(Rational::zero(), |acc, k| {
                acc + q(p.a(k) * (1 - 2 * (s(k) ^ p.sigma(k) ^ sn))) * pow2(-(ne - k as i64))
            });
            -pow2(-3 * ne - 1) + pow2(-2 * ne - 2) * sum
        }
        RegionId::J4 => -pow2(-2 * j2e - 3),
        RegionId::J5 => -pow2(-ne - 3),
        RegionId::J6 => -pow2(-ne - 2 * j1e - 3),
        RegionId::J7 => -pow2(-2 * j1e - 3),
        RegionId::J8 => {
            pow2(-2 * ne - 2) * q(p.sigma(j2 + 1) + p.sigma_p(j2 + 1) - 1) * q(2 * sn - 1)
        }
        RegionId::J9 => {
            pow2(-2 * ne - 2)
                * q(2 * ((p.a(n - j1) * r(1)) ^ p.sigma(j2 + 1)) - 1)
                * q(2 * ((p.a(j2 + 1) * r(1)) ^ p.sigma(n - j1)) - 1)
        }
        RegionId::J10 => {
            let sum = (1..n).fold(Rational::zero(), |acc, k| {
                acc + q((1 - p.a(k)) * (2 * (s(k) ^ p.sigma(k)) - 1)) * pow2(-(ne - k as i64))
            });
            -q(parity) * pow2(-2 * ne - 2) * sum
        }
        RegionId::J11 => {
            let head = (p.a(j2 + 1) * r(1)) ^ p.sigma(j2 + 1);
            let full = (2..=j1).fold(Rational::zero(), |acc, k| acc + pow2(k as i64 - 1 - j1e));
            let u = (2..=j1).fold(Rational::zero(), |acc, k| {
                acc + q(r(k) ^ (p.a(n + 1 - k) * r(1)) ^ p.sigma(n + 1 - k)) * pow2(k as i64 - 1 - j1e)
            });
            let u_star = &full - &u;
            let vfull = (1..=j2).fold(Rational::zero(), |acc, k| acc + pow2(k as i64 - 1 - j2e));
            let v = (1..=j2).fold(Rational::zero(), |acc, k| {
                acc + q(s(k) ^ (p.a(k) * r(1)) ^ p.sigma(k)) * pow2(k as i64 - 1 - j2e)
            });
            let v_star = &vfull - &v;
            let low = pow2(-j1e);
            let own = tent(q(head) + &u + &low * q(r(1) ^ sn)) * &v
                + tent(q(head ^ 1) + &u + &low * q(r(1) ^ sn)) * (Rational::one() - &v);
            let star = tent(q(head ^ 1) + &u_star + &low * q(r(1) ^ sn ^ 1)) * &v_star
                + tent(q(head) + &u_star + &low * q(r(1) ^ sn ^ 1)) * (Rational::one() - &v_star);
            pow2(-2 * ne - 2) * (own + star) - pow2(-2 * ne - 2)
        }
        RegionId::J12 => {
            let empty = -pow2(-2 * j1e - 2 * j2e - 4);
            // flip = 1 evaluates the sigma* half
            let half = |flip: i64| {
                let x = (1..=n - j1).fold(Rational::zero(), |acc, k| {
                    acc + q(s(k) ^ (p.a(k) * r(1)) ^ p.sigma(k) ^ flip) * pow2(-(ne - j1e - k as i64))
                });
                let y = (2..=n - j2).fold(q(r(1) ^ sn ^ flip) * pow2(-(ne - j2e - 1)), |acc, k| {
                    acc + q(r(k) ^ (p.a(n + 1 - k) * r(1)) ^ p.sigma(n + 1 - k) ^ flip)
                        * pow2(-(ne - j2e - k as i64))
                });
                pow2(-ne - j1e - j2e - 3) * tent(x) * tent(y)
            };
            if j1 + j2 == n {
                return half(0) + half(1) + empty;
            }
            let holds = |flip: i64| {
                (n + 1 - j1..=j2)
                    .all(|mu| s(mu) ^ (p.a(mu) * r(1)) ^ p.sigma(mu) ^ flip == r(n + 1 - mu))
            };
            if holds(0) {
                half(0) + empty
            } else if holds(1) {
                half(1) + empty
            } else {
                empty
            }
        }
        RegionId::J13 => -pow2(-2 * j1e - 2 * j2e - 4),
    }
}
