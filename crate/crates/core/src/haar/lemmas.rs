//! Per-region Parseval masses `sum_{j in J_i} 2^|j| sum_m mu_{j,m}^2`.
//!
//! [`Method::Closed`] evaluates the closed formula of the region. [`Method::Direct`]
//! sums generic level masses of the generated net; the three infinite regions are
//! summed over a finite window and completed by their geometric remainder, which is
//! exact because beyond level `n` no point is interior to a dyadic box.

use num_traits::Zero;
use rayon::prelude::*;

use super::cases::PaParams;
use super::{level_mass, RegionId};
use crate::error::Result;
use crate::netgen::{generate_pa_direct, symmetrize};
use crate::points::DyadicPointSet;
use crate::rational::{frac, int, pow2, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Direct,
}

impl std::str::FromStr for Method {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "direct" => Ok(Method::Direct),
            _ => Err(crate::error::Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

fn q(v: i64) -> Rational {
    int(v)
}

/// `sum_{i<n} a_i 4^i`.
fn a_moment(p: &PaParams) -> Rational {
    (1..p.n as i32).fold(Rational::zero(), |acc, i| acc + q(p.a(i)) * pow2(2 * i as i64))
}

/// `sum_{i=0}^{n-2} 4^-i sum_{k<=i} a_k 4^k`.
fn a_nested(p: &PaParams) -> Rational {
    (0..p.n as i32 - 1).fold(Rational::zero(), |acc, i| {
        let inner = (1..=i).fold(Rational::zero(), |s, k| s + q(p.a(k)) * pow2(2 * k as i64));
        acc + pow2(-2 * i as i64) * inner
    })
}

fn sigma_sum(p: &PaParams) -> i64 {
    (1..p.n as i32).map(|i| p.sigma(i)).sum()
}

/// Whether the region has at least one level for this `n`.
fn is_nonempty(region: RegionId, n: i32) -> bool {
    region.is_infinite() || !region.levels(n, n).is_empty()
}

/// Closed-form region mass for the plain net `P_a(sigma)`.
pub fn closed_region_sum(p: &PaParams, region: RegionId) -> Rational {
    use RegionId::*;
    let n = p.n as i64;
    if !is_nonempty(region, n as i32) {
        return Rational::zero();
    }
    let four_n = pow2(2 * n);
    let big_l = q(p.big_l());
    let sn = q(p.sigma(n as i32));
    match region {
        J1 => {
            let v = pow2(-n - 1) + pow2(-2 * n - 2) + pow2(-n - 3) * q(p.ell() - p.big_l());
            &v * &v
        }
        J2 => {
            frac(1, 9) * pow2(-4 * n - 6)
                * (q(3 * n) * &four_n - q(9 * (n - 1)) * pow2(n + 2) + pow2(2 * n + 3) - q(44))
                + pow2(-3 * n - 3) * (q(sigma_sum(p)) + &sn * &big_l)
                - pow2(-2 * n - 8) * a_nested(p)
        }
        J3 => {
            frac(1, 3) * pow2(-4 * n - 4)
                * (&four_n - q(3) * pow2(n) + q(2) + q(3) * &sn * pow2(n + 1))
        }
        J4 | J7 => frac(1, 48) * pow2(-2 * n),
        J5 => {
            let v = pow2(-2 * n - 2) - pow2(-n - 3) + pow2(-n - 3) * &big_l - pow2(-2 * n - 1) * &sn;
            &v * &v
        }
        J6 => {
            frac(1, 9) * pow2(-4 * n - 6) * (q(3 * n + 11) * &four_n - q(56))
                - pow2(-3 * n - 4) * (q(n - 1 - 2 * sigma_sum(p)) - q(2) * &sn * &big_l)
        }
        J8 => {
            frac(1, 3) * pow2(-4 * n - 6) * (&four_n - q(4)) + pow2(-2 * n - 8) * a_nested(p)
        }
        J9 => frac(1, 9) * pow2(-4 * n - 6) * (q(3 * n) * &four_n - q(7) * &four_n + q(16)),
        J10 => frac(1, 3) * pow2(-4 * n - 6) * (&four_n + q(8)),
        J11 => {
            frac(1, 27) * pow2(-4 * n - 6)
                * (q(3 * n) * &four_n + q(7) * &four_n + q(48 * n) - q(88))
        }
        J12 => {
            frac(1, 27) * pow2(-4 * n - 4) - frac(1, 27) * pow2(-2 * n - 4)
                - frac(1, 9) * q(n) * pow2(-4 * n - 2)
                + frac(5, 9) * q(n) * pow2(-2 * n - 6)
        }
        J13 => frac(1, 9) * pow2(-4 * n - 4) * (pow2(2 * n + 1) - q(1)),
    }
}

/// Closed-form region mass for the symmetrized net `P_a(sigma) u P_a(sigma*)`.
pub fn sym_closed_region_sum(p: &PaParams, region: RegionId) -> Rational {
    use RegionId::*;
    let n = p.n as i64;
    if !is_nonempty(region, n as i32) {
        return Rational::zero();
    }
    let four_n = pow2(2 * n);
    let parity = q(1 - 2 * p.sigma(n as i32));
    let moment = a_moment(p);
    let low = frac(1, 3) * pow2(-4 * n - 6) * (&four_n - q(4));
    match region {
        J1 => {
            let v = pow2(-n - 1) + pow2(-2 * n - 2);
            &v * &v
        }
        J2 => {
            frac(1, 3) * pow2(-4 * n - 4) * (&four_n - q(4))
                - parity * pow2(-3 * n - 4) * q(p.big_l())
                + pow2(-4 * n - 6) * &moment
        }
        J3 => pow2(-4 * n - 6) * &moment + pow2(-4 * n - 4),
        J4 | J7 => frac(1, 48) * pow2(-2 * n),
        J5 => pow2(-2 * n - 6),
        J6 => low,
        J8 | J10 => low - pow2(-4 * n - 6) * &moment,
        J9 => frac(1, 9) * pow2(-4 * n - 6) * (q(3 * n) * &four_n - q(7) * &four_n + q(16)),
        J11 => frac(1, 9) * pow2(-4 * n - 6) * (q(5) * &four_n + q(4) - q(24 * n)),
        J12 => {
            frac(1, 3) * pow2(-4 * n - 6) * (q(n) * (&four_n + q(8)) - q(2) * (&four_n + q(2)))
        }
        J13 => frac(1, 9) * pow2(-4 * n - 4) * (pow2(2 * n + 1) - q(1)),
    }
}

/// Mass of the levels of `region` computed from the generic coefficients of `pts`.
fn direct_sum(pts: &DyadicPointSet, n: i32, region: RegionId) -> Result<Rational> {
    // the window reaches past level n so the generic formulas also cover the
    // first index-only levels; everything beyond is a geometric series
    let window = n + 1;
    let masses = region
        .levels(n, window)
        .par_iter()
        .map(|&(j1, j2)| level_mass(pts, j1, j2))
        .collect::<Result<Vec<_>>>()?;
    let finite = masses.into_iter().fold(Rational::zero(), |acc, m| acc + m);
    Ok(finite + remainder(region, window as i64))
}

/// Mass of the levels of an infinite region with some `j_i > window`.
fn remainder(region: RegionId, window: i64) -> Rational {
    // G(a) = sum_{j >= a} 4^-j
    let g = |a: i64| frac(4, 3) * pow2(-2 * a);
    match region {
        // 2^j (2^-2j-3)^2 summed over j > window
        RegionId::J4 | RegionId::J7 => pow2(-6) * g(window + 1),
        // 2^(j1+j2) 2^(j1+j2) (2^(-2j1-2j2-4))^2 = 2^-8 4^-(j1+j2)
        RegionId::J13 => {
            let inner = g(0) - g(window + 1);
            pow2(-8) * (g(0) * g(0) - &inner * &inner)
        }
        _ => Rational::zero(),
    }
}

/// Parseval mass of one region for the plain net.
pub fn region_parseval_sum(p: &PaParams, region: RegionId, method: Method) -> Result<Rational> {
    match method {
        Method::Closed => Ok(closed_region_sum(p, region)),
        Method::Direct => {
            let pts = generate_pa_direct(p.n, p.a_bits(), p.shift())?;
            direct_sum(&pts, p.n as i32, region)
        }
    }
}

/// Parseval mass of one region for the symmetrized net.
pub fn sym_region_parseval_sum(p: &PaParams, region: RegionId, method: Method) -> Result<Rational> {
    match method {
        Method::Closed => Ok(sym_closed_region_sum(p, region)),
        Method::Direct => {
            let pts = symmetrize(&generate_pa_direct(p.n, p.a_bits(), p.shift())?);
            direct_sum(&pts, p.n as i32, region)
        }
    }
}

/// All thirteen region masses, in region order.
pub fn region_table(p: &PaParams, symmetrized: bool, method: Method) -> Result<Vec<(RegionId, Rational)>> {
    RegionId::ALL
        .iter()
        .map(|&r| {
            let v = if symmetrized {
                sym_region_parseval_sum(p, r, method)?
            } else {
                region_parseval_sum(p, r, method)?
            };
            Ok((r, v))
        })
        .collect()
}
