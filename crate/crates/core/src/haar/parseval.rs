//! Parseval aggregation: `||Delta||^2 = sum_j 2^|j| sum_m mu_{j,m}^2`.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{box_sums, kernel, level};
use crate::error::{Error, Result};
use crate::points::DyadicPointSet;
use crate::rational::{frac, pow2, Rational};

/// `2^|j| sum_{m in D_j} mu_{j,m}^2` for one level, from the generic coefficients.
///
/// Only occupied boxes are visited; every other translation carries the level constant.
pub fn level_mass(p: &DyadicPointSet, j1: i32, j2: i32) -> Result<Rational> {
    if p.is_empty() {
        return Err(Error::Domain("Haar coefficients of an empty point set".into()));
    }
    let kern = kernel(j1, j2);
    let sums = box_sums(p, j1, j2);
    let (s1, s2) = sums.values().fold((BigInt::zero(), BigInt::zero()), |(a, b), &s| {
        let s = BigInt::from(s);
        (a + &s, b + &s * &s)
    });
    let side = BigInt::from(p.side());
    // mu_m = A s_m + c
    let a = Rational::new(BigInt::from(kern.sign), BigInt::from(p.len()) * &side * &side * kern.k);
    let c = &kern.constant;
    let count = pow2(level(j1, j2) as i64);
    let sum_sq = &a * &a * Rational::from_integer(s2)
        + Rational::from_integer(BigInt::from(2)) * &a * c * Rational::from_integer(s1)
        + &count * c * c;
    Ok(count * sum_sq)
}

/// Parseval mass of every level with `j1 >= n` or `j2 >= n` for a point set whose
/// coordinates lie on the grid `2^-n Z`; no point is interior to those boxes.
pub fn tail_sum(n: u32) -> Rational {
    let n = n as i64;
    let one_row = frac(1, 48) * pow2(-2 * n);
    let corner = frac(1, 9) * pow2(-4 * n - 4) * (pow2(2 * n + 1) - Rational::from_integer(1.into()));
    one_row.clone() + one_row + corner
}

/// `||Delta(., P)||^2` via Parseval: all levels `j1, j2 <= n - 1` plus [`tail_sum`].
pub fn parseval_l2_squared(p: &DyadicPointSet, n: u32) -> Result<Rational> {
    if p.minimal_resolution() > n {
        return Err(Error::Domain(format!(
            "coordinates need resolution {}, finer than 2^-{n}",
            p.minimal_resolution()
        )));
    }
    let p = if p.resolution() == n {
        p.clone()
    } else if p.resolution() < n {
        p.refined(n)?
    } else {
        let k = p.resolution() - n;
        DyadicPointSet::new(n, p.points().iter().map(|&(x, y)| (x >> k, y >> k)).collect())?
    };
    let top = n as i32 - 1;
    let levels: Vec<(i32, i32)> =
        (-1..=top).flat_map(|j1| (-1..=top).map(move |j2| (j1, j2))).collect();
    let masses = levels
        .par_iter()
        .map(|&(j1, j2)| level_mass(&p, j1, j2))
        .collect::<Result<Vec<_>>>()?;
    Ok(masses.into_iter().fold(tail_sum(n), |acc, m| acc + m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::level_coefficients;

    fn pts(res: u32, v: &[(u64, u64)]) -> DyadicPointSet {
        DyadicPointSet::new(res, v.to_vec()).unwrap()
    }

    #[test]
    fn tail_values() {
        assert_eq!(tail_sum(1), frac(1, 96) + frac(7, 2304));
        assert_eq!(tail_sum(1), frac(31, 2304));
        assert_eq!(tail_sum(2), frac(127, 36864));
        for n in 1..=10 {
            assert!(tail_sum(n) < pow2(-2 * n as i64));
        }
    }

    #[test]
    fn parseval_examples() {
        assert_eq!(parseval_l2_squared(&pts(1, &[(0, 0), (1, 1)]), 1).unwrap(), frac(91, 576));
        let grid = pts(1, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(parseval_l2_squared(&grid, 1).unwrap(), frac(137, 1152));
        assert_eq!(parseval_l2_squared(&pts(0, &[(0, 0)]), 0).unwrap(), frac(11, 18));
        // the same points at a finer stored resolution
        assert_eq!(parseval_l2_squared(&pts(3, &[(0, 0), (4, 4)]), 1).unwrap(), frac(91, 576));
        assert_eq!(parseval_l2_squared(&pts(1, &[(0, 0), (1, 1)]), 3).unwrap(), frac(91, 576));
    }

    #[test]
    fn resolution_precondition() {
        assert!(matches!(parseval_l2_squared(&pts(2, &[(1, 0)]), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn level_mass_matches_explicit_squares() {
        let h = pts(2, &[(0, 0), (1, 2), (2, 1), (3, 3)]);
        for (j1, j2) in [(-1, -1), (-1, 0), (0, -1), (1, 1), (-1, 3), (3, 0)] {
            let explicit = level_coefficients(&h, j1, j2)
                .unwrap()
                .into_iter()
                .fold(Rational::zero(), |acc, (_, mu)| acc + &mu * &mu)
                * pow2(level(j1, j2) as i64);
            assert_eq!(level_mass(&h, j1, j2).unwrap(), explicit);
        }
    }
}
