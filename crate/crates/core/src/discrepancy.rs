//! The discrepancy function and its L2 (Warnock), star and Monte-Carlo L_p norms.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::points::DyadicPointSet;
use crate::rational::{int, Rational};

/// A point `t` of the closed unit square at which `Delta(t, P)` is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    t1: Rational,
    t2: Rational,
}

impl EvalPoint {
    pub fn new(t1: Rational, t2: Rational) -> Result<Self> {
        let unit = |t: &Rational| *t >= int(0) && *t <= int(1);
        if !unit(&t1) || !unit(&t2) {
            return Err(Error::Domain(format!("t = ({t1}, {t2}) outside [0,1]^2")));
        }
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> &Rational {
        &self.t1
    }

    pub fn t2(&self) -> &Rational {
        &self.t2
    }
}

/// `Delta(t, P) = #(P in [0,t1) x [0,t2)) / N - t1 t2`. An empty set counts as zero points.
pub fn local_discrepancy(p: &DyadicPointSet, t: &EvalPoint) -> Rational {
    let side = BigInt::from(p.side());
    let below = |x: u64, q: &Rational| BigInt::from(x) * q.denom() < q.numer() * &side;
    let inside = p
        .points()
        .iter()
        .filter(|&&(x, y)| below(x, &t.t1) && below(y, &t.t2))
        .count();
    let frac = if p.is_empty() {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(inside), BigInt::from(p.len()))
    };
    frac - &t.t1 * &t.t2
}

fn require_points(p: &DyadicPointSet) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Domain("empty point set".into()));
    }
    Ok(())
}

/// `(N * L2(P))^2` by Warnock's formula, summed exactly.
pub fn warnock_l2_squared(p: &DyadicPointSet) -> Result<Rational> {
    require_points(p)?;
    let n = p.len();
    let s = p.side() as u128;
    let pts = p.points();

    // sum_k (S^2 - X^2)(S^2 - Y^2), scaled by S^4
    let single: BigInt = pts
        .iter()
        .map(|&(x, y)| {
            let (x, y) = (x as u128, y as u128);
            BigInt::from(s * s - x * x) * BigInt::from(s * s - y * y)
        })
        .sum();

    // sum_{k,l} (S - max X)(S - max Y), scaled by S^2
    let pairs: BigInt = pts
        .par_iter()
        .map(|&(xk, yk)| {
            let row: u128 = pts
                .iter()
                .map(|&(xl, yl)| (s - xk.max(xl) as u128) * (s - yk.max(yl) as u128))
                .sum();
            BigInt::from(row)
        })
        .reduce(BigInt::zero, |a, b| a + b);

    let nn = BigInt::from(n);
    let s2 = BigInt::from(s * s);
    let s4 = &s2 * &s2;
    let value = Rational::new(&nn * &nn, BigInt::from(9))
        - Rational::new(&nn * single, BigInt::from(2) * s4)
        + Rational::new(pairs, s2);
    Ok(value)
}

/// Unscaled `L2(P)^2` (Warnock value divided by `N^2`).
pub fn l2_squared(p: &DyadicPointSet) -> Result<Rational> {
    let n = BigInt::from(p.len());
    Ok(warnock_l2_squared(p)? / Rational::from_integer(&n * &n))
}

/// Exact `sup_t |Delta(t, P)|` over the closed unit square.
///
/// The supremum is a one-sided limit at a node of the grid spanned by the point
/// coordinates and 1: from above with boundary points counted, from below without.
pub fn star_discrepancy(p: &DyadicPointSet) -> Result<Rational> {
    require_points(p)?;
    let side = p.side();
    let mut ux: Vec<u64> = p.points().iter().map(|q| q.0).chain([side]).collect();
    let mut uy: Vec<u64> = p.points().iter().map(|q| q.1).chain([side]).collect();
    ux.sort_unstable();
    ux.dedup();
    uy.sort_unstable();
    uy.dedup();
    let (w, h) = (ux.len(), uy.len());

    // prefix[(i+1)*(h+1) + (j+1)] = #{X <= ux[i], Y <= uy[j]}
    let stride = h + 1;
    let mut prefix = vec![0u32; (w + 1) * stride];
    for &(x, y) in p.points() {
        let i = ux.binary_search(&x).unwrap();
        let j = uy.binary_search(&y).unwrap();
        prefix[(i + 1) * stride + j + 1] += 1;
    }
    for i in 1..=w {
        for j in 1..=h {
            prefix[i * stride + j] += prefix[(i - 1) * stride + j] + prefix[i * stride + j - 1]
                - prefix[(i - 1) * stride + j - 1];
        }
    }

    // deviations scaled by N * side^2
    let n = p.len() as i128;
    let s2 = (side as i128) * (side as i128);
    let best = (0..w)
        .into_par_iter()
        .map(|i| {
            let mut best = 0i128;
            for j in 0..h {
                let vol = n * ux[i] as i128 * uy[j] as i128;
                let closed = prefix[(i + 1) * stride + j + 1] as i128;
                let open = prefix[i * stride + j] as i128;
                best = best.max(closed * s2 - vol).max(vol - open * s2);
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ok(Rational::new(BigInt::from(best), BigInt::from(n * s2)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

const MC_CHUNK: u64 = 1 << 14;

/// Plain Monte-Carlo estimate of `L_p(P)` for finite `p > 1`.
///
/// Sample `i` is drawn from the ChaCha8 stream of `seed` at word offset `4 i`, so
/// the result depends only on `(seed, samples)`, never on the thread count.
pub fn lp_discrepancy_mc(p: &DyadicPointSet, exponent: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    if !exponent.is_finite() || exponent <= 1.0 {
        return Err(Error::Unsupported(format!(
            "Monte-Carlo L_p needs finite p > 1, got {exponent}; use star_discrepancy for p = inf"
        )));
    }
    if samples == 0 {
        return Err(Error::Parameter("samples must be at least 1".into()));
    }
    require_points(p)?;
    let side = p.side() as f64;
    let pts: Vec<(f64, f64)> = p.points().iter().map(|&(x, y)| (x as f64 / side, y as f64 / side)).collect();
    let inv_n = 1.0 / pts.len() as f64;

    let chunks = samples.div_ceil(MC_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * MC_CHUNK;
            let end = (start + MC_CHUNK).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(4 * start as u128);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in start..end {
                let t1: f64 = rng.gen();
                let t2: f64 = rng.gen();
                let inside = pts.iter().filter(|&&(x, y)| x < t1 && y < t2).count();
                let v = (inside as f64 * inv_n - t1 * t2).abs().powf(exponent);
                s1 += v;
                s2 += v * v;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = partial.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));

    let m = samples as f64;
    let mean = s1 / m;
    let var = if samples > 1 { ((s2 / m - mean * mean) * m / (m - 1.0)).max(0.0) } else { 0.0 };
    let se_mean = (var / m).sqrt();
    let estimate = mean.powf(1.0 / exponent);
    let std_error = if mean > 0.0 { se_mean * estimate / (exponent * mean) } else { 0.0 };
    Ok(McEstimate { estimate, std_error })
}

/// Convenience for reports: exact rational to `f64`.
pub fn approx(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn pts(res: u32, v: &[(u64, u64)]) -> DyadicPointSet {
        DyadicPointSet::new(res, v.to_vec()).unwrap()
    }

    fn at(a: Rational, b: Rational) -> EvalPoint {
        EvalPoint::new(a, b).unwrap()
    }

    #[test]
    fn local_discrepancy_examples() {
        let p = pts(1, &[(0, 0), (1, 1)]);
        assert_eq!(local_discrepancy(&p, &at(int(1), int(1))), int(0));
        assert_eq!(local_discrepancy(&p, &at(int(0), frac(1, 3))), int(0));
        assert_eq!(local_discrepancy(&p, &at(frac(3, 4), frac(3, 4))), frac(7, 16));
        // boundary of the half-open box excludes (1/2, 1/2)
        assert_eq!(local_discrepancy(&p, &at(frac(1, 2), int(1))), frac(0, 1));
        assert!(EvalPoint::new(frac(3, 2), int(0)).is_err());
    }

    #[test]
    fn adding_an_inside_point_shifts_by_renormalized_count() {
        let t = at(frac(1, 2), frac(1, 2));
        let two = pts(2, &[(0, 0), (3, 3)]);
        let three = pts(2, &[(0, 0), (3, 3), (1, 1)]);
        assert_eq!(local_discrepancy(&two, &t), frac(1, 2) - frac(1, 4));
        assert_eq!(local_discrepancy(&three, &t), frac(2, 3) - frac(1, 4));
    }

    #[test]
    fn warnock_examples() {
        assert_eq!(warnock_l2_squared(&pts(0, &[(0, 0)])).unwrap(), frac(11, 18));
        assert_eq!(warnock_l2_squared(&pts(1, &[(0, 0), (1, 1)])).unwrap(), frac(91, 144));
        let grid = pts(1, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(warnock_l2_squared(&grid).unwrap(), frac(137, 72));
        assert!(warnock_l2_squared(&pts(1, &[])).is_err());
    }

    #[test]
    fn star_examples() {
        assert_eq!(star_discrepancy(&pts(0, &[(0, 0)])).unwrap(), int(1));
        assert_eq!(star_discrepancy(&pts(1, &[(0, 0), (1, 1)])).unwrap(), frac(3, 4));
        let grid = pts(1, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(star_discrepancy(&grid).unwrap(), frac(3, 4));
        assert!(star_discrepancy(&pts(1, &[])).is_err());
    }

    #[test]
    fn mc_rejects_bad_exponents() {
        let p = pts(0, &[(0, 0)]);
        assert!(matches!(lp_discrepancy_mc(&p, 1.0, 10, 0), Err(Error::Unsupported(_))));
        assert!(matches!(lp_discrepancy_mc(&p, f64::INFINITY, 10, 0), Err(Error::Unsupported(_))));
        assert!(lp_discrepancy_mc(&p, 2.0, 0, 0).is_err());
    }

    #[test]
    fn mc_is_deterministic_and_chunk_consistent() {
        let p = pts(1, &[(0, 0), (1, 1)]);
        let a = lp_discrepancy_mc(&p, 2.0, 40_000, 7).unwrap();
        let b = lp_discrepancy_mc(&p, 2.0, 40_000, 7).unwrap();
        assert_eq!(a, b);
        let c = lp_discrepancy_mc(&p, 2.0, 40_000, 8).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }
}
