//! Haar expansion of the discrepancy function.
//!
//! Coefficients use the `L_inf`-normalized Haar system; the level weight `2^|j|`
//! only enters in Parseval sums. The generic per-point formulas in this module are
//! the reference for signs; the closed forms in [`cases`] and [`sym_cases`] are
//! checked against them.

pub mod audit;
pub mod cases;
pub mod lemmas;
pub mod parseval;
pub mod sym_cases;

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{param, Error, Result};
use crate::points::DyadicPointSet;
use crate::rational::{frac, pow2, Rational};

pub use parseval::{level_mass, parseval_l2_squared, tail_sum};

/// Index `(j, m)` of one Haar function; `j_i = -1` denotes the constant function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HaarIndex {
    pub j1: i32,
    pub j2: i32,
    pub m1: u64,
    pub m2: u64,
}

impl HaarIndex {
    pub fn new(j1: i32, j2: i32, m1: u64, m2: u64) -> Result<Self> {
        let ok = |j: i32, m: u64| match j {
            -1 => m == 0,
            0..=62 => m < (1u64 << j),
            _ => false,
        };
        if !ok(j1, m1) || !ok(j2, m2) {
            return param(format!("invalid Haar index j = ({j1}, {j2}), m = ({m1}, {m2})"));
        }
        Ok(Self { j1, j2, m1, m2 })
    }

    /// `|j| = max(0, j1) + max(0, j2)`.
    pub fn level(&self) -> u32 {
        level(self.j1, self.j2)
    }

    /// Digit `k` (1 = most significant) of `m1`, which has `j1` digits.
    pub fn r(&self, k: i32) -> i64 {
        ((self.m1 >> (self.j1 - k)) & 1) as i64
    }

    /// Digit `k` (1 = most significant) of `m2`, which has `j2` digits.
    pub fn s(&self, k: i32) -> i64 {
        ((self.m2 >> (self.j2 - k)) & 1) as i64
    }
}

pub fn level(j1: i32, j2: i32) -> u32 {
    (j1.max(0) + j2.max(0)) as u32
}

/// Number of translations `m` at level `j`, `|D_j|`.
pub fn translations(j1: i32, j2: i32) -> u64 {
    1u64 << level(j1, j2)
}

/// Iterates every `m` in `D_j`.
pub fn indices(j1: i32, j2: i32) -> impl Iterator<Item = HaarIndex> {
    let c1 = 1u64 << j1.max(0);
    let c2 = 1u64 << j2.max(0);
    (0..c1).flat_map(move |m1| (0..c2).map(move |m2| HaarIndex { j1, j2, m1, m2 }))
}

/// The thirteen-way partition of `{-1, 0, 1, ...}^2` relative to `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    J1,
    J2,
    J3,
    J4,
    J5,
    J6,
    J7,
    J8,
    J9,
    J10,
    J11,
    J12,
    J13,
}

impl RegionId {
    pub const ALL: [RegionId; 13] = [
        RegionId::J1,
        RegionId::J2,
        RegionId::J3,
        RegionId::J4,
        RegionId::J5,
        RegionId::J6,
        RegionId::J7,
        RegionId::J8,
        RegionId::J9,
        RegionId::J10,
        RegionId::J11,
        RegionId::J12,
        RegionId::J13,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Regions with infinitely many levels `j`.
    pub fn is_infinite(self) -> bool {
        matches!(self, RegionId::J4 | RegionId::J7 | RegionId::J13)
    }

    /// Levels of this region with `j1, j2 <= max`.
    pub fn levels(self, n: i32, max: i32) -> Vec<(i32, i32)> {
        (-1..=max)
            .flat_map(|j1| (-1..=max).map(move |j2| (j1, j2)))
            .filter(|&(j1, j2)| classify_region(j1, j2, n) == self)
            .collect()
    }
}

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "J{}", self.number())
    }
}

impl std::str::FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k: usize = s
            .trim()
            .trim_start_matches(['J', 'j'])
            .parse()
            .map_err(|_| Error::Parse(format!("bad region {s:?}")))?;
        RegionId::ALL
            .get(k.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::Parse(format!("bad region {s:?}")))
    }
}

pub fn classify_region(j1: i32, j2: i32, n: i32) -> RegionId {
    use RegionId::*;
    match (j1, j2) {
        (-1, -1) => J1,
        (-1, j2) if j2 <= n - 2 => J2,
        (-1, j2) if j2 == n - 1 => J3,
        (-1, _) => J4,
        (0, -1) => J5,
        (j1, -1) if j1 < n => J6,
        (_, -1) => J7,
        (j1, j2) if j1 >= n || j2 >= n => J13,
        (0, j2) if j2 <= n - 2 => J8,
        (0, _) => J10,
        (j1, j2) if j1 + j2 <= n - 2 => J9,
        (j1, j2) if j1 + j2 == n - 1 => J11,
        _ => J12,
    }
}

/// How one coordinate of a point enters the coefficient formula at level `j`:
/// the box translation and the integer numerator of the per-point factor, whose
/// denominator is always `2^res` once the level prefactor is folded in.
#[inline]
fn coordinate_factor(j: i32, coord: u64, res: u32) -> Option<(u64, u64)> {
    let side = 1u64 << res;
    if j < 0 {
        // factor (1 - z) = (side - coord) / side
        return Some((0, side - coord));
    }
    let j = j as u32;
    if j >= res {
        return None;
    }
    // tent 1 - |2m + 1 - 2^(j+1) z| = (w - |w - 2u|) / w with w = 2^(res-j)
    let shift = res - j;
    let w = 1u64 << shift;
    let m = coord >> shift;
    let u = coord & (w - 1);
    if u == 0 {
        return None;
    }
    let t = w - (w as i64 - 2 * u as i64).unsigned_abs();
    // T / w = T 2^j / side; the 2^j cancels against the level prefactor below
    Some((m, t))
}

/// Level-dependent pieces of the generic formula:
/// `mu = sign * (sum_z T1 T2) / (N side^2 k) + constant`.
pub(crate) struct LevelKernel {
    pub sign: i64,
    pub k: i64,
    pub constant: Rational,
}

pub(crate) fn kernel(j1: i32, j2: i32) -> LevelKernel {
    let (j1e, j2e) = (j1 as i64, j2 as i64);
    match (j1 >= 0, j2 >= 0) {
        (false, false) => LevelKernel { sign: 1, k: 1, constant: frac(-1, 4) },
        (true, false) => LevelKernel { sign: -1, k: 2, constant: pow2(-2 * j1e - 3) },
        (false, true) => LevelKernel { sign: -1, k: 2, constant: pow2(-2 * j2e - 3) },
        (true, true) => LevelKernel { sign: 1, k: 4, constant: -pow2(-2 * j1e - 2 * j2e - 4) },
    }
}

/// Integer box sums `sum_{z in box} T1 T2`, keyed by translation, for one level.
pub(crate) fn box_sums(p: &DyadicPointSet, j1: i32, j2: i32) -> HashMap<(u64, u64), i128> {
    let res = p.resolution();
    let mut sums: HashMap<(u64, u64), i128> = HashMap::new();
    for &(x, y) in p.points() {
        if let (Some((m1, t1)), Some((m2, t2))) =
            (coordinate_factor(j1, x, res), coordinate_factor(j2, y, res))
        {
            *sums.entry((m1, m2)).or_default() += t1 as i128 * t2 as i128;
        }
    }
    sums
}

fn coefficient_from_sum(p: &DyadicPointSet, kern: &LevelKernel, sum: i128) -> Rational {
    let side = BigInt::from(p.side());
    let den = BigInt::from(p.len()) * &side * &side * kern.k;
    Rational::new(BigInt::from(sum) * kern.sign, den) + &kern.constant
}

fn require_points(p: &DyadicPointSet) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Domain("Haar coefficients of an empty point set".into()));
    }
    Ok(())
}

/// Points of `P` that enter the coefficient sum of `h_{j,m}`: the open dyadic box
/// in each coordinate with `j_i >= 0`, all of `[0,1)` in a coordinate with `j_i = -1`.
pub fn box_points(p: &DyadicPointSet, idx: &HaarIndex) -> Vec<(u64, u64)> {
    let res = p.resolution();
    p.points()
        .iter()
        .copied()
        .filter(|&(x, y)| {
            matches!(coordinate_factor(idx.j1, x, res), Some((m, _)) if m == idx.m1)
                && matches!(coordinate_factor(idx.j2, y, res), Some((m, _)) if m == idx.m2)
        })
        .collect()
}

/// `mu_{j,m} = <Delta(., P), h_{j,m}>` from the per-point formulas, normalized by `1/N`.
pub fn haar_coefficient(p: &DyadicPointSet, idx: &HaarIndex) -> Result<Rational> {
    require_points(p)?;
    let res = p.resolution();
    let sum: i128 = box_points(p, idx)
        .iter()
        .map(|&(x, y)| {
            let (_, t1) = coordinate_factor(idx.j1, x, res).unwrap();
            let (_, t2) = coordinate_factor(idx.j2, y, res).unwrap();
            t1 as i128 * t2 as i128
        })
        .sum();
    Ok(coefficient_from_sum(p, &kernel(idx.j1, idx.j2), sum))
}

/// Every coefficient at level `j`, in lexicographic `m` order.
pub fn level_coefficients(p: &DyadicPointSet, j1: i32, j2: i32) -> Result<Vec<(HaarIndex, Rational)>> {
    require_points(p)?;
    let kern = kernel(j1, j2);
    let sums = box_sums(p, j1, j2);
    Ok(indices(j1, j2)
        .map(|idx| {
            let s = sums.get(&(idx.m1, idx.m2)).copied().unwrap_or(0);
            (idx, coefficient_from_sum(p, &kern, s))
        })
        .collect())
}

/// One level in compressed form: the coefficients of boxes holding points, and
/// the shared value `constant` of the remaining `total - occupied.len()` boxes.
pub struct SparseLevel {
    pub total: u64,
    pub constant: Rational,
    pub occupied: Vec<((u64, u64), Rational)>,
}

pub fn sparse_level(p: &DyadicPointSet, j1: i32, j2: i32) -> Result<SparseLevel> {
    require_points(p)?;
    let kern = kernel(j1, j2);
    let mut occupied: Vec<((u64, u64), Rational)> = box_sums(p, j1, j2)
        .into_iter()
        .map(|(m, s)| (m, coefficient_from_sum(p, &kern, s)))
        .collect();
    occupied.sort_by_key(|e| e.0);
    Ok(SparseLevel { total: translations(j1, j2), constant: kern.constant, occupied })
}

/// Dump of all coefficients with `-1 <= j1, j2 <= jmax`.
pub fn dump_coefficients(p: &DyadicPointSet, jmax: i32) -> Result<Vec<(HaarIndex, Rational)>> {
    let mut out = Vec::new();
    for j1 in -1..=jmax {
        for j2 in -1..=jmax {
            out.extend(level_coefficients(p, j1, j2)?);
        }
    }
    Ok(out)
}
