//! Finite point sets in `[0,1)^2` with dyadic coordinates stored as integers.

use std::fmt::Write as _;

use crate::error::{param, Error, Result};
use crate::rational::{dyadic, Rational};

/// Finest supported resolution; keeps every intermediate product inside `i128`.
pub const MAX_RESOLUTION: u32 = 30;

/// Points `(X / 2^res, Y / 2^res)` with `0 <= X, Y < 2^res`. Duplicates are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicPointSet {
    res: u32,
    points: Vec<(u64, u64)>,
}

impl DyadicPointSet {
    pub fn new(res: u32, points: Vec<(u64, u64)>) -> Result<Self> {
        if res > MAX_RESOLUTION {
            return param(format!("resolution {res} exceeds {MAX_RESOLUTION}"));
        }
        let side = 1u64 << res;
        if let Some(&(x, y)) = points.iter().find(|&&(x, y)| x >= side || y >= side) {
            return param(format!("point ({x}, {y}) outside [0, 2^{res})"));
        }
        Ok(Self { res, points })
    }

    pub fn resolution(&self) -> u32 {
        self.res
    }

    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn side(&self) -> u64 {
        1 << self.res
    }

    pub fn coords(&self, i: usize) -> (Rational, Rational) {
        let (x, y) = self.points[i];
        (dyadic(x, self.res), dyadic(y, self.res))
    }

    /// Re-expresses the same points at a finer resolution.
    pub fn refined(&self, res: u32) -> Result<Self> {
        if res < self.res {
            return Err(Error::Domain(format!(
                "cannot coarsen resolution {} to {res}",
                self.res
            )));
        }
        let k = res - self.res;
        Self::new(res, self.points.iter().map(|&(x, y)| (x << k, y << k)).collect())
    }

    /// Smallest resolution at which every coordinate is still an integer.
    pub fn minimal_resolution(&self) -> u32 {
        let tz = self
            .points
            .iter()
            .map(|&(x, y)| (x | y | (1 << self.res)).trailing_zeros())
            .min()
            .unwrap_or(self.res);
        self.res - tz.min(self.res)
    }

    /// Coordinates sorted lexicographically; multiset comparisons use this.
    pub fn sorted_points(&self) -> Vec<(u64, u64)> {
        let mut p = self.points.clone();
        p.sort_unstable();
        p
    }

    pub fn same_multiset(&self, other: &Self) -> bool {
        if self.res == other.res {
            return self.sorted_points() == other.sorted_points();
        }
        let res = self.res.max(other.res);
        match (self.refined(res), other.refined(res)) {
            (Ok(a), Ok(b)) => a.sorted_points() == b.sorted_points(),
            _ => false,
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let res = self.res.max(other.res);
        let mut a = self.refined(res)?;
        a.points.extend(other.refined(res)?.points);
        Ok(a)
    }

    /// Text dump: `res <n>` followed by one `X Y` line per point.
    pub fn to_dump(&self) -> String {
        let mut out = format!("res {}\n", self.res);
        for &(x, y) in &self.points {
            let _ = writeln!(out, "{x} {y}");
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty point dump".into()))?;
        let res = header
            .strip_prefix("res")
            .and_then(|r| r.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let points = lines
            .map(|l| {
                let mut it = l.split_whitespace().map(str::parse::<u64>);
                match (it.next(), it.next(), it.next()) {
                    (Some(Ok(x)), Some(Ok(y)), None) => Ok((x, y)),
                    _ => Err(Error::Parse(format!("bad point line {l:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(res, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(DyadicPointSet::new(2, vec![(4, 0)]).is_err());
        assert!(DyadicPointSet::new(2, vec![(3, 3)]).is_ok());
        assert!(DyadicPointSet::new(31, vec![]).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let p = DyadicPointSet::new(2, vec![(0, 0), (1, 2), (2, 1), (3, 3)]).unwrap();
        let text = p.to_dump();
        assert_eq!(text, "res 2\n0 0\n1 2\n2 1\n3 3\n");
        assert_eq!(DyadicPointSet::parse_dump(&text).unwrap(), p);
        assert!(DyadicPointSet::parse_dump("res x\n").is_err());
        assert!(DyadicPointSet::parse_dump("res 1\n0 0 0\n").is_err());
    }

    #[test]
    fn refinement_and_minimal_resolution() {
        let p = DyadicPointSet::new(1, vec![(0, 0), (1, 1)]).unwrap();
        let q = p.refined(3).unwrap();
        assert_eq!(q.points(), &[(0, 0), (4, 4)]);
        assert_eq!(q.minimal_resolution(), 1);
        assert!(p.same_multiset(&q));
        assert!(q.refined(2).is_err());
        assert_eq!(DyadicPointSet::new(4, vec![(0, 0)]).unwrap().minimal_resolution(), 0);
    }
}
