//! Haar coefficients against an independent slow integrator.
//!
//! The oracle integrates `Delta(t) h_{j,m}(t)` piece by piece: the counting part
//! factorizes into per-point integrals `int_z^1 h(t) dt`, and the area part into
//! `int_0^1 t h(t) dt`, both evaluated exactly over the sign pieces of `h`. Nothing
//! here uses the tent-shaped closed forms of the library.

use haarnet::haar::{haar_coefficient, indices, HaarIndex};
use haarnet::netgen::{generate, NetSpec, ShiftVector};
use haarnet::points::DyadicPointSet;
use haarnet::rational::{frac, Rational};
use num_traits::{One, Zero};

/// Sign pieces `(lo, hi, value)` of the one-dimensional Haar function.
fn pieces(j: i32, m: u64) -> Vec<(Rational, Rational, i64)> {
    if j < 0 {
        return vec![(Rational::zero(), Rational::one(), 1)];
    }
    let width = frac(1, 1i64 << j);
    let lo = Rational::from_integer(m.into()) * &width;
    let mid = &lo + &width / Rational::from_integer(2.into());
    let hi = &lo + &width;
    vec![(lo, mid.clone(), 1), (mid, hi, -1)]
}

/// `int_z^1 h(t) dt`
fn upper_integral(p: &[(Rational, Rational, i64)], z: &Rational) -> Rational {
    p.iter().fold(Rational::zero(), |acc, (lo, hi, v)| {
        let start = if z > lo { z.clone() } else { lo.clone() };
        if &start >= hi {
            acc
        } else {
            acc + (hi - start) * Rational::from_integer((*v).into())
        }
    })
}

/// `int_0^1 t h(t) dt`
fn linear_integral(p: &[(Rational, Rational, i64)]) -> Rational {
    let two = Rational::from_integer(2.into());
    p.iter().fold(Rational::zero(), |acc, (lo, hi, v)| {
        acc + (hi * hi - lo * lo) / &two * Rational::from_integer((*v).into())
    })
}

fn slow_coefficient(pts: &DyadicPointSet, idx: &HaarIndex) -> Rational {
    let p1 = pieces(idx.j1, idx.m1);
    let p2 = pieces(idx.j2, idx.m2);
    let n = Rational::from_integer(pts.len().into());
    let count = (0..pts.len()).fold(Rational::zero(), |acc, i| {
        let (x, y) = pts.coords(i);
        acc + upper_integral(&p1, &x) * upper_integral(&p2, &y)
    });
    count / n - linear_integral(&p1) * linear_integral(&p2)
}

fn check_all(pts: &DyadicPointSet, max_level: u32) {
    let top = max_level as i32;
    for j1 in -1..=top {
        for j2 in -1..=top {
            if (j1.max(0) + j2.max(0)) as u32 > max_level {
                continue;
            }
            for idx in indices(j1, j2) {
                assert_eq!(
                    haar_coefficient(pts, &idx).unwrap(),
                    slow_coefficient(pts, &idx),
                    "{idx:?} on {:?}",
                    pts.points()
                );
            }
        }
    }
}

fn bits(n: usize, w: u64) -> Vec<bool> {
    (0..n).map(|i| (w >> i) & 1 == 1).collect()
}

#[test]
fn pa_nets_match_oracle_up_to_twice_n() {
    for n in 1..=4usize {
        for aw in 0..1u64 << (n - 1) {
            // every shift at small n, a spread of shifts at n = 4
            let shifts: Vec<u64> = if n < 4 { (0..1 << n).collect() } else { vec![0, 5, 10, 15] };
            for sw in shifts {
                let spec = NetSpec::pa(bits(n - 1, aw), ShiftVector::from_word(n, sw));
                check_all(&generate(&spec).unwrap(), 2 * n as u32);
            }
        }
    }
}

#[test]
fn symmetrized_and_pc_nets_match_oracle() {
    for n in 1..=3usize {
        for w in 0..1u64 << (n - 1) {
            let s = ShiftVector::from_word(n, w ^ 1);
            check_all(&generate(&NetSpec::pa(bits(n - 1, w), s.clone()).symmetrized(true)).unwrap(), 2 * n as u32);
            check_all(&generate(&NetSpec::pc(bits(n - 1, w), s)).unwrap(), 2 * n as u32);
        }
    }
}

#[test]
fn arbitrary_point_sets_match_oracle() {
    let sets = [
        DyadicPointSet::new(0, vec![(0, 0)]).unwrap(),
        DyadicPointSet::new(3, vec![(0, 7), (7, 0), (3, 3), (3, 3), (5, 1)]).unwrap(),
        DyadicPointSet::new(2, vec![(1, 0), (0, 1)]).unwrap(),
    ];
    for p in &sets {
        check_all(p, 5);
    }
}
