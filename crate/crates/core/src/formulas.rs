//! Closed-form L2 discrepancies and special coefficients.
//!
//! Each evaluator states its scale: `(2^n L2)^2` for plain nets with `2^n` points,
//! `(2^{n+1} L2)^2` for symmetrized ones. [`unscale`] converts to `||Delta||^2`.

use crate::error::{param, Result};
use crate::netgen::{bit, ShiftVector, TriEntries};
use crate::rational::{frac, int, pow2, Rational};

fn q(v: i64) -> Rational {
    int(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightFamily {
    /// weights `a_1..a_{n-1}`
    Pa,
    /// weights `c_2..c_n`
    Pc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftParams {
    pub ell: i64,
    pub big_l: i64,
}

pub fn shift_params(n: usize, weights: &[bool], shift: &ShiftVector, family: WeightFamily) -> Result<ShiftParams> {
    check_lengths(n, weights, shift)?;
    let ell = (1..=n).map(|i| 1 - 2 * shift.sigma(i)).sum();
    let big_l = match family {
        WeightFamily::Pa => (1..n).map(|i| bit(weights, i) * (1 - 2 * shift.sigma(i))).sum(),
        WeightFamily::Pc => (2..=n).map(|i| bit(weights, i - 1) * (1 - 2 * shift.sigma(i))).sum(),
    };
    Ok(ShiftParams { ell, big_l })
}

fn check_lengths(n: usize, weights: &[bool], shift: &ShiftVector) -> Result<()> {
    if n == 0 || weights.len() + 1 != n || shift.len() != n {
        return param(format!(
            "need n >= 1, n-1 weights and n shift bits (n = {n}, weights {}, shift {})",
            weights.len(),
            shift.len()
        ));
    }
    Ok(())
}

/// Divides a scaled value `(2^e L2)^2` by `4^e`, giving `||Delta||^2`.
pub fn unscale(value: &Rational, exponent: u32) -> Rational {
    value * pow2(-2 * exponent as i64)
}

/// `(2^n L2(P_a(sigma)))^2`.
pub fn l2sq_pa(n: usize, a: &[bool], shift: &ShiftVector) -> Result<Rational> {
    let sp = shift_params(n, a, shift, WeightFamily::Pa)?;
    Ok(pa_from_params(n as i64, sp, shift.sigma(n)))
}

fn pa_from_params(n: i64, sp: ShiftParams, sigma_n: i64) -> Rational {
    let ShiftParams { ell, big_l } = sp;
    let poly = q((ell - big_l).pow(2) + big_l.pow(2) + 8 * ell - 10 * big_l) + frac(5, 3) * q(n);
    frac(1, 64) * poly + pow2(-n - 4) * q(2 * sigma_n * big_l - ell + 4) + frac(3, 8)
        - frac(1, 9) * pow2(-2 * n - 3)
}

/// `(2^n L2(P_a))^2` for the unshifted net; depends on `a` only through its weight.
pub fn l2sq_pa_unshifted(n: usize, weight: usize) -> Result<Rational> {
    if n == 0 || weight > n - 1 {
        return param(format!("weight {weight} outside 0..={}", n.saturating_sub(1)));
    }
    Ok(unshifted(n as i64, weight as i64))
}

fn unshifted(n: i64, w: i64) -> Rational {
    frac(1, 64) * (q((n - w).pow(2) + w * w - 10 * w) + frac(29, 3) * q(n)) + frac(3, 8)
        - q(n - 4) * pow2(-n - 4)
        - frac(1, 9) * pow2(-2 * n - 3)
}

/// Mean of `(2^n L2(P_a(sigma)))^2` over all `2^n` shifts, the same for every `a`.
pub fn l2sq_pa_shift_average(n: usize) -> Rational {
    let n = n as i64;
    frac(n, 24) + frac(3, 8) + pow2(-n - 2) - frac(1, 9) * pow2(-2 * n - 3)
}

/// `(2^n L2)^2` of the shifted Hammersley net with `z` zero digits in the shift.
///
/// Evaluated through the general shifted formula with `a = 0`, so `L = 0` and
/// `l = 2z - n`.
pub fn l2sq_hammersley_shifted(n: usize, z: usize) -> Result<Rational> {
    if n == 0 || z > n {
        return param(format!("z = {z} outside 0..={n}"));
    }
    let sp = ShiftParams { ell: 2 * z as i64 - n as i64, big_l: 0 };
    Ok(pa_from_params(n as i64, sp, 0))
}

/// The expanded Hammersley polynomial in `n` and `z`.
///
/// Erratum: the commonly quoted display ends in `- 1/(9 2^{2n+2})` and is labelled
/// `L2^2`; the value is `(2^n L2)^2` and the last term is `- 1/(9 2^{2n+3})`.
pub fn hammersley_polynomial(n: usize, z: usize) -> Rational {
    let (n, z) = (n as i64, z as i64);
    frac(n * n, 64) + frac(z * z, 16) - frac(z * n, 16) - frac(19 * n, 192) + frac(z, 4)
        + q(n) * pow2(-n - 4)
        - q(z) * pow2(-n - 3)
        + pow2(-n - 2)
        + frac(3, 8)
        - frac(1, 9) * pow2(-2 * n - 3)
}

/// `(2^{n+1} L2)^2` of the symmetrized net `P_a(sigma) u P_a(sigma*)`.
pub fn l2sq_sym_pa(n: usize, a: &[bool], shift: &ShiftVector) -> Result<Rational> {
    let sp = shift_params(n, a, shift, WeightFamily::Pa)?;
    let n_ = n as i64;
    let parity = 1 - 2 * shift.sigma(n);
    Ok(frac(n_, 24) + frac(11, 8) + pow2(-n_) - frac(1, 9) * pow2(-2 * n_ - 1)
        - q(parity * sp.big_l) * pow2(-n_ - 2))
}

/// `(2^n L2(P_c(sigma)))^2`; `c` holds `c_2..c_n`.
pub fn l2sq_pc(n: usize, c: &[bool], shift: &ShiftVector) -> Result<Rational> {
    let ShiftParams { ell, big_l } = shift_params(n, c, shift, WeightFamily::Pc)?;
    let n_ = n as i64;
    let s1 = shift.sigma(1);
    let poly = q((ell - big_l).pow(2) + big_l.pow(2) + 8 * ell + 2 * big_l * (2 * s1 - 5)) + frac(5, 3) * q(n_);
    Ok(frac(1, 64) * poly - pow2(-n_ - 4) * q(ell - 4) + frac(3, 8) - frac(1, 9) * pow2(-2 * n_ - 3))
}

/// `(2^n L2(P_c))^2` for the unshifted net of weight `|c|`.
pub fn l2sq_pc_unshifted(n: usize, weight: usize) -> Result<Rational> {
    l2sq_pa_unshifted(n, weight)
}

/// `mu_{(-1,0),(0,0)}` of `P_c(sigma)` for `c = (1, ..., 1)`.
///
/// Sign as produced by the generic coefficient formula.
pub fn mu_m10_pc(n: usize, shift: &ShiftVector) -> Result<Rational> {
    if n == 0 || shift.len() != n {
        return param(format!("shift has length {}, expected {n}", shift.len()));
    }
    let n_ = n as i64;
    let agree = agreement_count(n, shift);
    Ok(pow2(-2 * n_ - 2) - q(n_) * pow2(-n_ - 3) - q(shift.sigma(1)) * pow2(-2 * n_ - 1)
        + q(agree) * pow2(-n_ - 2))
}

/// `#{2 <= k <= n : sigma_k = sigma_1}`.
fn agreement_count(n: usize, shift: &ShiftVector) -> i64 {
    (2..=n).map(|k| 1 ^ shift.sigma(k) ^ shift.sigma(1)).sum()
}

/// `mu~_{(-1,0),(0,0)}` of the symmetrized `P_c(sigma)`, `c = (1, ..., 1)`.
/// At `sigma = 0` it equals `2^{-n-3}(n-2)`.
pub fn sym_mu_m10_pc(n: usize, shift: &ShiftVector) -> Result<Rational> {
    if n == 0 || shift.len() != n {
        return param(format!("shift has length {}, expected {n}", shift.len()));
    }
    let n_ = n as i64;
    Ok(-q(n_) * pow2(-n_ - 3) + q(agreement_count(n, shift)) * pow2(-n_ - 2))
}

/// `2^|j| sum_m mu~^2` at `j = (-1,0)` for the symmetrized `P_c(sigma)`.
pub fn sym_pc_j_m10_term(n: usize, c: &[bool], shift: &ShiftVector) -> Result<Rational> {
    let l = shift_params(n, c, shift, WeightFamily::Pc)?.big_l;
    let s1 = shift.sigma(1);
    Ok(pow2(-2 * n as i64 - 6) * q(l * l - 2 * (1 - 2 * s1) * l + 1))
}

/// `l_mu(k)` for `k = 1..=mu`: one iff `a_{k,i} = 0` for every `k < i <= mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriParams {
    pub mu: usize,
    pub l_values: Vec<bool>,
}

impl TriParams {
    pub fn sum(&self) -> i64 {
        self.l_values.iter().filter(|b| **b).count() as i64
    }
}

pub fn ptri_l_params(entries: &TriEntries, mu: usize) -> Result<TriParams> {
    if mu == 0 || mu > entries.n() {
        return param(format!("mu = {mu} outside 1..={}", entries.n()));
    }
    let l_values = (1..=mu).map(|k| (k + 1..=mu).all(|i| !entries.get(k, i))).collect();
    Ok(TriParams { mu, l_values })
}

/// `(mu_{(-1,-1),(0,0)}, mu_{(0,-1),(0,0)})` of the unshifted triangular net.
pub fn ptri_corner_coefficients(entries: &TriEntries) -> Result<(Rational, Rational)> {
    let n = entries.n();
    let n_ = n as i64;
    let top = ptri_l_params(entries, n)?.sum();
    let below = if n >= 2 { ptri_l_params(entries, n - 1)?.sum() } else { 0 };
    let corner = q(top) * pow2(-n_ - 3) + pow2(-n_ - 1) + pow2(-2 * n_ - 2);
    let row = q(below - top) * pow2(-n_ - 3) + pow2(-2 * n_ - 2);
    Ok((corner, row))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderDiagnostics {
    pub ell: i64,
    pub big_l: i64,
    /// `|l - L| / sqrt(n)`
    pub ratio_ell_l: f64,
    /// `|L| / sqrt(n)`
    pub ratio_l: f64,
    pub sym_optimal: bool,
}

/// Finite-`n` indicators for the order conditions `|l - L| <~ sqrt(n)`, `|L| <~ sqrt(n)`.
/// For the PA family the symmetrized net is always of optimal order; for PC it is
/// reported as `|L| <= constant * sqrt(n)`.
pub fn order_diagnostics(
    n: usize,
    weights: &[bool],
    shift: &ShiftVector,
    family: WeightFamily,
    constant: f64,
) -> Result<OrderDiagnostics> {
    let sp = shift_params(n, weights, shift, family)?;
    let root = (n as f64).sqrt();
    let ratio_l = sp.big_l.abs() as f64 / root;
    Ok(OrderDiagnostics {
        ell: sp.ell,
        big_l: sp.big_l,
        ratio_ell_l: (sp.ell - sp.big_l).abs() as f64 / root,
        ratio_l,
        sym_optimal: match family {
            WeightFamily::Pa => true,
            WeightFamily::Pc => ratio_l <= constant,
        },
    })
}

/// A shift balancing zeros and ones separately on `{i : a_i = 1}` and `{i < n : a_i = 0}`:
/// each class alternates `0, 1, 0, ...` by increasing index, and `sigma_n = 0`.
pub fn balanced_shift(n: usize, a: &[bool]) -> Result<ShiftVector> {
    if n == 0 || a.len() + 1 != n {
        return param(format!("a has length {}, expected n-1 = {}", a.len(), n.saturating_sub(1)));
    }
    let mut next = [false, false];
    let mut bits: Vec<bool> = a
        .iter()
        .map(|&ai| {
            let slot = &mut next[ai as usize];
            let v = *slot;
            *slot = !v;
            v
        })
        .collect();
    bits.push(false);
    Ok(ShiftVector::new(bits))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilykReport {
    pub n: usize,
    pub mu_corner: Rational,
    pub one_over_n: Rational,
    pub corner_small: bool,
    /// `(2^n L2)^2` of the unshifted net with `a = (1, ..., 1)`.
    pub l2sq_scaled: Rational,
    pub lower_bound: Rational,
    pub l2_large: bool,
    /// `(2^n L2)^2 / (n^2 / 64)`.
    pub n_sq_ratio: f64,
}

/// The net `a = (1, ..., 1)`, `sigma = 0`: a small zeroth Haar coefficient together
/// with an L2 discrepancy of order `log N / N`.
pub fn bilyk_counterexample_report(n: usize) -> Result<BilykReport> {
    if n < 2 {
        return param("the counterexample needs n >= 2");
    }
    let n_ = n as i64;
    // l - L = n - (n - 1) = 1
    let mu_corner = pow2(-n_ - 1) + pow2(-2 * n_ - 2) + pow2(-n_ - 3);
    let one_over_n = pow2(-n_);
    let l2sq_scaled = unshifted(n_, n_ - 1);
    let lower_bound = frac(n_ * n_, 64);
    let ratio = crate::rational::to_f64(&l2sq_scaled) / (n as f64 * n as f64 / 64.0);
    Ok(BilykReport {
        n,
        corner_small: mu_corner <= one_over_n,
        l2_large: l2sq_scaled >= lower_bound,
        mu_corner,
        one_over_n,
        l2sq_scaled,
        lower_bound,
        n_sq_ratio: ratio,
    })
}
