//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.
//!
//! Run with `cargo test -p haarnet --test acceptance`.

use std::time::Instant;

use haarnet::discrepancy::{lp_discrepancy_mc, star_discrepancy, warnock_l2_squared};
use haarnet::formulas::{
    l2sq_pa, l2sq_pa_shift_average, l2sq_pa_unshifted, l2sq_pc, l2sq_pc_unshifted, l2sq_sym_pa,
    ptri_corner_coefficients,
};
use haarnet::haar::audit::coefficient_bound_audit;
use haarnet::haar::cases::{case_coefficient_pa, PaParams};
use haarnet::haar::lemmas::{region_parseval_sum, sym_region_parseval_sum, Method};
use haarnet::haar::sym_cases::sym_case_coefficient;
use haarnet::haar::{classify_region, haar_coefficient, level_coefficients, parseval_l2_squared, HaarIndex, RegionId};
use haarnet::netgen::{generate, generate_pa_direct, symmetrize, NetSpec, ShiftVector, TriEntries};
use haarnet::points::DyadicPointSet;
use haarnet::rational::{frac, pow2, to_f64, Rational};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn bits(n: usize, w: u64) -> Vec<bool> {
    (0..n).map(|i| (w >> i) & 1 == 1).collect()
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

/// `(a, sigma)` pairs: exhaustive for `n <= exhaustive_to`, otherwise `samples` random ones.
fn parameter_grid(n: usize, exhaustive_to: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<(Vec<bool>, ShiftVector)> {
    if n <= exhaustive_to {
        (0..1u64 << (n - 1))
            .flat_map(|aw| (0..1u64 << n).map(move |sw| (bits(n - 1, aw), ShiftVector::from_word(n, sw))))
            .collect()
    } else {
        (0..samples).map(|_| (random_bits(rng, n - 1), ShiftVector::new(random_bits(rng, n)))).collect()
    }
}

fn n_squared(p: &DyadicPointSet) -> Rational {
    let n = Rational::from_integer(p.len().into());
    &n * &n
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theorem_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for n in 1..=8 {
        for (a, s) in parameter_grid(n, 4, 200, &mut rng) {
            let p = generate(&NetSpec::pa(a.clone(), s.clone())).map_err(|e| e.to_string())?;
            let f = l2sq_pa(n, &a, &s).map_err(|e| e.to_string())?;
            let w = warnock_l2_squared(&p).map_err(|e| e.to_string())?;
            let h = parseval_l2_squared(&p, n as u32).map_err(|e| e.to_string())? * n_squared(&p);
            ensure(f == w && w == h, || format!("n={n} a={a:?} s={s}: formula {f}, warnock {w}, parseval {h}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} nets, formula = Warnock = Parseval"))
}

fn theorem_two() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for n in 1..=7 {
        for (a, s) in parameter_grid(n, 4, 200, &mut rng) {
            let p = symmetrize(&generate_pa_direct(n, &a, &s).map_err(|e| e.to_string())?);
            let f = l2sq_sym_pa(n, &a, &s).map_err(|e| e.to_string())?;
            let w = warnock_l2_squared(&p).map_err(|e| e.to_string())?;
            let h = parseval_l2_squared(&p, n as u32).map_err(|e| e.to_string())? * n_squared(&p);
            ensure(f == w && w == h, || format!("n={n} a={a:?} s={s}: formula {f}, warnock {w}, parseval {h}"))?;
            checked += 1;
        }
    }
    let v = l2sq_sym_pa(1, &[], &ShiftVector::zeros(1)).map_err(|e| e.to_string())?;
    ensure(v == frac(137, 72), || format!("n=1 value {v}"))?;
    Ok(format!("{checked} symmetrized nets; n=1 gives 137/72"))
}

fn theorem_three() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for n in 1..=8 {
        for (c, s) in parameter_grid(n, 4, 200, &mut rng) {
            let p = generate(&NetSpec::pc(c.clone(), s.clone())).map_err(|e| e.to_string())?;
            let f = l2sq_pc(n, &c, &s).map_err(|e| e.to_string())?;
            let w = warnock_l2_squared(&p).map_err(|e| e.to_string())?;
            ensure(f == w, || format!("n={n} c={c:?} s={s}: formula {f}, warnock {w}"))?;
            if s.word() == 0 {
                let weight = c.iter().filter(|b| **b).count();
                let u = l2sq_pc_unshifted(n, weight).map_err(|e| e.to_string())?;
                ensure(u == f, || format!("n={n} c={c:?}: unshifted formula {u} vs {f}"))?;
            }
            checked += 1;
        }
    }
    let v = l2sq_pc(2, &[true], &ShiftVector::zeros(2)).map_err(|e| e.to_string())?;
    ensure(v == frac(671, 1152), || format!("n=2, c=(1): {v}"))?;
    Ok(format!("{checked} P_c nets; n=2, c=(1) gives 671/1152"))
}

/// Compares closed and generic coefficients at every index with `j1, j2 <= n+1` (`<= n` from n = 5).
/// Returns the regions where the two differ by sign only.
fn compare_cases(n: usize, a: &[bool], s: &ShiftVector, sign_regions: &mut Vec<(bool, RegionId)>) -> Result<u64, String> {
    let params = PaParams::new(n, a, s).map_err(|e| e.to_string())?;
    let plain = generate_pa_direct(n, a, s).map_err(|e| e.to_string())?;
    let sym = symmetrize(&plain);
    let mut count = 0;
    let top = if n <= 4 { n as i32 + 1 } else { n as i32 };
    for j1 in -1..=top {
        for j2 in -1..=top {
            let region = classify_region(j1, j2, n as i32);
            let g_plain = level_coefficients(&plain, j1, j2).map_err(|e| e.to_string())?;
            let g_sym = level_coefficients(&sym, j1, j2).map_err(|e| e.to_string())?;
            for ((idx, gp), (_, gs)) in g_plain.iter().zip(&g_sym) {
                let cp = case_coefficient_pa(&params, idx);
                let cs = sym_case_coefficient(&params, idx);
                for (symmetrized, c, g) in [(false, &cp, gp), (true, &cs, gs)] {
                    ensure(c.abs() == g.abs(), || {
                        format!("n={n} a={a:?} s={s} {idx:?} {region} sym={symmetrized}: closed {c}, generic {g}")
                    })?;
                    if c != g && !sign_regions.contains(&(symmetrized, region)) {
                        sign_regions.push((symmetrized, region));
                    }
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn propositions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sign_regions = Vec::new();
    let mut indices = 0;
    let mut nets = 0;
    for n in 1..=6usize {
        let grid: Vec<(Vec<bool>, ShiftVector)> = if n <= 4 {
            parameter_grid(n, 4, 0, &mut rng)
        } else {
            // every shift for a few random a
            (0..4)
                .flat_map(|_| {
                    let a = random_bits(&mut rng, n - 1);
                    (0..1u64 << n).step_by(if n == 6 { 4 } else { 1 }).map(move |sw| (a.clone(), ShiftVector::from_word(n, sw)))
                })
                .collect()
        };
        for (a, s) in grid {
            indices += compare_cases(n, &a, &s, &mut sign_regions)?;
            nets += 1;
        }
    }
    // the only permitted sign deviations: J7 for plain nets, J4 and J7 for symmetrized ones
    let allowed = |(sym, r): &(bool, RegionId)| *r == RegionId::J7 || (*sym && *r == RegionId::J4);
    let bad: Vec<_> = sign_regions.iter().filter(|x| !allowed(x)).collect();
    ensure(bad.is_empty(), || format!("unexpected sign deviations in {bad:?}"))?;
    let mut listed: Vec<String> =
        sign_regions.iter().map(|(s, r)| format!("{}{r}", if *s { "sym " } else { "" })).collect();
    listed.sort();
    Ok(format!("{indices} indices on {nets} nets; sign-only deviations: {}", listed.join(", ")))
}

fn lemmas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for n in 1..=6usize {
        for (a, s) in parameter_grid(n, 4, 24, &mut rng) {
            let p = PaParams::new(n, &a, &s).map_err(|e| e.to_string())?;
            for r in RegionId::ALL {
                let pc = region_parseval_sum(&p, r, Method::Closed).map_err(|e| e.to_string())?;
                let pd = region_parseval_sum(&p, r, Method::Direct).map_err(|e| e.to_string())?;
                ensure(pc == pd, || format!("n={n} a={a:?} s={s} {r}: closed {pc}, direct {pd}"))?;
                let sc = sym_region_parseval_sum(&p, r, Method::Closed).map_err(|e| e.to_string())?;
                let sd = sym_region_parseval_sum(&p, r, Method::Direct).map_err(|e| e.to_string())?;
                ensure(sc == sd, || format!("n={n} a={a:?} s={s} symmetrized {r}: closed {sc}, direct {sd}"))?;
                checked += 2;
            }
        }
    }
    Ok(format!("{checked} region sums, closed = direct"))
}

fn shift_average() -> Outcome {
    for n in 1..=5usize {
        let expected = l2sq_pa_shift_average(n);
        for a in [vec![false; n - 1], vec![true; n - 1]] {
            let mut total = Rational::from_integer(0.into());
            for sw in 0..1u64 << n {
                let p = generate_pa_direct(n, &a, &ShiftVector::from_word(n, sw)).map_err(|e| e.to_string())?;
                total += warnock_l2_squared(&p).map_err(|e| e.to_string())?;
            }
            let mean = total / Rational::from_integer((1u64 << n).into());
            ensure(mean == expected, || format!("n={n} a={a:?}: mean {mean}, formula {expected}"))?;
        }
    }
    ensure(l2sq_pa_shift_average(1) == frac(155, 288), || "n=1 average".into())?;
    ensure(l2sq_pa_shift_average(2) == frac(599, 1152), || "n=2 average".into())?;
    Ok("n <= 5, a = 0 and a = 1; 155/288 and 599/1152".into())
}

fn position_independence() -> Outcome {
    let n = 5;
    let mut values = Vec::new();
    for aw in 0..1u64 << (n - 1) {
        if aw.count_ones() == 2 {
            let p = generate(&NetSpec::pa(bits(n - 1, aw), ShiftVector::zeros(n))).map_err(|e| e.to_string())?;
            values.push(warnock_l2_squared(&p).map_err(|e| e.to_string())?);
        }
    }
    ensure(values.len() == 6, || format!("{} vectors of weight 2", values.len()))?;
    ensure(values.iter().all(|v| *v == values[0]), || format!("values differ: {values:?}"))?;
    let expected = l2sq_pa_unshifted(n, 2).map_err(|e| e.to_string())?;
    ensure(values[0] == expected, || format!("{} vs corollary {expected}", values[0]))?;
    Ok(format!("six weight-2 vectors at n=5 all give {}", values[0]))
}

fn counterexample() -> Outcome {
    let corner = HaarIndex::new(-1, -1, 0, 0).unwrap();
    for n in 2..=10usize {
        let ne = n as i64;
        let p = generate(&NetSpec::pa(vec![true; n - 1], ShiftVector::zeros(n))).map_err(|e| e.to_string())?;
        let mu = haar_coefficient(&p, &corner).map_err(|e| e.to_string())?;
        let expected = pow2(-2 * ne - 2) + frac(5, 1) * pow2(-ne - 3);
        ensure(mu == expected, || format!("n={n}: corner {mu}, expected {expected}"))?;
        ensure(mu <= pow2(-ne), || format!("n={n}: corner {mu} exceeds 1/N"))?;
        let value = l2sq_pa_unshifted(n, n - 1).map_err(|e| e.to_string())?;
        ensure(value >= frac(ne * ne, 64), || format!("n={n}: corollary value {value} < n^2/64"))?;
        let w = warnock_l2_squared(&p).map_err(|e| e.to_string())?;
        ensure(value == w, || format!("n={n}: corollary {value}, warnock {w}"))?;
    }
    let row = HaarIndex::new(-1, 0, 0, 0).unwrap();
    // P_c is the net with c = (1, ..., 1); the coefficient depends on c in general
    for n in 2..=7usize {
        let spec = NetSpec::pc(vec![true; n - 1], ShiftVector::zeros(n)).symmetrized(true);
        let mu = haar_coefficient(&generate(&spec).map_err(|e| e.to_string())?, &row).map_err(|e| e.to_string())?;
        let expected = frac(n as i64 - 2, 1) * pow2(-(n as i64) - 3);
        ensure(mu == expected, || format!("n={n}: symmetrized P_c coefficient {mu}, expected {expected}"))?;
    }
    Ok("corner = 2^(-2n-2) + 5 2^(-n-3) <= 2^-n and value >= n^2/64 for n in 2..=10; \
        symmetrized P_c(0) row coefficient = 2^(-n-3)(n-2) for n <= 7"
        .into())
}

fn audit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0u64;
    for n in 4..=6usize {
        for _ in 0..20 {
            let a = random_bits(&mut rng, n - 1);
            let s = ShiftVector::new(random_bits(&mut rng, n));
            let p = PaParams::new(n, &a, &s).map_err(|e| e.to_string())?;
            let report = coefficient_bound_audit(&p, n as i32 + 2).map_err(|e| e.to_string())?;
            for b in &report.branches {
                ensure(b.holds, || format!("n={n} a={a:?} s={s}: branch ({}) fails: {}", b.branch, b.claim))?;
                if b.branch == "iii" {
                    worst = worst.max(b.exceptions.unwrap_or(0));
                }
            }
        }
    }
    Ok(format!("60 nets at n = 4, 5, 6; exact branches hold, at most {worst} exceptions per level in (iii)"))
}

fn triangular() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let corner = HaarIndex::new(-1, -1, 0, 0).unwrap();
    let row = HaarIndex::new(0, -1, 0, 0).unwrap();
    for _ in 0..50 {
        let n = rng.gen_range(1..=6usize);
        let entries = TriEntries::from_flat(n, &random_bits(&mut rng, n * (n - 1) / 2)).map_err(|e| e.to_string())?;
        let p = generate(&NetSpec::tri(entries.clone(), ShiftVector::zeros(n))).map_err(|e| e.to_string())?;
        let (c, r) = ptri_corner_coefficients(&entries).map_err(|e| e.to_string())?;
        let (gc, gr) = (haar_coefficient(&p, &corner).unwrap(), haar_coefficient(&p, &row).unwrap());
        ensure(c == gc && r == gr, || format!("n={n} {entries:?}: closed ({c}, {r}), generic ({gc}, {gr})"))?;
    }
    for n in 3..=8usize {
        let ne = n as i64;
        let mut last_two = TriEntries::zeros(n).unwrap();
        let mut superdiag = TriEntries::zeros(n).unwrap();
        for i in 1..n {
            superdiag.set(i, i + 1, true);
            for j in [n - 1, n] {
                if i < j {
                    last_two.set(i, j, true);
                }
            }
        }
        for entries in [last_two, superdiag] {
            let p = generate(&NetSpec::tri(entries, ShiftVector::zeros(n))).map_err(|e| e.to_string())?;
            let c = haar_coefficient(&p, &corner).unwrap().abs();
            let r = haar_coefficient(&p, &row).unwrap().abs();
            ensure(c <= frac(5, 8) * pow2(-ne) + pow2(-2 * ne - 2), || format!("n={n}: corner {c}"))?;
            ensure(r == pow2(-2 * ne - 2), || format!("n={n}: row {r}"))?;
        }
    }
    Ok("50 random triangular nets match; both displayed matrices meet the bounds for n in 3..=8".into())
}

fn star_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut worst = 0.0f64;
    for n in 1..=8usize {
        let bound = frac(n as i64 + 19, 3);
        let mut specs: Vec<NetSpec> = Vec::new();
        for (w, s) in parameter_grid(n, 4, 40, &mut rng) {
            specs.push(NetSpec::pa(w.clone(), s.clone()));
            specs.push(NetSpec::pc(w, s));
        }
        let tri_count = if n <= 3 { 1usize << (n * (n - 1) / 2) } else { 40 };
        for k in 0..tri_count {
            let flat = if n <= 3 { bits(n * (n - 1) / 2, k as u64) } else { random_bits(&mut rng, n * (n - 1) / 2) };
            let s = ShiftVector::new(random_bits(&mut rng, n));
            specs.push(NetSpec::tri(TriEntries::from_flat(n, &flat).unwrap(), s));
        }
        for spec in specs {
            let p = generate(&spec).map_err(|e| e.to_string())?;
            let scaled = star_discrepancy(&p).map_err(|e| e.to_string())? * pow2(n as i64);
            ensure(scaled <= bound, || format!("n={n} {spec:?}: 2^n D* = {scaled}"))?;
            worst = worst.max(to_f64(&scaled) / to_f64(&bound));
            checked += 1;
        }
    }
    Ok(format!("{checked} nets (exhaustive at n <= 4, sampled above); largest 2^n D* / bound = {worst:.3}"))
}

fn monte_carlo() -> Outcome {
    let p = generate(&NetSpec::pa(vec![false, false], ShiftVector::zeros(3))).map_err(|e| e.to_string())?;
    let exact = (to_f64(&warnock_l2_squared(&p).unwrap())).sqrt() / p.len() as f64;
    let mut inside = 0;
    for seed in 0..100u64 {
        let est = lp_discrepancy_mc(&p, 2.0, 1_000_000, seed).map_err(|e| e.to_string())?;
        if (est.estimate - exact).abs() <= 4.0 * est.std_error {
            inside += 1;
        }
    }
    ensure(inside >= 99, || format!("only {inside}/100 seeds within 4 standard errors"))?;
    Ok(format!("{inside}/100 seeds within 4 standard errors of {exact:.6}"))
}

fn slope() -> Outcome {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for n in 4..=64usize {
        let v = l2sq_sym_pa(n, &vec![false; n - 1], &ShiftVector::zeros(n)).map_err(|e| e.to_string())? - frac(11, 8);
        xs.push((n as f64).ln());
        ys.push(to_f64(&v).ln());
    }
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let k = cov / var;
    ensure((k - 1.0).abs() <= 0.05, || format!("slope {k:.4}"))?;
    Ok(format!("slope {k:.4} over n = 4..64"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("1", "shifted nets: formula, Warnock and Parseval agree", theorem_one),
        ("2", "symmetrized nets: formula, Warnock and Parseval agree", theorem_two),
        ("3", "P_c nets: formula and Warnock agree", theorem_three),
        ("4", "closed-form coefficients equal generic ones", propositions),
        ("5", "region sums: closed = direct", lemmas),
        ("6", "mean over all shifts", shift_average),
        ("7", "unshifted value depends on the weight of a only", position_independence),
        ("8", "small zeroth coefficient with large L2 discrepancy", counterexample),
        ("9", "coefficient magnitude audit", audit),
        ("10", "triangular nets: corner coefficients", triangular),
        ("11", "star discrepancy bound", star_bound),
        ("12", "Monte-Carlo L2 estimate", monte_carlo),
        ("slope", "log-log slope of the symmetrized excess", slope),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id:>5}] {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{id:>5}] {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
