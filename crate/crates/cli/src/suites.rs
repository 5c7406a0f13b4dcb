//! `verify`: closed forms against the generic routes, over exhaustive or seeded random cases.

use haarnet::discrepancy::{star_discrepancy, warnock_l2_squared};
use haarnet::formulas::{l2sq_pa, l2sq_pc, l2sq_sym_pa};
use haarnet::haar::cases::{case_coefficient_pa, PaParams};
use haarnet::haar::lemmas::{region_parseval_sum, sym_region_parseval_sum, Method};
use haarnet::haar::level_coefficients;
use haarnet::haar::sym_cases::sym_case_coefficient;
use haarnet::netgen::{bits_to_string, symmetrize};
use haarnet::rational::{frac, pow2, to_string};
use haarnet::{classify_region, generate, parseval_l2_squared, NetSpec, Rational, RegionId, ShiftVector};
use indexmap::IndexMap;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{document, fail, render, Outcome, Response, Suite};

/// Largest n each suite accepts, and the largest n it enumerates exhaustively.
fn limits(suite: Suite) -> (usize, usize) {
    match suite {
        Suite::Theorems => (10, 5),
        Suite::Propositions => (7, 4),
        Suite::Lemmas => (8, 4),
        Suite::Star => (10, 4),
        Suite::All => (7, 4),
    }
}

const MAX_LISTED: usize = 20;

#[derive(Clone)]
struct Case {
    n: usize,
    a: Vec<bool>,
    shift: ShiftVector,
}

impl Case {
    fn label(&self) -> String {
        format!("n={} a={} shift={}", self.n, bits_to_string(&self.a), self.shift)
    }
}

/// One identity evaluated on one case; `count` equalities were compared.
struct Check {
    identity: &'static str,
    count: u64,
    failure: Option<String>,
    sign_only: Vec<RegionId>,
}

impl Check {
    fn equal(identity: &'static str, lhs: &Rational, rhs: &Rational) -> Self {
        let failure = (lhs != rhs).then(|| format!("{} != {}", to_string(lhs), to_string(rhs)));
        Check { identity, count: 1, failure, sign_only: Vec::new() }
    }
}

fn cases(n: usize, exhaustive_to: usize, samples: usize, seed: u64) -> Vec<Case> {
    if n <= exhaustive_to {
        (0..1u64 << (n - 1))
            .flat_map(|aw| {
                (0..1u64 << n).map(move |sw| Case {
                    n,
                    a: ShiftVector::from_word(n - 1, aw).bits().to_vec(),
                    shift: ShiftVector::from_word(n, sw),
                })
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        (0..samples)
            .map(|_| Case {
                n,
                a: (0..n - 1).map(|_| rng.gen()).collect(),
                shift: ShiftVector::new((0..n).map(|_| rng.gen()).collect()),
            })
            .collect()
    }
}

fn theorems(c: &Case) -> haarnet::Result<Vec<Check>> {
    let n = c.n;
    let plain = generate(&NetSpec::pa(c.a.clone(), c.shift.clone()))?;
    let w = warnock_l2_squared(&plain)?;
    let count = Rational::from_integer(plain.len().into());
    let parseval = parseval_l2_squared(&plain, n as u32)? * &count * &count;
    let sym = symmetrize(&plain);
    let pc = generate(&NetSpec::pc(c.a.clone(), c.shift.clone()))?;
    Ok(vec![
        Check::equal("l2sq_pa = warnock", &l2sq_pa(n, &c.a, &c.shift)?, &w),
        Check::equal("N^2 parseval = warnock", &parseval, &w),
        Check::equal("l2sq_sym_pa = warnock (symmetrized)", &l2sq_sym_pa(n, &c.a, &c.shift)?, &warnock_l2_squared(&sym)?),
        Check::equal("l2sq_pc = warnock", &l2sq_pc(n, &c.a, &c.shift)?, &warnock_l2_squared(&pc)?),
    ])
}

/// Closed against generic coefficients on every index with `j1, j2 <= n - 1`, in absolute value.
fn propositions(c: &Case) -> haarnet::Result<Vec<Check>> {
    let n = c.n;
    let params = PaParams::new(n, &c.a, &c.shift)?;
    let plain = generate(&NetSpec::pa(c.a.clone(), c.shift.clone()))?;
    let sym = symmetrize(&plain);
    let mut out = Vec::new();
    for (identity, pts, symmetrized) in [
        ("|closed coefficient| = |generic coefficient|", &plain, false),
        ("|closed coefficient| = |generic coefficient| (symmetrized)", &sym, true),
    ] {
        let mut check = Check { identity, count: 0, failure: None, sign_only: Vec::new() };
        'levels: for j1 in -1..n as i32 {
            for j2 in -1..n as i32 {
                for (idx, g) in level_coefficients(pts, j1, j2)? {
                    let closed =
                        if symmetrized { sym_case_coefficient(&params, &idx) } else { case_coefficient_pa(&params, &idx) };
                    check.count += 1;
                    if closed.abs() != g.abs() {
                        check.failure = Some(format!(
                            "j=({j1},{j2}) m=({},{}): closed {}, generic {}",
                            idx.m1,
                            idx.m2,
                            to_string(&closed),
                            to_string(&g)
                        ));
                        break 'levels;
                    }
                    let region = classify_region(j1, j2, n as i32);
                    if closed != g && !check.sign_only.contains(&region) {
                        check.sign_only.push(region);
                    }
                }
            }
        }
        out.push(check);
    }
    Ok(out)
}

fn lemmas(c: &Case) -> haarnet::Result<Vec<Check>> {
    let p = PaParams::new(c.n, &c.a, &c.shift)?;
    let mut plain = Check { identity: "closed region sum = direct region sum", count: 0, failure: None, sign_only: vec![] };
    let mut sym = Check {
        identity: "closed region sum = direct region sum (symmetrized)",
        count: 0,
        failure: None,
        sign_only: vec![],
    };
    for r in RegionId::ALL {
        for (check, f) in [
            (&mut plain, region_parseval_sum as fn(&PaParams, RegionId, Method) -> haarnet::Result<Rational>),
            (&mut sym, sym_region_parseval_sum),
        ] {
            let closed = f(&p, r, Method::Closed)?;
            let direct = f(&p, r, Method::Direct)?;
            check.count += 1;
            if closed != direct && check.failure.is_none() {
                check.failure = Some(format!("{r}: closed {}, direct {}", to_string(&closed), to_string(&direct)));
            }
        }
    }
    Ok(vec![plain, sym])
}

fn star(c: &Case) -> haarnet::Result<Vec<Check>> {
    let bound = frac(c.n as i64 + 19, 3);
    let mut out = Vec::new();
    for (identity, spec) in [
        ("2^n D* <= n/3 + 19/3 (pa)", NetSpec::pa(c.a.clone(), c.shift.clone())),
        ("2^n D* <= n/3 + 19/3 (pc)", NetSpec::pc(c.a.clone(), c.shift.clone())),
    ] {
        let scaled = star_discrepancy(&generate(&spec)?)? * pow2(c.n as i64);
        let failure = (scaled > bound).then(|| format!("2^n D* = {}", to_string(&scaled)));
        out.push(Check { identity, count: 1, failure, sign_only: vec![] });
    }
    Ok(out)
}

type Runner = fn(&Case) -> haarnet::Result<Vec<Check>>;

pub fn verify(suite: Suite, n_max: usize, samples: usize, seed: u64) -> Outcome<Response> {
    let (ceiling, exhaustive_to) = limits(suite);
    if n_max == 0 || n_max > ceiling {
        return fail(format!("--n-max must lie in 1..={ceiling} for this suite"));
    }
    let runners: Vec<(&str, Runner)> = match suite {
        Suite::Theorems => vec![("theorems", theorems)],
        Suite::Propositions => vec![("propositions", propositions)],
        Suite::Lemmas => vec![("lemmas", lemmas)],
        Suite::Star => vec![("star", star)],
        Suite::All => vec![("theorems", theorems), ("propositions", propositions), ("lemmas", lemmas), ("star", star)],
    };
    Ok(execute(&runners, n_max, exhaustive_to, samples, seed))
}

fn execute(runners: &[(&str, Runner)], n_max: usize, exhaustive_to: usize, samples: usize, seed: u64) -> Response {
    let all_cases: Vec<Case> = (1..=n_max).flat_map(|n| cases(n, exhaustive_to, samples, seed)).collect();

    let mut totals: IndexMap<&'static str, (u64, u64)> = IndexMap::new();
    let mut listed = Vec::new();
    let mut mismatches = 0u64;
    let mut sign_only: IndexMap<&'static str, Vec<RegionId>> = IndexMap::new();
    let mut checked = 0u64;
    for (_, runner) in runners {
        let results: Vec<haarnet::Result<Vec<Check>>> = all_cases.par_iter().map(runner).collect();
        for (case, result) in all_cases.iter().zip(results) {
            let checks = match result {
                Ok(c) => c,
                Err(e) => vec![Check {
                    identity: "case evaluation",
                    count: 1,
                    failure: Some(e.to_string()),
                    sign_only: vec![],
                }],
            };
            for check in checks {
                let entry = totals.entry(check.identity).or_default();
                entry.0 += check.count;
                checked += check.count;
                if !check.sign_only.is_empty() {
                    let regions = sign_only.entry(check.identity).or_default();
                    for r in check.sign_only {
                        if !regions.contains(&r) {
                            regions.push(r);
                        }
                    }
                }
                if let Some(detail) = check.failure {
                    entry.1 += 1;
                    mismatches += 1;
                    if listed.len() < MAX_LISTED {
                        listed.push(json!({ "identity": check.identity, "case": case.label(), "detail": detail }));
                    }
                }
            }
        }
    }

    let mut doc = document("verify");
    doc.insert("suite".into(), runners.iter().map(|(s, _)| *s).collect::<Vec<_>>().join("+").into());
    doc.insert("n_max".into(), n_max.into());
    doc.insert("exhaustive_up_to".into(), exhaustive_to.min(n_max).into());
    if n_max > exhaustive_to {
        doc.insert("samples_per_n".into(), samples.into());
        doc.insert("seed".into(), seed.into());
    }
    doc.insert("cases".into(), all_cases.len().into());
    doc.insert("checked".into(), checked.into());
    doc.insert(
        "identities".into(),
        totals
            .iter()
            .map(|(id, (count, bad))| json!({ "identity": id, "checked": count, "mismatches": bad }))
            .collect(),
    );
    if !sign_only.is_empty() {
        let mut m = serde_json::Map::new();
        for (id, mut regions) in sign_only {
            regions.sort_by_key(|r| r.number());
            m.insert(id.into(), regions.iter().map(|r| Value::from(r.to_string())).collect());
        }
        doc.insert("sign_only_regions".into(), Value::Object(m));
    }
    doc.insert("mismatches".into(), mismatches.into());
    if !listed.is_empty() {
        doc.insert("mismatch_details".into(), Value::Array(listed));
    }
    doc.insert("ok".into(), (mismatches == 0).into());
    let mut resp = render(doc);
    if mismatches > 0 {
        resp.exit_code = 2;
    }
    resp
}
