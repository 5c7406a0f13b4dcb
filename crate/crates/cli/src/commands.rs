use haarnet::discrepancy::{lp_discrepancy_mc, star_discrepancy, warnock_l2_squared};
use haarnet::formulas::{
    balanced_shift, bilyk_counterexample_report, l2sq_pa, l2sq_pc, l2sq_sym_pa, shift_params, WeightFamily,
};
use haarnet::haar::cases::{case_coefficient_pa, PaParams};
use haarnet::haar::lemmas::{region_table, Method};
use haarnet::haar::sym_cases::sym_case_coefficient;
use haarnet::haar::{dump_coefficients, level_coefficients, level_mass};
use haarnet::rational::frac;
use haarnet::{
    classify_region, generate, haar_coefficient, parseval_l2_squared, DyadicPointSet, Family, HaarIndex, NetSpec,
    Rational, ShiftVector,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::net::{generator_json, Source};
use crate::{document, fail, rat, render, Command, GenFormat, HaarArgs, L2Method, Outcome, RegionMethod, Response, SweepOver};

/// Largest point set accepted by the O(N^2) Warnock route.
pub const WARNOCK_MAX_POINTS: usize = 1 << 15;
/// Largest point set accepted by the Parseval route.
pub const PARSEVAL_MAX_POINTS: usize = 1 << 16;
/// `search-shift` enumerates every shift up to this n.
pub const EXHAUSTIVE_SEARCH_MAX_N: usize = 16;
/// Largest table `sweep` will produce.
const SWEEP_MAX_ROWS: u64 = 1 << 20;

pub fn dispatch(cmd: &Command) -> Outcome<Response> {
    match cmd {
        Command::Gen { net, format } => gen(&net.load()?, *format),
        Command::L2 { net, method } => l2(&net.load()?, *method),
        Command::Star { net } => star(&net.load()?),
        Command::LpMc { net, p, samples, seed } => lp_mc(&net.load()?, *p, *samples, *seed),
        Command::Haar(args) => haar(args),
        Command::Verify { suite, n_max, samples, seed } => crate::suites::verify(*suite, *n_max, *samples, *seed),
        Command::Sweep { net, over, method } => sweep(&net.spec()?, *over, *method),
        Command::SearchShift { net } => search_shift(&net.spec()?),
        Command::Counterexample { n, n_max } => counterexample(*n, *n_max),
    }
}

fn gen(src: &Source, format: GenFormat) -> Outcome<Response> {
    let p = src.points()?;
    if format == GenFormat::Dump {
        return Ok(Response { exit_code: 0, document: p.to_dump() });
    }
    let mut doc = document("gen");
    doc.insert("spec".into(), src.describe());
    if let Some(spec) = src.spec() {
        doc.insert("generators".into(), generator_json(spec)?);
    }
    doc.insert("resolution".into(), p.resolution().into());
    doc.insert("count".into(), p.len().into());
    doc.insert("points".into(), p.points().iter().map(|&(x, y)| json!([x, y])).collect());
    Ok(render(doc))
}

/// Closed-form `(N L2)^2` where one exists.
pub fn formula_value(spec: &NetSpec) -> Outcome<Rational> {
    let n = spec.n;
    Ok(match (&spec.family, spec.symmetrized) {
        (Family::Pa { a }, false) => l2sq_pa(n, a, &spec.shift)?,
        (Family::Pa { a }, true) => l2sq_sym_pa(n, a, &spec.shift)?,
        (Family::Pc { c }, false) => l2sq_pc(n, c, &spec.shift)?,
        (f, sym) => {
            let what = if sym { format!("symmetrized {}", f.tag()) } else { f.tag().to_string() };
            return fail(format!("no closed form for {what} nets; use --method warnock or parseval"));
        }
    })
}

fn n_squared(p: &DyadicPointSet) -> Rational {
    let n = Rational::from_integer(p.len().into());
    &n * &n
}

fn scaled_value(src: &Source, method: L2Method) -> Outcome<Rational> {
    if method == L2Method::Formula {
        return match src.spec() {
            Some(spec) => formula_value(spec),
            None => fail("--method formula needs a generated net, not --input"),
        };
    }
    let p = src.points()?;
    match method {
        L2Method::Warnock if p.len() > WARNOCK_MAX_POINTS => {
            fail(format!("warnock is limited to {WARNOCK_MAX_POINTS} points, got {}", p.len()))
        }
        L2Method::Parseval if p.len() > PARSEVAL_MAX_POINTS => {
            fail(format!("parseval is limited to {PARSEVAL_MAX_POINTS} points, got {}", p.len()))
        }
        L2Method::Warnock => Ok(warnock_l2_squared(&p)?),
        _ => Ok(parseval_l2_squared(&p, src.resolution())? * n_squared(&p)),
    }
}

fn scale_label(src: &Source) -> &'static str {
    match src.spec() {
        Some(s) if s.symmetrized => "(2^(n+1) L2)^2",
        Some(_) => "(2^n L2)^2",
        None => "(N L2)^2",
    }
}

fn point_count(src: &Source) -> Outcome<u64> {
    Ok(match src.spec() {
        Some(s) => 1u64 << (s.n + s.symmetrized as usize),
        None => src.points()?.len() as u64,
    })
}

fn l2(src: &Source, method: L2Method) -> Outcome<Response> {
    let value = scaled_value(src, method)?;
    let count = point_count(src)?;
    let n2 = Rational::from_integer((count * count).into());
    let mut doc = document("l2");
    doc.insert("spec".into(), src.describe());
    doc.insert("method".into(), format!("{method:?}").to_lowercase().into());
    doc.insert("scale".into(), scale_label(src).into());
    doc.insert("value".into(), rat(&value));
    doc.insert("l2_squared".into(), rat(&(value / n2)));
    Ok(render(doc))
}

fn star(src: &Source) -> Outcome<Response> {
    let p = src.points()?;
    let d = star_discrepancy(&p)?;
    let scaled = &d * Rational::from_integer(p.len().into());
    let mut doc = document("star");
    doc.insert("spec".into(), src.describe());
    doc.insert("value".into(), rat(&d));
    doc.insert("scaled".into(), rat(&scaled));
    if let Some(spec) = src.spec().filter(|s| !s.symmetrized) {
        let bound = frac(spec.n as i64 + 19, 3);
        doc.insert("bound".into(), rat(&bound));
        doc.insert("within_bound".into(), (scaled <= bound).into());
    }
    Ok(render(doc))
}

fn lp_mc(src: &Source, p: f64, samples: u64, seed: u64) -> Outcome<Response> {
    let pts = src.points()?;
    let est = lp_discrepancy_mc(&pts, p, samples, seed)?;
    let mut doc = document("lp-mc");
    doc.insert("spec".into(), src.describe());
    doc.insert("p".into(), p.into());
    doc.insert("samples".into(), samples.into());
    doc.insert("seed".into(), seed.into());
    doc.insert("estimate".into(), est.estimate.into());
    doc.insert("std_error".into(), est.std_error.into());
    Ok(render(doc))
}

fn pa_params<'a>(spec: &'a NetSpec) -> Outcome<PaParams<'a>> {
    match &spec.family {
        Family::Pa { a } => Ok(PaParams::new(spec.n, a, &spec.shift)?),
        _ => fail("closed-form coefficients exist for the pa family only"),
    }
}

fn haar(args: &HaarArgs) -> Outcome<Response> {
    let src = args.net.load()?;
    let p = src.points()?;
    if args.dump {
        let jmax = args.jmax.unwrap_or(src.resolution() as i32 - 1);
        if jmax > 2 * src.resolution() as i32 {
            return fail(format!("--jmax {jmax} is too large for resolution {}", src.resolution()));
        }
        let mut out = String::new();
        for (idx, v) in dump_coefficients(&p, jmax)? {
            out.push_str(&format!("{} {} {} {} {}\n", idx.j1, idx.j2, idx.m1, idx.m2, haarnet::rational::to_string(&v)));
        }
        return Ok(Response { exit_code: 0, document: out });
    }
    let mut doc = document("haar");
    doc.insert("spec".into(), src.describe());
    if args.regions {
        let spec = src.spec().ok_or_else(|| crate::Failure("--regions needs a generated pa net".into()))?;
        let params = pa_params(spec)?;
        let method = match args.region_method {
            RegionMethod::Closed => Method::Closed,
            RegionMethod::Direct => Method::Direct,
        };
        let table = region_table(&params, spec.symmetrized, method)?;
        let total: Rational = table.iter().map(|(_, v)| v.clone()).sum();
        doc.insert("method".into(), format!("{:?}", args.region_method).to_lowercase().into());
        doc.insert(
            "regions".into(),
            table.iter().map(|(r, v)| json!({ "region": r.to_string(), "mass": rat(v) })).collect(),
        );
        doc.insert("total".into(), rat(&total));
        doc.insert("scaled_total".into(), rat(&(total * n_squared(&p))));
        return Ok(render(doc));
    }
    let (Some(j1), Some(j2)) = (args.j1, args.j2) else {
        return fail("haar needs --j1 and --j2, or --dump, or --regions");
    };
    let n = src.resolution() as i32;
    if src.spec().is_some() {
        doc.insert("region".into(), classify_region(j1, j2, n).to_string().into());
    }
    match (args.m1, args.m2) {
        (Some(m1), Some(m2)) => {
            let idx = HaarIndex::new(j1, j2, m1, m2)?;
            doc.insert("index".into(), json!([j1, j2, m1, m2]));
            doc.insert("value".into(), rat(&haar_coefficient(&p, &idx)?));
            if let Some(spec) = src.spec().filter(|s| matches!(s.family, Family::Pa { .. })) {
                let params = pa_params(spec)?;
                let closed =
                    if spec.symmetrized { sym_case_coefficient(&params, &idx) } else { case_coefficient_pa(&params, &idx) };
                doc.insert("closed_form".into(), rat(&closed));
            }
        }
        (None, None) => {
            if j1.max(j2) > 2 * n + 4 {
                return fail(format!("level ({j1}, {j2}) is too fine to list"));
            }
            let coeffs = level_coefficients(&p, j1, j2)?;
            doc.insert("level".into(), json!([j1, j2]));
            doc.insert("mass".into(), rat(&level_mass(&p, j1, j2)?));
            doc.insert(
                "coefficients".into(),
                coeffs.iter().map(|(i, v)| json!({ "m1": i.m1, "m2": i.m2, "value": rat(v) })).collect(),
            );
        }
        _ => return fail("pass both --m1 and --m2, or neither to list a level"),
    }
    Ok(render(doc))
}

fn weights(spec: &NetSpec) -> Outcome<(&[bool], WeightFamily)> {
    match &spec.family {
        Family::Pa { a } => Ok((a, WeightFamily::Pa)),
        Family::Pc { c } => Ok((c, WeightFamily::Pc)),
        _ => fail("this command supports the pa and pc families"),
    }
}

fn with_weights(spec: &NetSpec, w: Vec<bool>) -> NetSpec {
    let family = match spec.family {
        Family::Pc { .. } => Family::Pc { c: w },
        _ => Family::Pa { a: w },
    };
    NetSpec { family, ..spec.clone() }
}

fn sweep(spec: &NetSpec, over: SweepOver, method: L2Method) -> Outcome<Response> {
    let (_, family) = weights(spec)?;
    let n = spec.n;
    let bits = match over {
        SweepOver::Shifts => n,
        SweepOver::A => n - 1,
    };
    if bits >= 64 || 1u64 << bits > SWEEP_MAX_ROWS {
        return fail(format!("sweep would produce 2^{bits} rows; the limit is {SWEEP_MAX_ROWS}"));
    }
    let rows: Vec<Outcome<String>> = (0..1u64 << bits)
        .into_par_iter()
        .map(|word| {
            let (row_spec, label) = match over {
                SweepOver::Shifts => {
                    let s = ShiftVector::from_word(n, word);
                    let label = s.to_string();
                    (spec.with_shift(s), label)
                }
                SweepOver::A => {
                    let v = ShiftVector::from_word(n - 1, word);
                    let label = v.to_string();
                    (with_weights(spec, v.bits().to_vec()), label)
                }
            };
            let (rw, _) = weights(&row_spec)?;
            let sp = shift_params(n, rw, &row_spec.shift, family)?;
            let value = scaled_value(&Source::Net(row_spec.clone()), method)?;
            let weight = rw.iter().filter(|b| **b).count();
            Ok(format!("{label},{weight},{},{},{}", sp.ell, sp.big_l, haarnet::rational::to_string(&value)))
        })
        .collect();
    let first = match (over, family) {
        (SweepOver::Shifts, _) => "shift",
        (SweepOver::A, WeightFamily::Pa) => "a",
        (SweepOver::A, WeightFamily::Pc) => "c",
    };
    let mut out = format!("{first},weight,ell,big_l,value\n");
    for r in rows {
        out.push_str(&r?);
        out.push('\n');
    }
    Ok(Response { exit_code: 0, document: out })
}

fn search_shift(spec: &NetSpec) -> Outcome<Response> {
    let (w, family) = weights(spec)?;
    let n = spec.n;
    let eval = |s: &ShiftVector| formula_value(&spec.with_shift(s.clone()));
    let mut doc = document("search-shift");
    doc.insert("spec".into(), crate::net::spec_json(&spec.with_shift(ShiftVector::zeros(n))));
    let (best, value, evaluated, mode) = if n <= EXHAUSTIVE_SEARCH_MAX_N {
        let all: Vec<Outcome<(Rational, u64)>> =
            (0..1u64 << n).into_par_iter().map(|word| Ok((eval(&ShiftVector::from_word(n, word))?, word))).collect();
        let mut best: Option<(Rational, u64)> = None;
        for r in all {
            let (v, word) = r?;
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, word));
            }
        }
        let (v, word) = best.expect("at least one shift");
        (ShiftVector::from_word(n, word), v, 1u64 << n, "exhaustive")
    } else {
        let mut cur = balanced_shift(n, w)?;
        let mut cur_v = eval(&cur)?;
        doc.insert("start".into(), cur.to_string().into());
        let mut evaluated = 1u64;
        loop {
            let flips: Vec<Outcome<(Rational, usize)>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut b = cur.bits().to_vec();
                    b[i] = !b[i];
                    Ok((eval(&ShiftVector::new(b))?, i))
                })
                .collect();
            evaluated += n as u64;
            let mut step: Option<(Rational, usize)> = None;
            for f in flips {
                let (v, i) = f?;
                if v < cur_v && step.as_ref().is_none_or(|(b, _)| v < *b) {
                    step = Some((v, i));
                }
            }
            let Some((v, i)) = step else { break };
            let mut b = cur.bits().to_vec();
            b[i] = !b[i];
            cur = ShiftVector::new(b);
            cur_v = v;
        }
        (cur, cur_v, evaluated, "balanced+greedy")
    };
    let sp = shift_params(n, w, &best, family)?;
    doc.insert("mode".into(), mode.into());
    doc.insert("evaluated".into(), evaluated.into());
    doc.insert("shift".into(), best.to_string().into());
    doc.insert("ell".into(), sp.ell.into());
    doc.insert("big_l".into(), sp.big_l.into());
    doc.insert("scale".into(), if spec.symmetrized { "(2^(n+1) L2)^2" } else { "(2^n L2)^2" }.into());
    doc.insert("value".into(), rat(&value));
    doc.insert("unshifted_value".into(), rat(&eval(&ShiftVector::zeros(n))?));
    Ok(render(doc))
}

/// Generic corner coefficient and Warnock value are recomputed from the points up to this n.
const COUNTEREXAMPLE_CHECK_MAX_N: usize = 12;

fn counterexample(n: Option<usize>, n_max: Option<usize>) -> Outcome<Response> {
    let range = match (n, n_max) {
        (Some(n), _) => n..=n,
        (None, Some(m)) => 2..=m,
        (None, None) => 2..=10,
    };
    let corner = HaarIndex::new(-1, -1, 0, 0)?;
    let mut reports = Vec::new();
    for n in range {
        let r = bilyk_counterexample_report(n)?;
        let mut entry = json!({
            "n": n,
            "mu_corner": rat(&r.mu_corner),
            "one_over_n": rat(&r.one_over_n),
            "corner_small": r.corner_small,
            "l2sq_scaled": rat(&r.l2sq_scaled),
            "lower_bound": rat(&r.lower_bound),
            "l2_large": r.l2_large,
            "ratio_to_lower_bound": rat(&(&r.l2sq_scaled / &r.lower_bound)),
        });
        if n <= COUNTEREXAMPLE_CHECK_MAX_N {
            let p = generate(&NetSpec::pa(vec![true; n - 1], ShiftVector::zeros(n)))?;
            let mu = haar_coefficient(&p, &corner)?;
            let w = warnock_l2_squared(&p)?;
            entry["generic_mu_corner"] = rat(&mu);
            entry["warnock"] = rat(&w);
            entry["confirmed"] = Value::Bool(mu == r.mu_corner && w == r.l2sq_scaled);
        }
        reports.push(entry);
    }
    let mut doc = document("counterexample");
    doc.insert("a".into(), "1...1".into());
    doc.insert("scale".into(), "(2^n L2)^2".into());
    doc.insert("reports".into(), Value::Array(reports));
    Ok(render(doc))
}
