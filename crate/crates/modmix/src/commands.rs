//! One function per subcommand, each producing a [`Report`].

use anyhow::{anyhow, bail, Context};
use modmix_core::average::{self, DeviationSearch};
use modmix_core::bounds::{self, BoundReport, ComplexSignal, NormCheck, NormOptions};
use modmix_core::combinatorics::{self, CounterexampleWitness, CoverageReport};
use modmix_core::kernel::Backend;
use modmix_core::poly::describe_parse_error;
use modmix_core::rational::{self, ratio};
use modmix_core::{IntValuedPoly, Modulus, Rational, ResidueSet};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cli::*;
use crate::parallel;
use crate::report::{opt_rat, rat, Check, Report};
use crate::reproduce;
use crate::setexpr::parse_set;
use crate::verify;

/// Sets larger than this are summarized by their size in reports.
const MAX_LISTED: usize = 4096;

/// Runs a configuration on a pool of `workers` threads.
pub fn run(config: &RunConfig) -> anyhow::Result<Report> {
    parallel::with_workers(config.global.workers, || dispatch(config))?
}

fn dispatch(config: &RunConfig) -> anyhow::Result<Report> {
    let g = &config.global;
    let (result, checks) = match &config.command {
        Command::Average(a) => average_cmd(a)?,
        Command::DeviationScan(a) => deviation_cmd(a, g)?,
        Command::Pkgoal(a) => pkgoal_cmd(a, g)?,
        Command::Expsum(a) => expsum_cmd(a)?,
        Command::Bounds(BoundsCommand::LpfBound(a)) => lpf_bound_cmd(a, g)?,
        Command::Bounds(BoundsCommand::Norm(a)) => norm_cmd(a, g, true)?,
        Command::Bounds(BoundsCommand::Vdc(a)) => norm_cmd(a, g, false)?,
        Command::Thresholds(a) => thresholds_cmd(a)?,
        Command::PairCount(a) => pair_count_cmd(a)?,
        Command::Coverage(a) => coverage_cmd(a)?,
        Command::Waring(a) => waring_cmd(a)?,
        Command::WeilCount(a) => weil_cmd(a)?,
        Command::Counterexample(a) => counterexample_cmd(a)?,
        Command::Reproduce(a) => reproduce_cmd(a, g)?,
        Command::Verify(a) => verify::verify_cmd(a)?,
    };
    let config_value = serde_json::to_value(config)?;
    Ok(Report::new(config.command.name(), config_value, result, checks))
}

type Outcome = (Value, Vec<Check>);

pub fn modulus(n: u64) -> anyhow::Result<Modulus> {
    Modulus::new(n).with_context(|| format!("invalid --n {n}"))
}

pub fn poly(expr: &str) -> anyhow::Result<IntValuedPoly> {
    IntValuedPoly::parse(expr).map_err(|e| match e {
        modmix_core::Error::Parse { column, .. } => {
            anyhow!("{e}\n{}", describe_parse_error(expr, column))
        }
        other => anyhow!("polynomial '{expr}': {other}"),
    })
}

fn set(expr: &str, m: &Modulus, flag: &str) -> anyhow::Result<ResidueSet> {
    parse_set(expr, m).with_context(|| format!("{flag} '{expr}'"))
}

pub fn rational_arg(flag: &str, text: &str) -> anyhow::Result<Rational> {
    rational::parse(text).ok_or_else(|| anyhow!("{flag}: expected p/q, got '{text}'"))
}

fn set_value(s: &ResidueSet) -> Value {
    if s.len() <= MAX_LISTED {
        json!(s.to_vec())
    } else {
        json!({ "size": s.len() })
    }
}

fn bound_check(name: &str, r: &BoundReport) -> Check {
    Check::new(name, r.asserted, r.holds).sides(&r.lhs, &r.rhs)
}

fn average_cmd(a: &AverageArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let set_a = set(&a.set_a, &m, "--set-a")?;
    let set_b = match &a.set_b {
        Some(e) => set(e, &m, "--set-b")?,
        None => set_a.clone(),
    };
    let p = poly(&a.poly)?;
    let backend = match a.backend {
        BackendArg::Auto => Backend::Auto,
        BackendArg::Bitvector => Backend::BitVector,
        BackendArg::Transform => Backend::Transform,
    };
    let profile = parallel::correlation_profile(&set_a, &set_b, backend)?;
    let r = average::average_from_parts(&profile, &p.image_histogram(&m), set_a.len(), set_b.len())?;
    Ok((
        json!({
            "n": a.n,
            "poly": p.to_string(),
            "size_a": set_a.len(),
            "size_b": set_b.len(),
            "average": rat(&r.average),
            "product": rat(&r.product),
            "deviation": rat(&r.deviation),
        }),
        vec![],
    ))
}

pub fn deviation_value(s: &DeviationSearch) -> Value {
    json!({
        "witness": set_value(&s.witness),
        "deviation": rat(&s.deviation),
        "abs_deviation": rat(&s.max_abs()),
        "candidates": s.candidates,
        "exhaustive": s.exhaustive,
        "symmetry": s.symmetry,
    })
}

fn deviation_cmd(a: &DeviationArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let p = poly(&a.poly)?;
    let s = match a.mode {
        ScanMode::Exhaustive => {
            parallel::exhaustive_deviation(&m, &p, !a.no_symmetry, g.max_exhaustive)?
        }
        ScanMode::Sampled => parallel::sampled_deviation(&m, &p, a.samples, g.seed)?,
    };
    let mut v = deviation_value(&s);
    v["n"] = json!(a.n);
    v["poly"] = json!(p.to_string());
    Ok((v, vec![]))
}

fn pkgoal_cmd(a: &PkgoalArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let n = a
        .prime
        .checked_pow(a.power)
        .ok_or_else(|| anyhow!("p^k overflows"))?;
    let m = modulus(n)?;
    let sets: Vec<ResidueSet> = match (&a.set_a, a.random, a.exhaustive) {
        (Some(e), None, false) => vec![set(e, &m, "--set-a")?],
        (None, Some(count), false) => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            (0..count).map(|_| ResidueSet::random(&m, &mut rng)).collect()
        }
        (None, None, true) => {
            if n > g.max_exhaustive {
                return Err(modmix_core::Error::RefuseExhaustive {
                    n,
                    bound: g.max_exhaustive,
                }
                .into());
            }
            (0..1u64 << n)
                .map(|mask| ResidueSet::from_mask(&m, mask))
                .collect::<modmix_core::Result<_>>()?
        }
        _ => bail!("give exactly one of --set-a, --random, --exhaustive"),
    };
    let mut equal = 0u64;
    let mut first_mismatch = None;
    let mut asserted = true;
    let mut single = None;
    for s in &sets {
        let r = average::pkgoal_check(s, a.prime, a.power, a.permissive)?;
        asserted &= r.asserted;
        if r.equal {
            equal += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(set_value(s));
        }
        if sets.len() == 1 {
            single = Some(r);
        }
    }
    let mut v = json!({
        "p": a.prime,
        "k": a.power,
        "sets": sets.len(),
        "equal": equal,
        "first_mismatch": first_mismatch,
    });
    let mut check = Check::new("closed form equality", asserted, equal == sets.len() as u64);
    if let Some(r) = single {
        v["lhs"] = json!(rat(&r.lhs));
        v["rhs"] = json!(rat(&r.rhs));
        v["terms"] = r
            .terms
            .iter()
            .map(|t| json!({"m": t.m, "inner": rat(&t.inner)}))
            .collect();
        check = check.sides(&r.lhs, &r.rhs);
    }
    Ok((v, vec![check]))
}

fn expsum_cmd(a: &ExpsumArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let rhs = ratio(a.d as i128, m.lpf() as i128);
    let (value, j) = match a.j {
        Some(j) => (bounds::expsum_exact(&m, j as i128, a.d)?, m.reduce(j as i128)),
        None => {
            let r = bounds::expsum_bound_check(&m, a.d)?;
            (r.report.lhs, r.worst_j)
        }
    };
    let check = Check::new("exponential sum lpf bound", true, value <= rhs).sides(&value, &rhs);
    Ok((
        json!({
            "n": a.n,
            "d": a.d,
            "j": j,
            "worst_case": a.j.is_none(),
            "value": rat(&value),
            "lpf": m.lpf(),
        }),
        vec![check],
    ))
}

fn signal(s: &SignalArgs, m: &Modulus, seed: u64, centered: bool) -> anyhow::Result<ComplexSignal> {
    match (&s.set_a, s.character, s.signs) {
        (Some(e), None, false) => Ok(ComplexSignal::centered_indicator(&set(e, m, "--set-a")?)?),
        (None, Some(j), false) => Ok(ComplexSignal::character(m, j)?),
        (None, None, true) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = ComplexSignal::random_signs(m, &mut rng);
            if !centered {
                return Ok(f);
            }
            // (v - mean) / 2, over the denominator 2N.
            let modmix_core::bounds::SignalRepr::Values { re, .. } = f.repr() else {
                unreachable!("signs are pointwise")
            };
            let n = m.get() as i64;
            let sum: i64 = re.iter().sum();
            let values = re.iter().map(|v| n * v - sum).collect();
            Ok(ComplexSignal::real(m, values, 2 * m.get())?)
        }
        _ => bail!("give exactly one of --set-a, --character, --signs"),
    }
}

fn lpf_bound_cmd(a: &LpfBoundArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let f = signal(&a.signal, &m, g.seed, false)?;
    let r = bounds::weighted_linear_check(&f, a.d)?;
    Ok((
        json!({
            "n": a.n,
            "d": a.d,
            "lhs": rat(&r.lhs),
            "rhs": rat(&r.rhs),
            "slack": rat(&r.slack),
            "mean_abs_squared": rat(&f.mean_abs_squared()),
            "norm_squared": rat(&f.norm_squared()),
        }),
        vec![bound_check("weighted linear lpf bound", &r)],
    ))
}

pub fn norm_checks(r: &NormCheck, include_main: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    if include_main {
        let detail = if r.degree >= 2 {
            format!("norm^2 raised to 2^{} against (k-1)/lpf", r.degree - 2)
        } else {
            "degree 1: norm^2 against 0".to_string()
        };
        checks.push(bound_check("average norm bound", &r.report).detail(detail));
    }
    for step in &r.vdc {
        let name = format!("differencing step d={}", step.d);
        checks.push(match &step.report {
            Some(rep) => bound_check(&name, rep),
            None => Check::new(name, false, false).detail("skipped: over the work budget"),
        });
    }
    checks
}

fn norm_cmd(a: &NormArgs, g: &GlobalArgs, include_main: bool) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let p = poly(&a.poly)?;
    let f = signal(&a.signal, &m, g.seed, true)?;
    let r = bounds::average_norm_check(
        &f,
        &p,
        NormOptions {
            vdc_budget: a.vdc_budget,
        },
    )?;
    let vdc: Vec<Value> = r
        .vdc
        .iter()
        .map(|s| match &s.report {
            Some(rep) => json!({"d": s.d, "lhs": rat(&rep.lhs), "rhs": rat(&rep.rhs), "holds": rep.holds}),
            None => json!({"d": s.d, "skipped": true}),
        })
        .collect();
    Ok((
        json!({
            "n": a.n,
            "poly": p.to_string(),
            "degree": r.degree,
            "lhs_squared": rat(&r.lhs_squared),
            "bound": rat(&r.bound),
            "applicable": r.applicable,
            "c_p": p.c_p(),
            "reindexed_by": r.reindexed_by,
            "vdc": vdc,
        }),
        norm_checks(&r, include_main),
    ))
}

fn thresholds_cmd(a: &ThresholdArgs) -> anyhow::Result<Outcome> {
    let p = poly(&a.poly)?;
    let r = bounds::thresholds(
        &p,
        &rational_arg("--mu-a", &a.mu_a)?,
        &rational_arg("--mu-b", &a.mu_b)?,
        &rational_arg("--eps", &a.eps)?,
        &rational_arg("--delta", &a.delta)?,
    )?;
    Ok((
        json!({
            "poly": p.to_string(),
            "c_p": r.c_p,
            "threshold": rat(&r.threshold),
            "epsilon": rat(&r.epsilon),
            "delta": rat(&r.delta),
            "c": rat(&r.c),
            "quantitative_threshold": rat(&r.quantitative_threshold),
            "degenerate": r.degenerate,
        }),
        vec![],
    ))
}

fn pair_count_cmd(a: &PairCountArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let set_a = set(&a.set_a, &m, "--set-a")?;
    let set_b = set(&a.set_b, &m, "--set-b")?;
    let p = poly(&a.poly)?;
    let eps = a.eps.as_deref().map(|e| rational_arg("--eps", e)).transpose()?;
    let r = combinatorics::pair_count(&set_a, &set_b, &p, eps.as_ref())?;
    let mut checks = vec![];
    if let (Some(eps), Some(ok)) = (&eps, r.threshold_ok) {
        let achieved = r.epsilon_achieved.clone().unwrap_or_default();
        checks.push(
            Check::new("pair count within epsilon", ok, r.within(eps))
                .sides(&achieved, eps)
                .detail(if ok {
                    "lpf(N) exceeds the density threshold"
                } else {
                    "lpf(N) below the density threshold; not claimed"
                }),
        );
    }
    Ok((
        json!({
            "n": a.n,
            "poly": p.to_string(),
            "s": r.s.to_string(),
            "expected": r.expected.to_string(),
            "epsilon_achieved": opt_rat(r.epsilon_achieved.as_ref()),
            "threshold_ok": r.threshold_ok,
            "threshold": opt_rat(r.threshold.as_ref().map(|t| &t.threshold)),
            "lpf": m.lpf(),
        }),
        checks,
    ))
}

fn coverage_value(n: u64, r: &CoverageReport) -> Value {
    json!({
        "n": n,
        "covered": r.covered,
        "missing_count": r.missing.len(),
        "missing": r.missing,
        "witnesses": r.witness_triples.iter().map(|w| json!([w.target, w.a, w.b, w.s])).collect::<Vec<_>>(),
    })
}

fn coverage_cmd(a: &CoverageArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let set_a = set(&a.set_a, &m, "--set-a")?;
    let set_b = set(&a.set_b, &m, "--set-b")?;
    let p = poly(&a.poly)?;
    let r = combinatorics::coverage_check(&set_a, &set_b, &p)?;
    Ok((coverage_value(a.n, &r), vec![]))
}

fn waring_cmd(a: &WaringArgs) -> anyhow::Result<Outcome> {
    let m = modulus(a.n)?;
    let r = combinatorics::waring_check(&m, a.power)?;
    let mut v = coverage_value(a.n, &r);
    v["power"] = json!(a.power);
    Ok((v, vec![]))
}

fn weil_cmd(a: &WeilArgs) -> anyhow::Result<Outcome> {
    let fs = [poly(&a.f1)?, poly(&a.f2)?, poly(&a.f3)?];
    let r = combinatorics::solution_count_three([&fs[0], &fs[1], &fs[2]], a.c as i128, a.prime)?;
    let check = Check::new("Weil lower bound", r.asserted, r.holds).detail(format!(
        "{} >= {:.6}",
        r.count, r.weil_lower
    ));
    Ok((
        json!({
            "p": a.prime,
            "c": a.c,
            "count": r.count,
            "degrees": r.degrees,
            "weil_lower": format!("{:.6}", r.weil_lower),
        }),
        vec![check],
    ))
}

fn witness_value(w: &CounterexampleWitness) -> Value {
    let mut v = json!({
        "kind": format!("{:?}", w.kind).to_lowercase(),
        "n": w.modulus.get(),
        "poly": w.poly.to_string(),
        "a": set_value(&w.a),
        "b": set_value(&w.b),
        "measure_a": rat(&w.a.measure()),
        "predicted": opt_rat(w.predicted.as_ref()),
        "observed": rat(&w.observed),
        "deviation": rat(&w.deviation),
    });
    if let Some(d) = &w.nonpermutation {
        v["p"] = json!(d.p);
        v["c"] = json!(d.c);
        v["a_residue"] = json!(d.a);
        v["m_a"] = json!(d.m_a);
    }
    v
}

fn counterexample_cmd(a: &CounterexampleArgs) -> anyhow::Result<Outcome> {
    let need_prime = || a.prime.ok_or_else(|| anyhow!("--prime is required for this kind"));
    let need_n = || a.n.ok_or_else(|| anyhow!("--n is required for this kind"));
    let w = match a.kind {
        CounterexampleKindArg::Under => combinatorics::underergodic_witness(need_prime()?, a.k)?,
        CounterexampleKindArg::Over => combinatorics::overergodic_witness(need_prime()?, a.k)?,
        CounterexampleKindArg::Nonpermutation => {
            combinatorics::nonpermutation_witness(&poly(&a.poly)?, a.cofactor, a.search_bound)?
        }
        CounterexampleKindArg::Interval => combinatorics::interval_witness(&modulus(need_n()?)?)?,
        CounterexampleKindArg::Trivial => {
            let (p, n) = (need_prime()?, need_n()?);
            let r = combinatorics::trivial_disjoint_demo(p, n)?;
            let check = Check::new("average vanishes", true, r.average.is_zero())
                .sides(&r.average, &Rational::zero());
            return Ok((
                json!({
                    "kind": "trivial",
                    "n": n,
                    "p": p,
                    "average": rat(&r.average),
                    "product": rat(&r.product),
                }),
                vec![check],
            ));
        }
    };
    let mut checks = vec![];
    if let Some(pred) = &w.predicted {
        checks.push(
            Check::new("observed equals prediction", true, *pred == w.observed)
                .sides(&w.observed, pred),
        );
    }
    if let Some(d) = &w.nonpermutation {
        let floor = ratio(1, d.p as i128 * d.p as i128);
        checks.push(
            Check::new("deviation at least 1/p^2", true, w.deviation >= floor)
                .sides(&floor, &w.deviation),
        );
    }
    if w.predicted.is_none() {
        checks.push(
            Check::new("weak-mixing average positive", true, w.observed > Rational::zero())
                .sides(&Rational::zero(), &w.observed),
        );
    }
    Ok((witness_value(&w), checks))
}

fn reproduce_cmd(a: &ReproduceArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let ids: Vec<u32> = if a.all || a.criterion.is_empty() {
        (1..=12).collect()
    } else {
        a.criterion.clone()
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for id in ids {
        let o = reproduce::run_criterion(id, g.seed)?;
        rows.push(json!({
            "id": o.id,
            "title": o.title,
            "passed": o.passed,
            "values_ok": o.values_ok,
            "within_time_limit": o.within_time_limit,
            "detail": o.detail,
        }));
        checks.push(Check::new(format!("criterion {}: {}", o.id, o.title), true, o.passed).detail(o.detail));
    }
    Ok((json!({ "criteria": rows }), checks))
}
