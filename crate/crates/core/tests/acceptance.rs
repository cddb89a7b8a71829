//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! gating failure. `-- --strict-rho` (or `FQDYN_STRICT_RHO=1`) makes AC12 gate.

use std::time::{Duration, Instant};

use fqdyn::baseline::{baseline_census, BaselineKind};
use fqdyn::census::{poly_census, poly_tally, rat_census, rat_tally, rho_experiment, CensusConfig, MapFamily};
use fqdyn::fmaps::DegreeMode;
use fqdyn::report::Mode;
use fqdyn::theory::{self, int, ratio};
use fqdyn::{make_field, verify, FieldCtx, Rational, Report, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, bool, Box<dyn Fn() -> Outcome>);

fn field(q: u32) -> FieldCtx {
    match q {
        4 => make_field(2, 2, None),
        8 => make_field(2, 3, None),
        9 => make_field(3, 2, None),
        p => make_field(p, 1, None),
    }
    .unwrap()
}

fn cfg() -> CensusConfig {
    CensusConfig::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_failures(report: &Report, label: &str) -> Result<(), String> {
    ensure(!report.has_failures(), || format!("{label}: {:?}", report.failures()))
}

fn ac1() -> Outcome {
    let mut checked = 0;
    for q in [2u32, 3, 4, 5] {
        let ctx = field(q);
        for d in 0..=3usize {
            let tally = poly_tally(&ctx, d, DegreeMode::AtMost, &cfg()).map_err(|e| e.to_string())?;
            for k in 1..=d + 1 {
                let observed = tally.k_cycles.get(k).copied().unwrap_or(0);
                let expected = theory::poly_cycle_sum(q as u64, d as u64, k as u64).map_err(|e| e.to_string())?;
                ensure(expected == observed.into(), || format!("q={q} d={d} k={k}: {observed} != {expected}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} integer totals"))
}

fn ac2() -> Outcome {
    let mut checked = 0;
    for q in [2u32, 3, 4, 5] {
        let ctx = field(q);
        for d in 0..=3usize {
            let tally = poly_tally(&ctx, d, DegreeMode::Exactly, &cfg()).map_err(|e| e.to_string())?;
            let ks = if d == 0 { 1..=1 } else { 1..=d };
            for k in ks {
                let observed = tally.avg_k_cycles().get(&k).cloned().unwrap_or_default();
                let expected = theory::poly_avg_k(q as u64, d as u64, k as u64).map_err(|e| e.to_string())?;
                ensure(observed == expected, || format!("q={q} d={d} k={k}: {observed} != {expected}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact averages"))
}

fn ac3() -> Outcome {
    let tight = poly_census(&field(2), 2, &cfg()).map_err(|e| e.to_string())?;
    let bound = theory::poly_component_bounds(2, 2);
    ensure(tight.avg_components == ratio(5, 4) && bound.lower == ratio(5, 4), || {
        format!("q=2 d=2: avg {} bound {}", tight.avg_components, bound.lower)
    })?;
    let strict = poly_census(&field(5), 2, &cfg()).map_err(|e| e.to_string())?;
    let bound = theory::poly_component_bounds(5, 2);
    ensure(strict.avg_components > bound.lower, || {
        format!("q=5 d=2: avg {} not above {}", strict.avg_components, bound.lower)
    })?;
    Ok(format!("5/4 = 5/4; {} > {}", strict.avg_components, bound.lower))
}

fn ac4() -> Outcome {
    let mut cases = 0;
    for q in [2, 3, 5] {
        let v = verify::rat_count(&field(q), 2, &cfg()).map_err(|e| e.to_string())?;
        ensure(v.passed(), || format!("q={q}: {:?}", v.failures()))?;
        cases += v.cases.len();
    }
    Ok(format!("{cases} counts"))
}

fn ac5() -> Outcome {
    let mut checked = 0;
    for q in [3u64, 5] {
        let ctx = field(q as u32);
        for d in 1..=2usize {
            let tally = rat_tally(&ctx, d, DegreeMode::AtMost, &cfg()).map_err(|e| e.to_string())?;
            for k in (1..=d + 1).filter(|&k| q > k as u64 + 1) {
                let b = theory::rat_k_cycle_total_bounds(q, d as u64, k as u64).map_err(|e| e.to_string())?;
                let observed = int(tally.k_cycles.get(k).copied().unwrap_or(0));
                ensure(b.lower < observed && observed < b.upper, || {
                    format!("q={q} d={d} k={k}: {observed} outside ({}, {})", b.lower, b.upper)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} strict sandwiches"))
}

fn rat_reports() -> Result<Vec<(u64, usize, Report)>, String> {
    let mut out = Vec::new();
    for q in [3u64, 5, 7] {
        for d in 1..=2 {
            out.push((q, d, rat_census(&field(q as u32), d, &cfg()).map_err(|e| e.to_string())?));
        }
    }
    Ok(out)
}

fn ac6() -> Outcome {
    let mut checked = 0;
    for (q, d, report) in rat_reports()? {
        let avg = report.avg_k_cycles.clone();
        for k in 1..=d + 1 {
            let b = theory::rat_avg_k_bounds(q, d as u64, k as u64).map_err(|e| e.to_string())?;
            let observed = avg.get(&k).cloned().unwrap_or_default();
            ensure(observed < b.upper, || format!("q={q} d={d} k={k}: {observed} >= {}", b.upper))?;
            if k <= d && b.lower_applies {
                ensure(observed > b.lower, || format!("q={q} d={d} k={k}: {observed} <= {}", b.lower))?;
            }
            checked += 1;
        }
        no_failures(&report, &format!("q={q} d={d}"))?;
    }
    Ok(format!("{checked} averages in bounds"))
}

fn ac7() -> Outcome {
    let mut checked = 0;
    for q in [2u64, 3, 4, 5] {
        for d in 0..=3usize {
            let r = poly_census(&field(q as u32), d, &cfg()).map_err(|e| e.to_string())?;
            let lower = theory::poly_periodic_lower(q, d as u64).value;
            ensure(r.avg_periodic >= lower, || format!("poly q={q} d={d}: {} < {lower}", r.avg_periodic))?;
            checked += 1;
        }
    }
    for (q, d, r) in rat_reports()? {
        let lower = theory::rat_periodic_lower(q, d as u64).value;
        ensure(r.avg_periodic >= lower, || format!("rat q={q} d={d}: {} < {lower}", r.avg_periodic))?;
        checked += 1;
    }
    Ok(format!("{checked} periodic averages"))
}

fn ac8() -> Outcome {
    let v = verify::prov(240, 0).map_err(|e| e.to_string())?;
    ensure(v.passed(), || format!("{:?}", v.failures()))?;
    let exact = v.cases.iter().filter(|c| c.name == "prov_exact").count();
    Ok(format!("{} instances, {exact} equality cases", v.cases.len()))
}

fn ac9() -> Outcome {
    let expected: [(u64, u64, Rational); 3] = [(2, 2, ratio(5, 3)), (2, 3, ratio(11, 5)), (1, 3, int(3))];
    for (m, t, want) in expected {
        let r = baseline_census(BaselineKind::Quadratic { m, t }, Mode::Exhaustive, 0, 0, &cfg()).map_err(|e| e.to_string())?;
        let s = theory::quad_graph_stats(m, t).map_err(|e| e.to_string())?;
        ensure(r.avg_periodic == want, || format!("(m,t)=({m},{t}): enumerated {}", r.avg_periodic))?;
        ensure(s.avg_periodic == want && s.avg_periodic_shifted == want, || {
            format!("(m,t)=({m},{t}): sums {} / {}", s.avg_periodic, s.avg_periodic_shifted)
        })?;
        if m == 2 {
            ensure(s.avg_periodic_m2.as_ref() == Some(&want), || format!("(2,{t}): central binomial form"))?;
        }
        no_failures(&r, &format!("(m,t)=({m},{t})"))?;
    }
    Ok("5/3, 11/5, 3".into())
}

fn ac10() -> Outcome {
    let exact = baseline_census(BaselineKind::Random { n: 4 }, Mode::Exhaustive, 0, 0, &cfg()).map_err(|e| e.to_string())?;
    let stats = theory::random_map_stats(4);
    ensure(exact.avg_components == ratio(195, 128) && stats.components_exact == ratio(195, 128), || {
        format!("n=4: enumerated {} theory {}", exact.avg_components, stats.components_exact)
    })?;
    let sampled = baseline_census(BaselineKind::Random { n: 1000 }, Mode::Sampled, 10_000, 0, &cfg()).map_err(|e| e.to_string())?;
    let mut zs = Vec::new();
    for name in ["random_components", "random_periodic"] {
        let c = sampled
            .theory
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| format!("missing {name}"))?;
        let z = c.z_score.unwrap_or(0.0);
        ensure(c.status == Status::Pass && z.abs() <= 5.0, || format!("{name}: z = {z:.2}, {:?}", c.status))?;
        zs.push(format!("{name} z={z:.2}"));
    }
    Ok(format!("195/128; {}", zs.join(", ")))
}

fn ac11() -> Outcome {
    let ctx = field(5);
    let runs: Vec<String> = [1, 2, 8]
        .iter()
        .map(|&j| poly_census(&ctx, 2, &cfg().with_jobs(j)).map(|r| r.to_json()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(runs[0] == runs[1] && runs[0] == runs[2], || "reports differ across job counts".into())?;
    Ok(format!("{} bytes identical for jobs 1, 2, 8", runs[0].len()))
}

fn ac12(strict: bool) -> Outcome {
    let s = rho_experiment(&field(10007), 2, MapFamily::Poly, 1000, 0, strict, &cfg()).map_err(|e| e.to_string())?;
    let detail = format!("mean rho {:.1} in [{:.1}, {:.1}]", s.mean_rho, s.band[0], s.band[1]);
    ensure(s.in_band(), || format!("{detail} violated"))?;
    Ok(detail)
}

fn main() {
    let strict_rho = std::env::args().any(|a| a == "--strict-rho")
        || std::env::var("FQDYN_STRICT_RHO").is_ok_and(|v| v == "1");
    let criteria: Vec<Criterion> = vec![
        ("AC1", Duration::from_secs(10), true, Box::new(ac1)),
        ("AC2", Duration::from_secs(10), true, Box::new(ac2)),
        ("AC3", Duration::MAX, true, Box::new(ac3)),
        ("AC4", Duration::from_secs(60), true, Box::new(ac4)),
        ("AC5", Duration::MAX, true, Box::new(ac5)),
        ("AC6", Duration::from_secs(300), true, Box::new(ac6)),
        ("AC7", Duration::MAX, true, Box::new(ac7)),
        ("AC8", Duration::from_secs(30), true, Box::new(ac8)),
        ("AC9", Duration::MAX, true, Box::new(ac9)),
        ("AC10", Duration::from_secs(60), true, Box::new(ac10)),
        ("AC11", Duration::MAX, true, Box::new(ac11)),
        ("AC12", Duration::from_secs(30), strict_rho, Box::new(move || ac12(strict_rho))),
    ];
    let mut failed = 0;
    for (name, limit, gating, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.0?}")),
            other => other,
        };
        let soft = if gating { "" } else { " (soft)" };
        match outcome {
            Ok(detail) => println!("{name} PASS{soft} [{elapsed:.2?}] {detail}"),
            Err(why) => {
                println!("{name} FAIL{soft} [{elapsed:.2?}] {why}");
                if gating {
                    failed += 1;
                }
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
