//! Random functional graphs and in-degree constrained ("quadratic") graphs:
//! samplers, exhaustive enumerators for tiny sizes, and censuses compared
//! with the exact averages in [`theory`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::census::{run_blocks, scan_into, stream_rng, CensusConfig, Tally};
use crate::error::{Error, Result};
use crate::fgraph::{CycleScanner, FunctionalGraph};
use crate::report::{Comparison, Family, Mode, Relation, Report, SamplingInfo, SCHEMA_VERSION};
use crate::theory::{self, int, Rational};

/// Largest `n` for the exhaustive random-map census.
pub const RANDOM_EXHAUSTIVE_MAX: u64 = 7;
/// Largest quadratic family enumerated exhaustively.
pub const QUADRATIC_GRAPH_CAP: u128 = 10_000_000;

fn random_succ(rng: &mut impl Rng, n: u64, out: &mut Vec<u32>) {
    out.clear();
    out.extend((0..n).map(|_| rng.gen_range(0..n) as u32));
}

/// Uniform random self-map of `0..n`, reproducible from `seed`.
pub fn sample_random_map(n: u64, seed: u64) -> Result<FunctionalGraph> {
    if n == 0 {
        return Err(Error::out_of_range("random map", "need n >= 1"));
    }
    let mut succ = Vec::new();
    random_succ(&mut stream_rng(seed, 0), n, &mut succ);
    FunctionalGraph::from_succ(succ)
}

fn random_tally(n: u64, cfg: &CensusConfig) -> Result<Tally> {
    if n == 0 || n > RANDOM_EXHAUSTIVE_MAX {
        return Err(Error::out_of_range(
            "random map size",
            format!("exhaustive enumeration supports 1 <= n <= {RANDOM_EXHAUSTIVE_MAX}, got {n}; use the sampled mode"),
        ));
    }
    let maps = n.pow(n as u32);
    cfg.check_budget(maps as u128, n as u128)?;
    let kmax = cfg.kmax_for(n as usize, Mode::Exhaustive);
    run_blocks(cfg, maps, kmax, |i, s, t| {
        let mut idx = i;
        s.succ.clear();
        for _ in 0..n {
            s.succ.push((idx % n) as u32);
            idx /= n;
        }
        scan_into(s, t)
    })
}

/// Exact averages over all `n^n` self-maps of `0..n`.
pub fn exhaustive_random_stats(n: u64, cfg: &CensusConfig) -> Result<Report> {
    let tally = random_tally(n, cfg)?;
    Ok(assemble(BaselineKind::Random { n }, Mode::Exhaustive, &tally, None))
}

/// Labeled graphs on `m t` vertices with out-degree 1 and every in-degree
/// 0 or `m`, in a fixed order.
///
/// The order is: image sets as lexicographic `t`-combinations; within one
/// image set, the assignment of sources to preimage blocks as lexicographic
/// permutations of the label word `0^m 1^m ... (t-1)^m`, where source `s`
/// maps to the `labels[s]`-th smallest image.
#[derive(Clone, Debug)]
pub struct QuadraticGraphs {
    n: usize,
    images: Vec<usize>,
    labels: Vec<usize>,
    done: bool,
}

impl QuadraticGraphs {
    fn new(m: usize, t: usize) -> Self {
        QuadraticGraphs {
            n: m * t,
            images: (0..t).collect(),
            labels: (0..t).flat_map(|l| std::iter::repeat_n(l, m)).collect(),
            done: m == 0 || t == 0,
        }
    }

    fn reset_labels(&mut self) {
        self.labels.sort_unstable();
    }

    fn advance_images(&mut self) -> bool {
        let t = self.images.len();
        let n = self.n;
        for i in (0..t).rev() {
            if self.images[i] < n - t + i {
                self.images[i] += 1;
                for j in i + 1..t {
                    self.images[j] = self.images[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

/// Next lexicographic permutation in place; false when `v` was the last.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Iterator for QuadraticGraphs {
    type Item = FunctionalGraph;

    fn next(&mut self) -> Option<FunctionalGraph> {
        if self.done {
            return None;
        }
        let succ: Vec<u32> = self.labels.iter().map(|&l| self.images[l] as u32).collect();
        if !next_permutation(&mut self.labels) {
            self.reset_labels();
            if !self.advance_images() {
                self.done = true;
            }
        }
        Some(FunctionalGraph::from_succ(succ).expect("images lie in range"))
    }
}

/// Stream of every quadratic graph with parameters `(m, t)`.
pub fn enumerate_quadratic_graphs(m: u64, t: u64) -> Result<QuadraticGraphs> {
    let stats = theory::quad_graph_stats(m, t)?;
    let count: u128 = (&stats.graph_count).try_into().unwrap_or(u128::MAX);
    if count > QUADRATIC_GRAPH_CAP {
        return Err(Error::BudgetExceeded {
            required: count,
            budget: QUADRATIC_GRAPH_CAP,
        });
    }
    Ok(QuadraticGraphs::new(m as usize, t as usize))
}

fn quadratic_succ(rng: &mut impl Rng, m: usize, t: usize, out: &mut Vec<u32>) {
    let n = m * t;
    let mut images = rand::seq::index::sample(rng, n, t).into_vec();
    images.sort_unstable();
    let mut labels: Vec<usize> = (0..t).flat_map(|l| std::iter::repeat_n(l, m)).collect();
    labels.shuffle(rng);
    out.clear();
    out.extend(labels.iter().map(|&l| images[l] as u32));
}

/// Uniform member of the `(m, t)` quadratic family, reproducible from `seed`.
pub fn sample_quadratic_graph(m: u64, t: u64, seed: u64) -> Result<FunctionalGraph> {
    if m == 0 || t == 0 {
        return Err(Error::out_of_range("quadratic graph", "need m, t >= 1"));
    }
    let mut succ = Vec::new();
    quadratic_succ(&mut stream_rng(seed, 0), m as usize, t as usize, &mut succ);
    FunctionalGraph::from_succ(succ)
}

/// True when every vertex has in-degree 0 or `m`.
pub fn has_indegree_profile(g: &FunctionalGraph, m: usize) -> bool {
    let mut indeg = vec![0usize; g.size()];
    for &s in g.succ() {
        indeg[s as usize] += 1;
    }
    indeg.iter().all(|&d| d == 0 || d == m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaselineKind {
    Random { n: u64 },
    Quadratic { m: u64, t: u64 },
}

impl BaselineKind {
    pub fn vertex_count(self) -> u64 {
        match self {
            BaselineKind::Random { n } => n,
            BaselineKind::Quadratic { m, t } => m * t,
        }
    }
}

fn quadratic_tally(m: u64, t: u64, cfg: &CensusConfig) -> Result<Tally> {
    let n = (m * t) as usize;
    let graphs = enumerate_quadratic_graphs(m, t)?;
    let mut tally = Tally::new(cfg.kmax_for(n, Mode::Exhaustive));
    let mut scanner = CycleScanner::default();
    for g in graphs {
        tally.record(&scanner.scan(g.succ())?);
    }
    Ok(tally)
}

/// Census over a baseline family, exhaustive or sampled (`samples` graphs
/// drawn from per-index streams of `seed`).
pub fn baseline_census(
    kind: BaselineKind,
    mode: Mode,
    samples: u64,
    seed: u64,
    cfg: &CensusConfig,
) -> Result<Report> {
    if let BaselineKind::Quadratic { m, t } = kind {
        if m == 0 || t == 0 {
            return Err(Error::out_of_range("quadratic graph", "need m, t >= 1"));
        }
    }
    if kind.vertex_count() == 0 {
        return Err(Error::out_of_range("baseline size", "need n >= 1"));
    }
    match mode {
        Mode::Exhaustive => {
            let tally = match kind {
                BaselineKind::Random { n } => random_tally(n, cfg)?,
                BaselineKind::Quadratic { m, t } => quadratic_tally(m, t, cfg)?,
            };
            Ok(assemble(kind, mode, &tally, None))
        }
        Mode::Sampled => {
            if samples == 0 {
                return Err(Error::out_of_range("samples", "need at least one sample"));
            }
            let n = kind.vertex_count();
            cfg.check_budget(samples as u128, n as u128)?;
            let kmax = cfg.kmax_for(n as usize, Mode::Sampled);
            let tally = run_blocks(cfg, samples, kmax, |i, s, t| {
                let mut rng = stream_rng(seed, i);
                match kind {
                    BaselineKind::Random { n } => random_succ(&mut rng, n, &mut s.succ),
                    BaselineKind::Quadratic { m, t } => {
                        quadratic_succ(&mut rng, m as usize, t as usize, &mut s.succ)
                    }
                }
                scan_into(s, t)
            })?;
            let info = SamplingInfo {
                scheme: "uniform".into(),
                samples,
                seed,
                stderr_components: tally.stderr_components(),
                stderr_periodic: tally.stderr_periodic(),
                stderr_k_cycles: tally.stderr_k_cycles(),
            };
            Ok(assemble(kind, mode, &tally, Some(info)))
        }
    }
}

fn assemble(kind: BaselineKind, mode: Mode, tally: &Tally, sampling: Option<SamplingInfo>) -> Report {
    let n = kind.vertex_count();
    let avg_components = tally.avg_components();
    let avg_periodic = tally.avg_periodic();
    let avg_k = tally.avg_k_cycles();
    let cmp = |name: &str, quantity: &str, k: Option<usize>, theory_value: Rational| {
        let (observed, se) = match (quantity, k) {
            ("k_cycles", Some(k)) => (
                avg_k[&k].clone(),
                sampling.as_ref().map(|s| s.stderr_k_cycles[&k]),
            ),
            ("components", _) => (avg_components.clone(), sampling.as_ref().map(|s| s.stderr_components)),
            _ => (avg_periodic.clone(), sampling.as_ref().map(|s| s.stderr_periodic)),
        };
        let c = match se {
            Some(se) => Comparison::sampled(name, quantity, Relation::Eq, observed, se, theory_value, false),
            None => Comparison::exact(name, quantity, Relation::Eq, observed, theory_value, false),
        };
        match k {
            Some(k) => c.with_param("k", k as u64),
            None => c,
        }
    };

    let mut comparisons = Vec::new();
    let mut diagnostics = BTreeMap::new();
    let mut params = BTreeMap::new();
    let family = match kind {
        BaselineKind::Random { n } => {
            params.insert("n".to_string(), n);
            let rm = theory::random_map_stats(n);
            for &k in avg_k.keys() {
                let v = Rational::new(
                    theory::falling(n, k as u64),
                    BigInt::from(k) * BigInt::from(n).pow(k as u32),
                );
                comparisons.push(cmp("random_avg_k", "k_cycles", Some(k), v));
            }
            comparisons.push(cmp("random_components", "components", None, rm.components_exact));
            comparisons.push(cmp("random_periodic", "periodic", None, rm.periodic_exact));
            diagnostics.insert("components_asymptotic".into(), rm.components_asymptotic);
            diagnostics.insert("periodic_asymptotic".into(), rm.periodic_asymptotic);
            Family::BaselineRandom
        }
        BaselineKind::Quadratic { m, t } => {
            params.insert("m".to_string(), m);
            params.insert("t".to_string(), t);
            let qs = theory::quad_graph_stats(m, t).expect("m, t >= 1");
            if mode == Mode::Exhaustive {
                comparisons.push(Comparison::exact(
                    "quad_graph_count",
                    "map_count",
                    Relation::Eq,
                    int(tally.maps),
                    Rational::from_integer(qs.graph_count.clone()),
                    false,
                ));
            }
            comparisons.push(cmp("quad_periodic", "periodic", None, qs.avg_periodic));
            comparisons.push(cmp("quad_periodic_shifted", "periodic", None, qs.avg_periodic_shifted));
            if let Some(v) = qs.avg_periodic_m2 {
                comparisons.push(cmp("quad_periodic_central_binomial", "periodic", None, v));
            }
            diagnostics.insert("periodic_asymptotic".into(), qs.asymptotic);
            Family::BaselineQuadratic
        }
    };

    Report {
        schema: SCHEMA_VERSION,
        family,
        field: None,
        q: n,
        d: None,
        params,
        degree_mode: None,
        mode,
        vertex_count: n,
        map_count: tally.maps,
        kmax: tally.kmax(),
        avg_components,
        avg_periodic,
        avg_k_cycles: avg_k,
        max_tail: tally.max_tail,
        sampling,
        theory: comparisons,
        diagnostics,
        notes: Vec::new(),
    }
}
