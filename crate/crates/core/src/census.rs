//! Exhaustive and sampled cycle censuses over families of maps, plus the
//! brute-force counting oracles used by the verification harnesses.
//!
//! Work is split into fixed-size contiguous index blocks. Each block produces
//! an integer [`Tally`]; tallies merge by addition, so a report never depends
//! on the number of worker threads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldDesc, FqElem};
use crate::fgraph::{brent, CycleScanner, ScanView};
use crate::fmaps::{CoeffSlice, DegreeMode, Poly, PolySpace, ProjPoint, RationalMap, RationalSpace, SelfMap};
use crate::report::{
    Comparison, Family, Mode, Relation, Report, SamplingInfo, Status, SCHEMA_VERSION,
};
use crate::theory::{self, int, isqrt, Rational};

/// Default ceiling on `maps * vertices` for exhaustive runs.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
pub const BUDGET_ENV: &str = "FQDYN_BUDGET";
/// Indices per work block. Fixed so block boundaries never depend on `jobs`.
pub const BLOCK_SIZE: u64 = 4096;
/// Default `kmax` for sampled runs, where the vertex set may be large.
pub const SAMPLED_KMAX: usize = 32;
/// Largest vertex count for which reports carry the exact random-map averages.
pub const EXACT_RANDOM_LIMIT: usize = 4096;

/// Budget from `FQDYN_BUDGET` when set and parseable, else the default.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    /// Largest cycle length tallied individually; `None` means the whole
    /// vertex set (exhaustive) or [`SAMPLED_KMAX`] (sampled).
    pub kmax: Option<usize>,
    pub jobs: usize,
    pub budget: u128,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            kmax: None,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl CensusConfig {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_kmax(mut self, kmax: usize) -> Self {
        self.kmax = Some(kmax);
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub(crate) fn kmax_for(&self, vertices: usize, mode: Mode) -> usize {
        let default = match mode {
            Mode::Exhaustive => vertices,
            Mode::Sampled => vertices.min(SAMPLED_KMAX),
        };
        self.kmax.unwrap_or(default).min(vertices)
    }

    pub(crate) fn check_budget(&self, maps: u128, vertices: u128) -> Result<()> {
        let required = maps.saturating_mul(vertices);
        if required > self.budget {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.max(1))
            .build()
            .map_err(|e| Error::Pool(e.to_string()))
    }
}

/// Integer sums over a set of functional graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub maps: u64,
    pub components: u64,
    pub components_sq: u128,
    pub periodic: u64,
    pub periodic_sq: u128,
    /// `k_cycles[k]` = total number of `k`-cycles, for `1 <= k <= kmax`.
    pub k_cycles: Vec<u64>,
    pub k_cycles_sq: Vec<u128>,
    pub max_tail: u64,
}

impl Tally {
    pub fn new(kmax: usize) -> Self {
        Tally {
            k_cycles: vec![0; kmax + 1],
            k_cycles_sq: vec![0; kmax + 1],
            ..Default::default()
        }
    }

    pub fn kmax(&self) -> usize {
        self.k_cycles.len().saturating_sub(1)
    }

    pub fn record(&mut self, view: &ScanView<'_>) {
        let kmax = self.kmax();
        self.maps += 1;
        let c = view.components as u64;
        let p = view.periodic as u64;
        self.components += c;
        self.components_sq += (c as u128) * (c as u128);
        self.periodic += p;
        self.periodic_sq += (p as u128) * (p as u128);
        self.max_tail = self.max_tail.max(view.max_tail as u64);
        if kmax == 0 {
            return;
        }
        // per-graph counts are needed for the squares
        let mut local = [0u64; 64];
        let mut spill: BTreeMap<usize, u64> = BTreeMap::new();
        for &len in view.cycle_lengths {
            if len > kmax {
                continue;
            }
            if len < local.len() {
                local[len] += 1;
            } else {
                *spill.entry(len).or_insert(0) += 1;
            }
        }
        let touched = local
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(k, &n)| (k, n))
            .chain(spill);
        for (k, n) in touched {
            self.k_cycles[k] += n;
            self.k_cycles_sq[k] += (n as u128) * (n as u128);
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.maps += other.maps;
        self.components += other.components;
        self.components_sq += other.components_sq;
        self.periodic += other.periodic;
        self.periodic_sq += other.periodic_sq;
        self.max_tail = self.max_tail.max(other.max_tail);
        for (a, b) in self.k_cycles.iter_mut().zip(other.k_cycles) {
            *a += b;
        }
        for (a, b) in self.k_cycles_sq.iter_mut().zip(other.k_cycles_sq) {
            *a += b;
        }
        self
    }

    fn mean(&self, total: u64) -> Rational {
        if self.maps == 0 {
            return Rational::zero();
        }
        Rational::new(BigInt::from(total), BigInt::from(self.maps))
    }

    pub fn avg_components(&self) -> Rational {
        self.mean(self.components)
    }

    pub fn avg_periodic(&self) -> Rational {
        self.mean(self.periodic)
    }

    pub fn avg_k_cycles(&self) -> BTreeMap<usize, Rational> {
        (1..=self.kmax()).map(|k| (k, self.mean(self.k_cycles[k]))).collect()
    }

    /// Standard error of a sample mean from its sum and sum of squares.
    fn stderr(&self, sum: u64, sum_sq: u128) -> f64 {
        let n = self.maps as f64;
        if self.maps < 2 {
            return 0.0;
        }
        let mean = sum as f64 / n;
        let var = ((sum_sq as f64) - n * mean * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }

    pub fn stderr_components(&self) -> f64 {
        self.stderr(self.components, self.components_sq)
    }

    pub fn stderr_periodic(&self) -> f64 {
        self.stderr(self.periodic, self.periodic_sq)
    }

    pub fn stderr_k_cycles(&self) -> BTreeMap<usize, f64> {
        (1..=self.kmax())
            .map(|k| (k, self.stderr(self.k_cycles[k], self.k_cycles_sq[k])))
            .collect()
    }
}

/// Per-worker scratch reused across the maps of a block.
#[derive(Default)]
pub(crate) struct Scratch {
    pub(crate) coeffs: Vec<FqElem>,
    pub(crate) succ: Vec<u32>,
    pub(crate) scanner: CycleScanner,
}

/// Runs `visit` over `0..len` in fixed blocks on a pool of `cfg.jobs`
/// threads and merges the block tallies.
pub(crate) fn run_blocks<F>(cfg: &CensusConfig, len: u64, kmax: usize, visit: F) -> Result<Tally>
where
    F: Fn(u64, &mut Scratch, &mut Tally) -> Result<()> + Sync,
{
    let blocks = len.div_ceil(BLOCK_SIZE);
    let pool = cfg.pool()?;
    pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut scratch = Scratch::default();
                let mut tally = Tally::new(kmax);
                let end = ((b + 1) * BLOCK_SIZE).min(len);
                for i in b * BLOCK_SIZE..end {
                    visit(i, &mut scratch, &mut tally)?;
                }
                Ok(tally)
            })
            .try_reduce(|| Tally::new(kmax), |a, b| Ok(a.merge(b)))
    })
}

pub(crate) fn scan_into(scratch: &mut Scratch, tally: &mut Tally) -> Result<()> {
    let view = scratch.scanner.scan(&scratch.succ)?;
    tally.record(&view);
    Ok(())
}

/// Exhaustive tally over all polynomials of degree exactly / at most `d`.
pub fn poly_tally(ctx: &FieldCtx, d: usize, mode: DegreeMode, cfg: &CensusConfig) -> Result<Tally> {
    let space = PolySpace::new(ctx, d, mode);
    let q = ctx.order();
    cfg.check_budget(space.len(), q as u128)?;
    let kmax = cfg.kmax_for(q, Mode::Exhaustive);
    run_blocks(cfg, space.len() as u64, kmax, |i, s, t| {
        space.write(i, &mut s.coeffs);
        CoeffSlice(&s.coeffs).fill_successors(ctx, &mut s.succ);
        scan_into(s, t)
    })
}

/// Exhaustive tally over all rational maps of degree exactly / at most `d`.
pub fn rat_tally(ctx: &FieldCtx, d: usize, mode: DegreeMode, cfg: &CensusConfig) -> Result<Tally> {
    let space = RationalSpace::new(ctx, d, mode);
    let vertices = ctx.order() + 1;
    cfg.check_budget(space.count(ctx), vertices as u128)?;
    cfg.check_budget(space.raw_len(), vertices as u128)?;
    let kmax = cfg.kmax_for(vertices, Mode::Exhaustive);
    run_blocks(cfg, space.raw_len() as u64, kmax, |i, s, t| {
        match space.get(ctx, i) {
            Some(r) => {
                r.fill_successors(ctx, &mut s.succ);
                scan_into(s, t)
            }
            None => Ok(()),
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapFamily {
    Poly,
    #[serde(rename = "rat")]
    Rational,
}

impl MapFamily {
    fn report_family(self) -> Family {
        match self {
            MapFamily::Poly => Family::Poly,
            MapFamily::Rational => Family::Rational,
        }
    }

    pub fn vertex_count(self, ctx: &FieldCtx) -> usize {
        match self {
            MapFamily::Poly => ctx.order(),
            MapFamily::Rational => ctx.order() + 1,
        }
    }
}

/// How sampled maps are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleScheme {
    /// Independent uniform draws from the degree-exactly-`d` family.
    Uniform,
    /// Every map of the family exactly once; reproduces the exhaustive census.
    FullSupport,
}

/// Exact averages over all polynomials of degree exactly `d`, with the
/// closed forms and bounds attached.
pub fn poly_census(ctx: &FieldCtx, d: usize, cfg: &CensusConfig) -> Result<Report> {
    let tally = poly_tally(ctx, d, DegreeMode::Exactly, cfg)?;
    Ok(assemble(ctx, MapFamily::Poly, d, Mode::Exhaustive, &tally, None))
}

/// Exact averages over all rational maps of degree exactly `d` on the
/// projective line, with the bounds attached.
pub fn rat_census(ctx: &FieldCtx, d: usize, cfg: &CensusConfig) -> Result<Report> {
    let tally = rat_tally(ctx, d, DegreeMode::Exactly, cfg)?;
    Ok(assemble(ctx, MapFamily::Rational, d, Mode::Exhaustive, &tally, None))
}

pub fn census(ctx: &FieldCtx, family: MapFamily, d: usize, cfg: &CensusConfig) -> Result<Report> {
    match family {
        MapFamily::Poly => poly_census(ctx, d, cfg),
        MapFamily::Rational => rat_census(ctx, d, cfg),
    }
}

/// Sample of degree-exactly-`d` maps. Sample `i` draws from its own ChaCha
/// stream of `seed`, so the result depends only on `(seed, samples)`.
pub fn sampled_census(
    ctx: &FieldCtx,
    family: MapFamily,
    d: usize,
    samples: u64,
    seed: u64,
    scheme: SampleScheme,
    cfg: &CensusConfig,
) -> Result<Report> {
    if samples == 0 {
        return Err(Error::out_of_range("samples", "need at least one sample"));
    }
    let vertices = family.vertex_count(ctx);
    let (tally, samples) = match scheme {
        SampleScheme::FullSupport => {
            let full_cfg = CensusConfig {
                kmax: Some(cfg.kmax_for(vertices, Mode::Sampled)),
                ..cfg.clone()
            };
            let tally = match family {
                MapFamily::Poly => poly_tally(ctx, d, DegreeMode::Exactly, &full_cfg)?,
                MapFamily::Rational => rat_tally(ctx, d, DegreeMode::Exactly, &full_cfg)?,
            };
            let maps = tally.maps;
            (tally, maps)
        }
        SampleScheme::Uniform => {
            cfg.check_budget(samples as u128, vertices as u128)?;
            let kmax = cfg.kmax_for(vertices, Mode::Sampled);
            let sampler = MapSampler::new(ctx, family, d);
            let tally = run_blocks(cfg, samples, kmax, |i, s, t| {
                let mut rng = stream_rng(seed, i);
                sampler.fill(ctx, &mut rng, s);
                scan_into(s, t)
            })?;
            (tally, samples)
        }
    };
    let info = SamplingInfo {
        scheme: match scheme {
            SampleScheme::Uniform => "uniform".into(),
            SampleScheme::FullSupport => "full_support".into(),
        },
        samples,
        seed,
        stderr_components: tally.stderr_components(),
        stderr_periodic: tally.stderr_periodic(),
        stderr_k_cycles: tally.stderr_k_cycles(),
    };
    let exact = scheme == SampleScheme::FullSupport;
    let mut report = assemble(ctx, family, d, Mode::Sampled, &tally, Some((info, exact)));
    if scheme == SampleScheme::Uniform {
        report.notes.push(
            "sampling scheme: uniform over maps of degree exactly d (rational maps by rejection over (monic denominator, numerator) pairs)"
                .into(),
        );
    }
    Ok(report)
}

pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform sampler over maps of degree exactly `d`.
pub struct MapSampler {
    family: MapFamily,
    d: usize,
    q: u64,
    /// `q^e` for `0 <= e <= d`, saturating.
    powers: Vec<u128>,
    num_count: u128,
    raw_len: u128,
}

impl MapSampler {
    pub fn new(ctx: &FieldCtx, family: MapFamily, d: usize) -> Self {
        let q = ctx.q() as u64;
        let powers: Vec<u128> = (0..=d).map(|e| (q as u128).saturating_pow(e as u32)).collect();
        let den_count = powers.iter().fold(0u128, |a, &b| a.saturating_add(b));
        let num_count = (q as u128).saturating_pow(d as u32 + 1);
        MapSampler {
            family,
            d,
            q,
            powers,
            num_count,
            raw_len: den_count.saturating_mul(num_count).saturating_add(1),
        }
    }

    pub fn sample_poly(&self, rng: &mut impl Rng, out: &mut Vec<FqElem>) {
        out.clear();
        if self.d == 0 {
            out.push(FqElem::from_handle(rng.gen_range(0..self.q) as u32));
            return;
        }
        out.extend((0..self.d).map(|_| FqElem::from_handle(rng.gen_range(0..self.q) as u32)));
        out.push(FqElem::from_handle(rng.gen_range(1..self.q) as u32));
    }

    /// Rejection sampling over raw (monic denominator, numerator) pairs;
    /// every canonical map of degree `d` occupies exactly one raw slot.
    pub fn sample_rational(&self, ctx: &FieldCtx, rng: &mut impl Rng) -> RationalMap {
        loop {
            let raw = rng.gen_range(0..self.raw_len);
            if raw + 1 == self.raw_len {
                if self.d == 0 {
                    return RationalMap::constant_infinity();
                }
                continue;
            }
            let (mut den_idx, num_idx) = (raw / self.num_count, raw % self.num_count);
            let mut e = 0;
            while den_idx >= self.powers[e] {
                den_idx -= self.powers[e];
                e += 1;
            }
            let mut den = digits(den_idx, self.q, e);
            den.push(FqElem::ONE);
            let den = Poly::from_coeffs(den);
            let num = Poly::from_coeffs(digits(num_idx, self.q, self.d + 1));
            if num.degree().max(den.degree()) != self.d || num.gcd(ctx, &den) != Poly::one() {
                continue;
            }
            return RationalMap::new(ctx, &num, &den).expect("coprime pair");
        }
    }

    fn fill(&self, ctx: &FieldCtx, rng: &mut impl Rng, s: &mut Scratch) {
        match self.family {
            MapFamily::Poly => {
                self.sample_poly(rng, &mut s.coeffs);
                CoeffSlice(&s.coeffs).fill_successors(ctx, &mut s.succ);
            }
            MapFamily::Rational => {
                self.sample_rational(ctx, rng).fill_successors(ctx, &mut s.succ);
            }
        }
    }
}

fn digits(mut idx: u128, q: u64, len: usize) -> Vec<FqElem> {
    (0..len)
        .map(|_| {
            let d = (idx % q as u128) as u32;
            idx /= q as u128;
            FqElem::from_handle(d)
        })
        .collect()
}

/// Builds the report and its theory comparisons. `sampling` carries the
/// sampling summary and whether the averages are exact anyway.
fn assemble(
    ctx: &FieldCtx,
    family: MapFamily,
    d: usize,
    mode: Mode,
    tally: &Tally,
    sampling: Option<(SamplingInfo, bool)>,
) -> Report {
    let q = ctx.q() as u64;
    let du = d as u64;
    let kmax = tally.kmax();
    let avg_components = tally.avg_components();
    let avg_periodic = tally.avg_periodic();
    let avg_k = tally.avg_k_cycles();

    let stderr = sampling
        .as_ref()
        .filter(|(_, exact)| !exact)
        .map(|(info, _)| info.clone());
    let cmp = |name: &str,
               quantity: &str,
               k: Option<usize>,
               rel: Relation,
               theory_value: Rational,
               vacuous: bool|
     -> Comparison {
        let (observed, se) = match (quantity, k) {
            ("k_cycles", Some(k)) => (
                avg_k[&k].clone(),
                stderr.as_ref().map(|s| s.stderr_k_cycles[&k]),
            ),
            ("components", _) => (
                avg_components.clone(),
                stderr.as_ref().map(|s| s.stderr_components),
            ),
            _ => (avg_periodic.clone(), stderr.as_ref().map(|s| s.stderr_periodic)),
        };
        let c = match se {
            Some(se) => Comparison::sampled(name, quantity, rel, observed, se, theory_value, vacuous),
            None => Comparison::exact(name, quantity, rel, observed, theory_value, vacuous),
        };
        match k {
            Some(k) => c.with_param("k", k as u64),
            None => c,
        }
    };

    let mut theory_cmp = Vec::new();
    let mut notes = Vec::new();
    match family {
        MapFamily::Poly => {
            let kcap = if d == 0 { 1 } else { d.min(kmax) };
            for k in 1..=kcap.min(kmax) {
                let v = theory::poly_avg_k(q, du, k as u64).expect("k in closed-form range");
                theory_cmp.push(cmp("poly_avg_k", "k_cycles", Some(k), Relation::Eq, v, false));
            }
            let b = theory::poly_component_bounds(q, du);
            let rel = if b.lower_is_tight { Relation::Eq } else { Relation::Gt };
            theory_cmp.push(cmp("poly_component_lower", "components", None, rel, b.lower, b.lower_vacuous));
            theory_cmp.push(cmp("poly_component_upper", "components", None, Relation::Le, b.upper, false));
            let pl = theory::poly_periodic_lower(q, du);
            let rel = if pl.tight { Relation::Eq } else { Relation::Ge };
            let vacuous = pl.value.is_zero();
            theory_cmp.push(cmp("poly_periodic_lower", "periodic", None, rel, pl.value, vacuous));
            if d == 0 {
                notes.push(
                    "degree 0 includes all q constants (zero polynomial included); excluding zero leaves every average unchanged since each constant map has one component and one fixed point"
                        .into(),
                );
            }
        }
        MapFamily::Rational => {
            if mode == Mode::Exhaustive {
                let expected = theory::rat_count(q, du, DegreeMode::Exactly);
                theory_cmp.push(Comparison::exact(
                    "rat_count_exactly",
                    "map_count",
                    Relation::Eq,
                    int(tally.maps),
                    int(expected),
                    false,
                ));
            }
            for k in 1..=(d + 1).min(kmax) {
                let b = theory::rat_avg_k_bounds(q, du, k as u64).expect("k in range");
                if b.lower_applies {
                    theory_cmp.push(cmp(
                        "rat_avg_k_lower",
                        "k_cycles",
                        Some(k),
                        Relation::lower(b.strict_lower),
                        b.lower.clone(),
                        b.lower_vacuous,
                    ));
                }
                theory_cmp.push(cmp(
                    "rat_avg_k_upper",
                    "k_cycles",
                    Some(k),
                    Relation::upper(b.strict_upper),
                    b.upper,
                    false,
                ));
            }
            let b = theory::rat_component_bounds(q, du);
            theory_cmp.push(cmp(
                "rat_component_lower",
                "components",
                None,
                Relation::lower(b.strict_lower),
                b.lower.clone(),
                b.lower_vacuous,
            ));
            if let Some(extra) = b.extra_lower.clone() {
                let vacuous = extra <= Rational::zero();
                theory_cmp.push(cmp(
                    "rat_component_lower_sharp",
                    "components",
                    None,
                    Relation::Gt,
                    extra,
                    vacuous,
                ));
            }
            theory_cmp.push(cmp("rat_component_upper", "components", None, Relation::Le, b.upper, false));
            let pl = theory::rat_periodic_lower(q, du);
            let vacuous = pl.value <= Rational::zero();
            theory_cmp.push(cmp("rat_periodic_lower", "periodic", None, Relation::Ge, pl.value, vacuous));
            if d == 0 {
                notes.push(
                    "degree 0 covers the q + 1 constant maps, the constant infinity included".into(),
                );
            }
        }
    }

    let mut diagnostics = BTreeMap::new();
    match family {
        MapFamily::Poly => {
            let b = theory::poly_component_bounds(q, du);
            if let Some(m) = b.minorant {
                diagnostics.insert("component_minorant".into(), m);
            }
            diagnostics.insert("periodic_minorant".into(), theory::poly_periodic_lower(q, du).minorant);
        }
        MapFamily::Rational => {
            let b = theory::rat_component_bounds(q, du);
            if let Some(m) = b.minorant {
                diagnostics.insert("component_minorant".into(), m);
            }
            diagnostics.insert("periodic_minorant".into(), theory::rat_periodic_lower(q, du).minorant);
        }
    }
    let vertices = family.vertex_count(ctx);
    if vertices <= EXACT_RANDOM_LIMIT {
        let rm = theory::random_map_stats(vertices as u64);
        diagnostics.insert("random_map_components".into(), theory::to_f64(&rm.components_exact));
        diagnostics.insert("random_map_periodic".into(), theory::to_f64(&rm.periodic_exact));
    }

    Report {
        schema: SCHEMA_VERSION,
        family: family.report_family(),
        field: Some(ctx.desc()),
        q,
        d: Some(du),
        params: BTreeMap::new(),
        degree_mode: Some(DegreeMode::Exactly),
        mode,
        vertex_count: vertices as u64,
        map_count: tally.maps,
        kmax,
        avg_components,
        avg_periodic,
        avg_k_cycles: avg_k,
        max_tail: tally.max_tail,
        sampling: sampling.map(|(info, _)| info),
        theory: theory_cmp,
        diagnostics,
        notes,
    }
}

/// Number of polynomials of degree at most `d` that map `cycle[i]` to
/// `cycle[i + 1]` cyclically, by brute force.
pub fn count_cycle_givers(ctx: &FieldCtx, d: usize, cycle: &[FqElem]) -> Result<u64> {
    if cycle.is_empty() {
        return Err(Error::out_of_range("cycle", "need at least one element"));
    }
    if cycle.len() > ctx.order() {
        return Err(Error::TooManyPoints {
            points: cycle.len(),
            q: ctx.q() as u64,
        });
    }
    for x in cycle {
        ctx.elem(x.handle())?;
    }
    check_distinct(cycle)?;
    let space = PolySpace::new(ctx, d, DegreeMode::AtMost);
    let mut buf = Vec::new();
    let mut count = 0;
    for i in 0..space.len() as u64 {
        space.write(i, &mut buf);
        let f = CoeffSlice(&buf);
        let hit = (0..cycle.len())
            .all(|j| f.image(ctx, cycle[j].index()) == cycle[(j + 1) % cycle.len()].index());
        count += hit as u64;
    }
    Ok(count)
}

fn check_distinct(xs: &[FqElem]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for x in xs {
        if !seen.insert(x.handle()) {
            return Err(Error::DuplicateElement(x.handle()));
        }
    }
    Ok(())
}

/// Brute-force size of `S(G0, G1)`: monic `f` of degree `deg(G0 G1)` with
/// `G0 | f` and `f(beta_i) = gamma_i * (G0 G1)(beta_i)` for every `i`.
#[allow(non_snake_case)]
pub fn enumerate_S(
    ctx: &FieldCtx,
    g0: &Poly,
    g1: &Poly,
    betas: &[FqElem],
    gammas: &[FqElem],
) -> Result<u64> {
    validate_prov(ctx, g0, g1, betas, gammas)?;
    let g = g0.mul(ctx, g1);
    let targets: Vec<FqElem> = betas
        .iter()
        .zip(gammas)
        .map(|(&b, &c)| ctx.mul(c, g.eval(ctx, b)))
        .collect();
    let mut count = 0;
    for f in crate::fmaps::monic_polys(ctx, g.degree()) {
        let ok = betas
            .iter()
            .zip(&targets)
            .all(|(&b, &t)| f.eval(ctx, b) == t);
        if ok && g0.divides(ctx, &f) {
            count += 1;
        }
    }
    Ok(count)
}

fn validate_prov(
    ctx: &FieldCtx,
    g0: &Poly,
    g1: &Poly,
    betas: &[FqElem],
    gammas: &[FqElem],
) -> Result<()> {
    g0.validate(ctx)?;
    g1.validate(ctx)?;
    if betas.is_empty() || betas.len() != gammas.len() {
        return Err(Error::out_of_range(
            "prov instance",
            format!("need m >= 1 betas and as many gammas; got {} and {}", betas.len(), gammas.len()),
        ));
    }
    for x in betas.iter().chain(gammas) {
        ctx.elem(x.handle())?;
    }
    check_distinct(betas)?;
    if !g0.is_monic() || !g1.is_monic() {
        return Err(Error::NotMonic);
    }
    if g0.degree() > 0 && !g0.is_irreducible(ctx) {
        return Err(Error::ReducibleG0);
    }
    Ok(())
}

/// What the counting lemma predicts for `|S(G0, G1)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvCase {
    AtMostOne,
    Exactly(u64),
}

impl ProvCase {
    pub fn admits(self, count: u64) -> bool {
        match self {
            ProvCase::AtMostOne => count <= 1,
            ProvCase::Exactly(v) => count == v,
        }
    }
}

pub fn prov_case(ctx: &FieldCtx, g0: &Poly, g1: &Poly, betas: &[FqElem]) -> ProvCase {
    let m = betas.len();
    let j1 = g1.degree();
    let j = g0.degree() + j1;
    let q = ctx.q() as u64;
    if j < m {
        return ProvCase::AtMostOne;
    }
    let g0_special =
        g0.degree() == 0 || betas.iter().any(|&b| *g0 == Poly::monic_linear(ctx, b));
    if g0_special {
        ProvCase::Exactly(q.pow((j - m) as u32))
    } else if j1 < m {
        ProvCase::AtMostOne
    } else {
        ProvCase::Exactly(q.pow((j1 - m) as u32))
    }
}

/// Summary of a rho-length experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoSummary {
    pub schema: u32,
    pub family: MapFamily,
    pub field: FieldDesc,
    pub q: u64,
    pub d: u64,
    pub samples: u64,
    pub seed: u64,
    pub mean_tail: f64,
    pub mean_cycle: f64,
    pub mean_rho: f64,
    pub bin_width: u64,
    /// Bin start -> number of samples with rho in `[start, start + width)`.
    pub histogram: BTreeMap<u64, u64>,
    pub band: [f64; 2],
    pub status: Status,
}

impl RhoSummary {
    pub fn in_band(&self) -> bool {
        self.band[0] <= self.mean_rho && self.mean_rho <= self.band[1]
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("rho summary serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,q,d,bin_start,bin_width,count\n");
        let fam = match self.family {
            MapFamily::Poly => "poly",
            MapFamily::Rational => "rat",
        };
        for (start, count) in &self.histogram {
            out.push_str(&format!("{fam},{},{},{start},{},{count}\n", self.q, self.d, self.bin_width));
        }
        out
    }
}

/// Samples maps of degree exactly `d` and a start point each, and measures
/// tail and cycle length of the orbit with Brent's method, evaluating the map
/// on the fly. The mean rho length is checked against `[0.5, 3] * sqrt(N)`
/// for `N` vertices; outside the band the status is `warn`, or `fail` when
/// `strict`.
pub fn rho_experiment(
    ctx: &FieldCtx,
    d: usize,
    family: MapFamily,
    samples: u64,
    seed: u64,
    strict: bool,
    cfg: &CensusConfig,
) -> Result<RhoSummary> {
    if samples == 0 {
        return Err(Error::out_of_range("samples", "need at least one sample"));
    }
    let vertices = family.vertex_count(ctx) as u64;
    let sampler = MapSampler::new(ctx, family, d);
    let pool = cfg.pool()?;
    let runs: Vec<(u64, u64)> = pool.install(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                match family {
                    MapFamily::Poly => {
                        let mut coeffs = Vec::new();
                        sampler.sample_poly(&mut rng, &mut coeffs);
                        let start = FqElem::from_handle(rng.gen_range(0..vertices) as u32);
                        let r = brent(start, |x| crate::fmaps::eval_coeffs(ctx, &coeffs, x));
                        (r.tail, r.cycle)
                    }
                    MapFamily::Rational => {
                        let f = sampler.sample_rational(ctx, &mut rng);
                        let start = ProjPoint::from_index(ctx, rng.gen_range(0..vertices) as usize);
                        let r = brent(start, |x| f.eval(ctx, x));
                        (r.tail, r.cycle)
                    }
                }
            })
            .collect()
    });
    let n = samples as f64;
    let mean_tail = runs.iter().map(|r| r.0 as f64).sum::<f64>() / n;
    let mean_cycle = runs.iter().map(|r| r.1 as f64).sum::<f64>() / n;
    let bin_width = (isqrt(vertices) / 4).max(1);
    let mut histogram = BTreeMap::new();
    for (t, c) in &runs {
        *histogram.entry((t + c) / bin_width * bin_width).or_insert(0) += 1;
    }
    let root = (vertices as f64).sqrt();
    let mut summary = RhoSummary {
        schema: SCHEMA_VERSION,
        family,
        field: ctx.desc(),
        q: ctx.q() as u64,
        d: d as u64,
        samples,
        seed,
        mean_tail,
        mean_cycle,
        mean_rho: mean_tail + mean_cycle,
        bin_width,
        histogram,
        band: [0.5 * root, 3.0 * root],
        status: Status::Pass,
    };
    if !summary.in_band() {
        summary.status = if strict { Status::Fail } else { Status::Warn };
    }
    Ok(summary)
}
