//! Verification harnesses: brute-force counts checked case by case against
//! the closed forms and bounds of [`theory`].

use rand::Rng;

use crate::census::{count_cycle_givers, enumerate_S, poly_tally, prov_case, rat_census, rat_tally, stream_rng, CensusConfig, ProvCase};
use crate::error::Result;
use crate::ffield::{make_field, FieldCtx, FqElem};
use crate::fmaps::{DegreeMode, Poly, RationalSpace};
use crate::report::{Comparison, Relation, Verification};
use crate::theory::{self, int, Rational};

fn total(tally: &crate::census::Tally, k: usize) -> u64 {
    tally.k_cycles.get(k).copied().unwrap_or(0)
}

/// Cycle totals over polynomials of degree at most `d`, the cycle-giver
/// counts behind them, and the per-`k` averages over degree exactly `d`,
/// for every `d <= dmax`.
pub fn lemma_polys(ctx: &FieldCtx, dmax: usize, cfg: &CensusConfig) -> Result<Verification> {
    let q = ctx.q() as u64;
    let mut cases = Vec::new();
    for d in 0..=dmax {
        let du = d as u64;
        let at_most = poly_tally(ctx, d, DegreeMode::AtMost, cfg)?;
        for k in 1..=d + 1 {
            let expected = theory::poly_cycle_sum(q, du, k as u64)?;
            cases.push(
                Comparison::exact(
                    "poly_cycle_sum",
                    "k_cycle_total",
                    Relation::Eq,
                    int(total(&at_most, k)),
                    Rational::from_integer(expected),
                    false,
                )
                .with_param("d", du)
                .with_param("k", k as u64),
            );
            if k <= ctx.order() {
                let cycle: Vec<FqElem> = ctx.elements().take(k).collect();
                let count = count_cycle_givers(ctx, d, &cycle)?;
                cases.push(
                    Comparison::exact(
                        "cycle_givers",
                        "polynomial_count",
                        Relation::Eq,
                        int(count),
                        int(q.pow((d + 1 - k) as u32)),
                        false,
                    )
                    .with_param("d", du)
                    .with_param("k", k as u64),
                );
            }
        }
        let exactly = poly_tally(ctx, d, DegreeMode::Exactly, cfg)?;
        let ks = if d == 0 { 1..=1 } else { 1..=d };
        for k in ks {
            let expected = theory::poly_avg_k(q, du, k as u64)?;
            let observed = Rational::new(total(&exactly, k).into(), exactly.maps.into());
            cases.push(
                Comparison::exact("poly_avg_k", "k_cycles", Relation::Eq, observed, expected, false)
                    .with_param("d", du)
                    .with_param("k", k as u64),
            );
        }
    }
    Ok(Verification::new("lemma-polys", Some(ctx.desc()), cases))
}

/// Enumerated rational-map counts against the closed forms.
pub fn rat_count(ctx: &FieldCtx, dmax: usize, cfg: &CensusConfig) -> Result<Verification> {
    let q = ctx.q() as u64;
    let mut cases = Vec::new();
    for d in 0..=dmax {
        for (mode, name) in [(DegreeMode::AtMost, "rat_count_at_most"), (DegreeMode::Exactly, "rat_count_exactly")] {
            let space = RationalSpace::new(ctx, d, mode);
            cfg.check_budget(space.raw_len(), 1)?;
            let count = space.iter(ctx).count() as u64;
            cases.push(
                Comparison::exact(
                    name,
                    "map_count",
                    Relation::Eq,
                    int(count),
                    Rational::from_integer(theory::rat_count(q, d as u64, mode)),
                    false,
                )
                .with_param("d", d as u64),
            );
        }
    }
    Ok(Verification::new("rat-count", Some(ctx.desc()), cases))
}

/// One random instance of the constrained-multiple count.
#[derive(Clone, Debug)]
pub struct ProvInstance {
    pub g0: Poly,
    pub g1: Poly,
    pub betas: Vec<FqElem>,
    pub gammas: Vec<FqElem>,
}

fn random_monic(ctx: &FieldCtx, rng: &mut impl Rng, degree: usize) -> Poly {
    let q = ctx.q();
    let mut coeffs: Vec<FqElem> = (0..degree).map(|_| FqElem::from_handle(rng.gen_range(0..q))).collect();
    coeffs.push(FqElem::ONE);
    Poly::from_coeffs(coeffs)
}

/// Deterministic instance generator: `m <= min(3, q)` distinct betas, `G0`
/// drawn from `1`, some `x - beta_i`, or a monic irreducible of degree 1 or 2,
/// and `G1` monic with `deg(G0 G1) <= max_degree`.
pub fn prov_instance(ctx: &FieldCtx, rng: &mut impl Rng, max_degree: usize) -> ProvInstance {
    let q = ctx.order();
    let m = rng.gen_range(1..=q.min(3));
    let betas: Vec<FqElem> = rand::seq::index::sample(rng, q, m)
        .into_iter()
        .map(|h| FqElem::from_handle(h as u32))
        .collect();
    let gammas: Vec<FqElem> = (0..m).map(|_| FqElem::from_handle(rng.gen_range(0..q as u32))).collect();
    let g0 = match rng.gen_range(0..3) {
        0 => Poly::one(),
        1 => Poly::monic_linear(ctx, betas[rng.gen_range(0..m)]),
        _ => {
            let degree = rng.gen_range(1..=2);
            loop {
                let g = random_monic(ctx, rng, degree);
                if g.is_irreducible(ctx) {
                    break g;
                }
            }
        }
    };
    let j1 = rng.gen_range(0..=max_degree - g0.degree());
    let g1 = random_monic(ctx, rng, j1);
    ProvInstance { g0, g1, betas, gammas }
}

/// Brute-force `|S(G0, G1)|` over `instances` generated instances cycling
/// through `q` in {2, 3, 5}, each checked against its predicted case.
pub fn prov(instances: usize, seed: u64) -> Result<Verification> {
    let fields = [make_field(2, 1, None)?, make_field(3, 1, None)?, make_field(5, 1, None)?];
    let mut cases = Vec::with_capacity(instances);
    for i in 0..instances {
        let ctx = &fields[i % fields.len()];
        let mut rng = stream_rng(seed, i as u64);
        let inst = prov_instance(ctx, &mut rng, 5);
        let count = enumerate_S(ctx, &inst.g0, &inst.g1, &inst.betas, &inst.gammas)?;
        let predicted = prov_case(ctx, &inst.g0, &inst.g1, &inst.betas);
        let (name, relation, theory_value) = match predicted {
            ProvCase::AtMostOne => ("prov_at_most_one", Relation::Le, 1),
            ProvCase::Exactly(v) => ("prov_exact", Relation::Eq, v),
        };
        cases.push(
            Comparison::exact(name, "s_count", relation, int(count), int(theory_value), false)
                .with_param("instance", i as u64)
                .with_param("q", ctx.q() as u64)
                .with_param("m", inst.betas.len() as u64)
                .with_param("j0", inst.g0.degree() as u64)
                .with_param("j1", inst.g1.degree() as u64),
        );
    }
    Ok(Verification::new("prov", None, cases))
}

/// Strict sandwich on rational-map cycle totals over degree at most `d`, and
/// the average bounds over degree exactly `d`, for `1 <= d <= dmax`.
pub fn cycle_bounds(ctx: &FieldCtx, dmax: usize, cfg: &CensusConfig) -> Result<Verification> {
    let q = ctx.q() as u64;
    let mut cases = Vec::new();
    for d in 1..=dmax {
        let du = d as u64;
        let at_most = rat_tally(ctx, d, DegreeMode::AtMost, cfg)?;
        for k in 1..=d + 1 {
            let b = theory::rat_k_cycle_total_bounds(q, du, k as u64)?;
            let observed = int(total(&at_most, k));
            if q > k as u64 + 1 {
                cases.push(
                    Comparison::exact("rat_cycle_total_lower", "k_cycle_total", Relation::Gt, observed.clone(), b.lower, false)
                        .with_param("d", du)
                        .with_param("k", k as u64),
                );
            }
            cases.push(
                Comparison::exact("rat_cycle_total_upper", "k_cycle_total", Relation::Lt, observed, b.upper, false)
                    .with_param("d", du)
                    .with_param("k", k as u64),
            );
        }
        let report = rat_census(ctx, d, cfg)?;
        cases.extend(
            report
                .theory
                .into_iter()
                .filter(|c| c.quantity != "map_count")
                .map(|c| c.with_param("d", du)),
        );
    }
    Ok(Verification::new("cycle-bounds", Some(ctx.desc()), cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn cfg() -> CensusConfig {
        CensusConfig::default().with_jobs(2)
    }

    #[test]
    fn lemma_polys_small_fields() {
        for (p, n) in [(2, 1), (3, 1), (2, 2)] {
            let ctx = make_field(p, n, None).unwrap();
            let v = lemma_polys(&ctx, 3, &cfg()).unwrap();
            assert!(v.passed(), "{:?}", v.failures());
        }
    }

    #[test]
    fn rat_count_small_fields() {
        let ctx = make_field(3, 1, None).unwrap();
        let v = rat_count(&ctx, 2, &cfg()).unwrap();
        assert!(v.passed(), "{:?}", v.failures());
        assert_eq!(v.cases.len(), 6);
    }

    #[test]
    fn prov_cases_hold() {
        let v = prov(60, 7).unwrap();
        assert!(v.passed(), "{:?}", v.failures());
        assert!(v.cases.iter().any(|c| c.name == "prov_exact"));
        assert!(v.cases.iter().any(|c| c.name == "prov_at_most_one"));
    }

    #[test]
    fn cycle_bounds_q5() {
        let ctx = make_field(5, 1, None).unwrap();
        let v = cycle_bounds(&ctx, 1, &cfg()).unwrap();
        assert!(v.passed(), "{:?}", v.failures());
        assert_ne!(v.status, Status::Fail);
    }
}
