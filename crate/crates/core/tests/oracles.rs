//! Census results checked against a naive implementation over prime fields:
//! plain modular arithmetic, iterate-until-repeat periods, and a separate
//! gcd for canonical rational maps.

use std::collections::{BTreeMap, HashSet};

use fqdyn::census::{poly_census, poly_tally, rat_census, rat_tally, CensusConfig};
use fqdyn::fmaps::DegreeMode;
use fqdyn::theory::{int, ratio, Rational};
use fqdyn::make_field;

/// Minimal period of every periodic point, by iterating `f` from `x` for
/// `n` steps and checking for a return.
fn periods(succ: &[usize]) -> Vec<Option<usize>> {
    let n = succ.len();
    (0..n)
        .map(|x| {
            let mut y = succ[x];
            for t in 1..=n {
                if y == x {
                    return Some(t);
                }
                y = succ[y];
            }
            None
        })
        .collect()
}

/// (components, periodic points, k -> number of k-cycles)
fn naive_stats(succ: &[usize]) -> (u64, u64, BTreeMap<usize, u64>) {
    let mut cycles = BTreeMap::new();
    let mut periodic = 0;
    for k in periods(succ).into_iter().flatten() {
        periodic += 1;
        *cycles.entry(k).or_insert(0u64) += 1;
    }
    for (k, v) in cycles.iter_mut() {
        assert_eq!(*v % *k as u64, 0);
        *v /= *k as u64;
    }
    (cycles.values().sum(), periodic, cycles)
}

fn poly_succ(p: u64, coeffs: &[u64]) -> Vec<usize> {
    (0..p)
        .map(|x| coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) as usize)
        .collect()
}

fn poly_families(p: u64, d: usize) -> Vec<Vec<u64>> {
    let total = p.pow(d as u32 + 1);
    (0..total)
        .map(|mut i| {
            (0..=d)
                .map(|_| {
                    let c = i % p;
                    i /= p;
                    c
                })
                .collect::<Vec<_>>()
        })
        .filter(|c| d == 0 || c[d] != 0)
        .collect()
}

#[test]
fn poly_census_matches_naive() {
    for p in [2u64, 3, 5, 7] {
        for d in 0..=3usize {
            if p == 7 && d == 3 {
                continue;
            }
            let maps = poly_families(p, d);
            let mut comp = 0;
            let mut per = 0;
            let mut k_total: BTreeMap<usize, u64> = BTreeMap::new();
            for c in &maps {
                let (a, b, ks) = naive_stats(&poly_succ(p, c));
                comp += a;
                per += b;
                for (k, v) in ks {
                    *k_total.entry(k).or_insert(0) += v;
                }
            }
            let n = maps.len() as u64;
            let ctx = make_field(p as u32, 1, None).unwrap();
            let r = poly_census(&ctx, d, &CensusConfig::default()).unwrap();
            assert_eq!(r.map_count, n);
            assert_eq!(r.avg_components, ratio(comp, n), "p={p} d={d}");
            assert_eq!(r.avg_periodic, ratio(per, n));
            for (k, v) in &r.avg_k_cycles {
                assert_eq!(*v, ratio(*k_total.get(k).unwrap_or(&0), n), "p={p} d={d} k={k}");
            }
        }
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|b| a * b % p == 1).unwrap()
}

/// Remainder of `a` modulo `b` over F_p, coefficient vectors low-first.
fn rem_mod(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() * lead_inv % p;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] - f * bc).rem_euclid(p);
        }
        r = trim(r);
    }
    r
}

fn gcd_degree(a: &[i64], b: &[i64], p: i64) -> usize {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem_mod(&x, &y, p);
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

fn eval_mod(c: &[i64], x: i64, p: i64) -> i64 {
    c.iter().rev().fold(0, |acc, &k| (acc * x + k) % p)
}

/// All canonical rational maps of degree exactly `d` over F_p as successor
/// arrays on `0..=p` (infinity = p): monic denominators, coprime pairs.
fn rational_graphs(p: i64, d: usize) -> Vec<Vec<usize>> {
    let all: Vec<Vec<i64>> = (0..(p as u64).pow(d as u32 + 1))
        .map(|mut i| {
            (0..=d)
                .map(|_| {
                    let c = (i % p as u64) as i64;
                    i /= p as u64;
                    c
                })
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for den in &all {
        let den_t = trim(den.clone());
        if den_t.is_empty() || *den_t.last().unwrap() != 1 {
            continue;
        }
        for num in &all {
            let num_t = trim(num.clone());
            let deg = num_t.len().saturating_sub(1).max(den_t.len() - 1);
            if deg != d || gcd_degree(&num_t, &den_t, p) != 0 {
                continue;
            }
            if !seen.insert((num_t.clone(), den_t.clone())) {
                continue;
            }
            let dn = num_t.len() as i64 - 1;
            let dd = den_t.len() as i64 - 1;
            let mut succ: Vec<usize> = (0..p)
                .map(|x| {
                    let b = eval_mod(&den_t, x, p);
                    if b == 0 {
                        p as usize
                    } else {
                        (eval_mod(&num_t, x, p) * inv_mod(b, p) % p) as usize
                    }
                })
                .collect();
            let at_inf = if dn > dd {
                p as usize
            } else if dn < dd || num_t.is_empty() {
                0
            } else {
                *num_t.last().unwrap() as usize
            };
            succ.push(at_inf);
            out.push(succ);
        }
    }
    if d == 0 {
        out.push(vec![p as usize; p as usize + 1]);
    }
    out
}

#[test]
fn rational_census_matches_naive() {
    for (p, dmax) in [(2i64, 2usize), (3, 2), (5, 1)] {
        for d in 0..=dmax {
            let graphs = rational_graphs(p, d);
            let ctx = make_field(p as u32, 1, None).unwrap();
            let r = rat_census(&ctx, d, &CensusConfig::default()).unwrap();
            assert_eq!(r.map_count, graphs.len() as u64, "p={p} d={d}");
            let (mut comp, mut per) = (0, 0);
            for g in &graphs {
                let (a, b, _) = naive_stats(g);
                comp += a;
                per += b;
            }
            let n = graphs.len() as u64;
            assert_eq!(r.avg_components, ratio(comp, n), "p={p} d={d}");
            assert_eq!(r.avg_periodic, ratio(per, n), "p={p} d={d}");
        }
    }
}

#[test]
fn at_most_tallies_match_naive_totals() {
    let cfg = CensusConfig::default();
    for p in [3u64, 5] {
        let ctx = make_field(p as u32, 1, None).unwrap();
        let t = poly_tally(&ctx, 2, DegreeMode::AtMost, &cfg).unwrap();
        let mut two_cycles = 0;
        for c in poly_families(p, 2).into_iter().chain(poly_families(p, 1)).chain(poly_families(p, 0)) {
            two_cycles += naive_stats(&poly_succ(p, &c)).2.get(&2).copied().unwrap_or(0);
        }
        // degree-0 family is all constants, degree 1 and 2 have nonzero leads
        assert_eq!(t.k_cycles[2], two_cycles);
        assert_eq!(t.maps, p.pow(3));
    }
    let ctx = make_field(3, 1, None).unwrap();
    let t = rat_tally(&ctx, 1, DegreeMode::AtMost, &cfg).unwrap();
    let total: Rational = (0..=1)
        .flat_map(|d| rational_graphs(3, d))
        .map(|g| int(naive_stats(&g).2.get(&1).copied().unwrap_or(0)))
        .sum();
    assert_eq!(int(t.k_cycles[1]), total);
}

#[test]
fn coprime_probability_matches_pair_count() {
    for (p, dmax) in [(2i64, 3usize), (3, 2), (5, 1)] {
        for d in 0..=dmax {
            let polys: Vec<Vec<i64>> = (0..(p as usize).pow(d as u32 + 1))
                .map(|mut i| {
                    (0..=d)
                        .map(|_| {
                            let c = (i % p as usize) as i64;
                            i /= p as usize;
                            c
                        })
                        .collect()
                })
                .collect();
            let coprime = polys
                .iter()
                .flat_map(|a| polys.iter().map(move |b| (a, b)))
                .filter(|(a, b)| a.iter().chain(b.iter()).any(|&c| c != 0) && gcd_degree(a, b, p) == 0)
                .count();
            let total = polys.len() * polys.len();
            assert_eq!(
                fqdyn::theory::coprime_prob(p as u64, d as u64),
                ratio(coprime as u64, total as u64),
                "p={p} d={d}"
            );
        }
    }
}
