//! Functional graphs and their cycle structure.
//!
//! Every component of a functional graph contains exactly one cycle, so the
//! cycle census counts components twice: once by path-marking (cycles) and
//! once by union-find over the edges. A disagreement is a bug, reported as
//! [`Error::CycleComponentMismatch`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::fmaps::SelfMap;

/// Successor array: `succ[v]` is the image of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionalGraph {
    succ: Vec<u32>,
}

impl FunctionalGraph {
    pub fn from_succ(succ: Vec<u32>) -> Result<Self> {
        let n = succ.len();
        if let Some(&bad) = succ.iter().find(|&&s| s as usize >= n) {
            return Err(Error::out_of_range(
                "successor",
                format!("{bad} outside 0..{n}"),
            ));
        }
        Ok(FunctionalGraph { succ })
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn succ(&self) -> &[u32] {
        &self.succ
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.succ[v] as usize
    }

    pub fn into_succ(self) -> Vec<u32> {
        self.succ
    }
}

/// Graph of a polynomial on `F_q` (size `q`) or a rational map on
/// `P^1(F_q)` (size `q + 1`, infinity last).
pub fn build_graph<M: SelfMap + ?Sized>(ctx: &FieldCtx, map: &M) -> FunctionalGraph {
    let mut succ = Vec::with_capacity(map.vertex_count(ctx));
    map.fill_successors(ctx, &mut succ);
    FunctionalGraph { succ }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStats {
    #[serde(rename = "components")]
    pub component_count: usize,
    pub cycle_lengths: Vec<usize>,
    #[serde(rename = "periodic")]
    pub periodic_count: usize,
    #[serde(rename = "k_cycles")]
    pub k_cycle_counts: BTreeMap<usize, usize>,
    pub max_tail: usize,
}

pub fn cycle_census(g: &FunctionalGraph) -> Result<CycleStats> {
    let mut scanner = CycleScanner::default();
    let view = scanner.scan(g.succ())?;
    let mut cycle_lengths = view.cycle_lengths.to_vec();
    cycle_lengths.sort_unstable();
    let mut k_cycle_counts = BTreeMap::new();
    for &len in &cycle_lengths {
        *k_cycle_counts.entry(len).or_insert(0) += 1;
    }
    Ok(CycleStats {
        component_count: view.components,
        cycle_lengths,
        periodic_count: view.periodic,
        k_cycle_counts,
        max_tail: view.max_tail,
    })
}

const UNVISITED: u8 = 0;
const ON_PATH: u8 = 1;
const DONE: u8 = 2;

/// Reusable scratch space for repeated cycle scans of graphs up to any size.
#[derive(Debug, Default)]
pub struct CycleScanner {
    state: Vec<u8>,
    tail: Vec<u32>,
    path: Vec<u32>,
    parent: Vec<u32>,
    cycles: Vec<usize>,
}

#[derive(Debug)]
pub struct ScanView<'a> {
    /// Cycle lengths in discovery order.
    pub cycle_lengths: &'a [usize],
    pub periodic: usize,
    pub components: usize,
    pub max_tail: usize,
}

impl CycleScanner {
    pub fn scan(&mut self, succ: &[u32]) -> Result<ScanView<'_>> {
        let n = succ.len();
        self.state.clear();
        self.state.resize(n, UNVISITED);
        self.tail.clear();
        self.tail.resize(n, 0);
        self.cycles.clear();
        let mut periodic = 0;
        let mut max_tail = 0;

        for start in 0..n {
            if self.state[start] != UNVISITED {
                continue;
            }
            self.path.clear();
            let mut v = start;
            while self.state[v] == UNVISITED {
                self.state[v] = ON_PATH;
                self.path.push(v as u32);
                v = succ[v] as usize;
            }
            // Tail length of `v`, the first vertex not newly reached.
            let mut t = if self.state[v] == ON_PATH {
                let mut len = 0;
                loop {
                    let u = self.path.pop().expect("cycle vertex on path") as usize;
                    self.state[u] = DONE;
                    self.tail[u] = 0;
                    len += 1;
                    if u == v {
                        break;
                    }
                }
                self.cycles.push(len);
                periodic += len;
                0
            } else {
                self.tail[v]
            };
            while let Some(u) = self.path.pop() {
                t += 1;
                self.state[u as usize] = DONE;
                self.tail[u as usize] = t;
            }
            max_tail = max_tail.max(t as usize);
        }

        let components = self.count_components(succ);
        if components != self.cycles.len() {
            return Err(Error::CycleComponentMismatch {
                cycles: self.cycles.len(),
                components,
            });
        }
        Ok(ScanView {
            cycle_lengths: &self.cycles,
            periodic,
            components,
            max_tail,
        })
    }

    fn count_components(&mut self, succ: &[u32]) -> usize {
        let n = succ.len();
        self.parent.clear();
        self.parent.extend(0..n as u32);
        let mut components = n;
        for (v, &w) in succ.iter().enumerate() {
            let (a, b) = (find(&mut self.parent, v as u32), find(&mut self.parent, w));
            if a != b {
                // union by index keeps the result independent of edge order
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                self.parent[hi as usize] = lo;
                components -= 1;
            }
        }
        components
    }
}

fn find(parent: &mut [u32], mut v: u32) -> u32 {
    while parent[v as usize] != v {
        let gp = parent[parent[v as usize] as usize];
        parent[v as usize] = gp;
        v = gp;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoLength {
    pub tail: u64,
    pub cycle: u64,
}

impl RhoLength {
    pub fn rho(&self) -> u64 {
        self.tail + self.cycle
    }
}

/// Tail and cycle length of the orbit of `start`, found with Brent's method
/// on the successor array.
pub fn rho_length(g: &FunctionalGraph, start: usize) -> Result<RhoLength> {
    if start >= g.size() {
        return Err(Error::out_of_range(
            "start vertex",
            format!("{start} outside 0..{}", g.size()),
        ));
    }
    Ok(brent(start as u32, |v| g.succ[v as usize]))
}

/// Brent's cycle detection on an arbitrary iteration, without materializing
/// the graph.
pub fn brent<T, F>(start: T, mut f: F) -> RhoLength
where
    T: Copy + Eq,
    F: FnMut(T) -> T,
{
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start;
    let mut hare = f(start);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
    }
    let mut tortoise = start;
    let mut hare = start;
    for _ in 0..lam {
        hare = f(hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(hare);
        mu += 1;
    }
    RhoLength {
        tail: mu,
        cycle: lam,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::fmaps::{Poly, RationalMap};

    fn graph(succ: &[u32]) -> FunctionalGraph {
        FunctionalGraph::from_succ(succ.to_vec()).unwrap()
    }

    #[test]
    fn build_examples() {
        let f5 = make_field(5, 1, None).unwrap();
        let sq = Poly::from_handles(&[0, 0, 1]);
        assert_eq!(build_graph(&f5, &sq).succ(), &[0, 1, 4, 4, 1]);

        let f3 = make_field(3, 1, None).unwrap();
        let recip = RationalMap::new(&f3, &Poly::one(), &Poly::x()).unwrap();
        assert_eq!(build_graph(&f3, &recip).succ(), &[3, 1, 2, 0]);

        let inf = RationalMap::constant_infinity();
        assert_eq!(build_graph(&f5, &inf).succ(), &[5; 6]);
    }

    #[test]
    fn census_examples() {
        let stats = cycle_census(&graph(&[0, 1, 4, 4, 1])).unwrap();
        assert_eq!(stats.component_count, 2);
        assert_eq!(stats.cycle_lengths, vec![1, 1]);
        assert_eq!(stats.periodic_count, 2);
        assert_eq!(stats.max_tail, 2);

        let stats = cycle_census(&graph(&[1, 2, 0])).unwrap();
        assert_eq!(stats.cycle_lengths, vec![3]);
        assert_eq!((stats.periodic_count, stats.component_count), (3, 1));

        let stats = cycle_census(&graph(&[2, 2, 2, 2])).unwrap();
        assert_eq!(stats.cycle_lengths, vec![1]);
        assert_eq!((stats.periodic_count, stats.component_count), (1, 1));
        assert_eq!(stats.k_cycle_counts, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn rho_examples() {
        let g = graph(&[0, 1, 4, 4, 1]);
        // 3 -> 4 -> 1 -> 1
        assert_eq!(rho_length(&g, 3).unwrap(), RhoLength { tail: 2, cycle: 1 });
        assert_eq!(rho_length(&g, 1).unwrap(), RhoLength { tail: 0, cycle: 1 });
        let constant = graph(&[2, 2, 2, 2]);
        assert_eq!(rho_length(&constant, 0).unwrap(), RhoLength { tail: 1, cycle: 1 });
        assert!(rho_length(&constant, 4).is_err());
    }

    #[test]
    fn stats_json_shape() {
        let stats = cycle_census(&graph(&[0, 1, 4, 4, 1])).unwrap();
        assert_eq!(
            serde_json::to_string(&stats).unwrap(),
            r#"{"components":2,"cycle_lengths":[1,1],"periodic":2,"k_cycles":{"1":2},"max_tail":2}"#
        );
    }

    #[test]
    fn rejects_out_of_range_successor() {
        assert!(FunctionalGraph::from_succ(vec![0, 2]).is_err());
    }
}
