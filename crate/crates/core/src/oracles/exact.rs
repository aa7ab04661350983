//! Exact expected extinction time by solving the absorbing Markov chain.
//!
//! Vertices on one side of the graph are exchangeable, so a state is the
//! sorted multiset of occupied sites `(side, color, count)`; empty vertices
//! are implied. `K_{2n}` has one side of `2n` vertices, `K_{n,n}` two sides of
//! `n`. The particle count never increases, so the linear system is solved
//! one particle-count block at a time, smallest first.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::process::{Color, Configuration, InitSpec, SimParams, Topology};

pub const MAX_STATES: usize = 100_000;
/// Largest block handed to the dense LU solver.
pub const MAX_BLOCK: usize = 4_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteOccupancy {
    pub side: u8,
    pub color: Color,
    pub count: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompressedState {
    sites: Vec<SiteOccupancy>,
}

impl CompressedState {
    pub fn new(mut sites: Vec<SiteOccupancy>) -> Self {
        sites.retain(|s| s.count > 0);
        sites.sort_unstable();
        Self { sites }
    }

    pub fn from_configuration(cfg: &Configuration) -> Self {
        let n = cfg.n();
        let side = |v: usize| match cfg.topology() {
            Topology::CompleteWithLoops => 0,
            Topology::Bipartite => (v >= n) as u8,
        };
        let mut sites = Vec::new();
        for v in 0..cfg.vertex_count() {
            for color in [Color::Red, Color::Blue] {
                let count = cfg.count(color, v);
                if count > 0 {
                    sites.push(SiteOccupancy { side: side(v), color, count: count as u16 });
                }
            }
        }
        Self::new(sites)
    }

    pub fn sites(&self) -> &[SiteOccupancy] {
        &self.sites
    }

    /// Particles of `color`.
    pub fn total(&self, color: Color) -> usize {
        self.sites.iter().filter(|s| s.color == color).map(|s| s.count as usize).sum()
    }

    pub fn m(&self) -> usize {
        self.total(Color::Red)
    }

    pub fn is_extinct(&self) -> bool {
        self.sites.is_empty()
    }

    /// One-step transition distribution of the modified process.
    pub fn transitions(&self, n: usize, topology: Topology, p: f64) -> BTreeMap<CompressedState, f64> {
        let mut out = BTreeMap::new();
        if self.is_extinct() {
            out.insert(self.clone(), 1.0);
            return out;
        }
        let m = self.m() as f64;
        for (i, src) in self.sites.iter().enumerate() {
            let color_prob = if src.color == Color::Red { p } else { 1.0 - p };
            let w_src = color_prob * src.count as f64 / m;
            let (target_side, side_size) = match topology {
                Topology::CompleteWithLoops => (0u8, 2 * n),
                Topology::Bipartite => (1 - src.side, n),
            };
            let each = 1.0 / side_size as f64;
            let mut occupied = 0;
            for (j, dst) in self.sites.iter().enumerate() {
                if dst.side == target_side {
                    occupied += 1;
                    *out.entry(self.after_move(i, Some(j), target_side)).or_insert(0.0) += w_src * each;
                }
            }
            let empties = side_size - occupied;
            if empties > 0 {
                *out.entry(self.after_move(i, None, target_side)).or_insert(0.0) += w_src * empties as f64 * each;
            }
        }
        out
    }

    /// Moves one particle off site `from` onto site `to`, or onto an empty
    /// vertex of `side` when `to` is `None`, resolving any collision.
    fn after_move(&self, from: usize, to: Option<usize>, side: u8) -> CompressedState {
        if to == Some(from) {
            return self.clone();
        }
        let mut sites = self.sites.clone();
        let color = sites[from].color;
        sites[from].count -= 1;
        match to {
            Some(j) if sites[j].color == color => sites[j].count += 1,
            Some(j) => sites[j].count -= 1,
            None => sites.push(SiteOccupancy { side, color, count: 1 }),
        }
        CompressedState::new(sites)
    }
}

/// The reachable chain from an initial distribution.
#[derive(Clone, Debug)]
pub struct ExactChain {
    n: usize,
    topology: Topology,
    p: f64,
    states: Vec<CompressedState>,
    kernel: Vec<Vec<(usize, f64)>>,
    initial: Vec<(usize, f64)>,
}

impl ExactChain {
    pub fn build(n: usize, topology: Topology, p: f64, initial: &[(CompressedState, f64)]) -> Result<Self> {
        let mut index: BTreeMap<CompressedState, usize> = BTreeMap::new();
        let mut states = Vec::new();
        let mut queue = VecDeque::new();
        let mut init = Vec::new();
        for (s, w) in initial {
            let id = *index.entry(s.clone()).or_insert_with(|| {
                states.push(s.clone());
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            init.push((id, *w));
        }
        let mut kernel: Vec<Vec<(usize, f64)>> = Vec::new();
        while let Some(id) = queue.pop_front() {
            let row: Vec<(CompressedState, f64)> = states[id].transitions(n, topology, p).into_iter().collect();
            let mut out = Vec::with_capacity(row.len());
            for (s, w) in row {
                let next = match index.get(&s) {
                    Some(&k) => k,
                    None => {
                        states.push(s.clone());
                        let k = states.len() - 1;
                        index.insert(s, k);
                        queue.push_back(k);
                        if states.len() > MAX_STATES {
                            return Err(Error::StateSpaceTooLarge { states: states.len(), limit: MAX_STATES });
                        }
                        k
                    }
                };
                out.push((next, w));
            }
            if kernel.len() <= id {
                kernel.resize(id + 1, Vec::new());
            }
            kernel[id] = out;
        }
        kernel.resize(states.len(), Vec::new());
        Ok(Self { n, topology, p, states, kernel, initial: init })
    }

    pub fn states(&self) -> &[CompressedState] {
        &self.states
    }

    pub fn row(&self, id: usize) -> &[(usize, f64)] {
        &self.kernel[id]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.kernel.iter().map(|row| row.iter().map(|(_, w)| w).sum()).collect()
    }

    /// Expected remaining steps from every state.
    pub fn expected_times(&self) -> Result<Vec<f64>> {
        let mut by_m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (id, s) in self.states.iter().enumerate() {
            by_m.entry(s.m()).or_default().push(id);
        }
        let mut value = vec![0.0; self.states.len()];
        for (&m, block) in &by_m {
            if m == 0 {
                continue;
            }
            if block.len() > MAX_BLOCK {
                return Err(Error::StateSpaceTooLarge { states: block.len(), limit: MAX_BLOCK });
            }
            let local: BTreeMap<usize, usize> = block.iter().enumerate().map(|(i, &id)| (id, i)).collect();
            let k = block.len();
            let mut a = DMatrix::<f64>::identity(k, k);
            let mut rhs = DVector::<f64>::from_element(k, 1.0);
            for (i, &id) in block.iter().enumerate() {
                for &(next, w) in &self.kernel[id] {
                    match local.get(&next) {
                        Some(&j) => a[(i, j)] -= w,
                        None => rhs[i] += w * value[next],
                    }
                }
            }
            let sol = a.lu().solve(&rhs).ok_or(Error::Singular("absorbing chain block"))?;
            for (i, &id) in block.iter().enumerate() {
                value[id] = sol[i];
            }
        }
        Ok(value)
    }

    pub fn expected_extinction(&self) -> Result<f64> {
        let value = self.expected_times()?;
        Ok(self.initial.iter().map(|&(id, w)| w * value[id]).sum())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn singles(side: u8, color: Color, count: usize) -> impl Iterator<Item = SiteOccupancy> {
    (0..count).map(move |_| SiteOccupancy { side, color, count: 1 })
}

/// Distribution of the compressed initial state implied by `params.init`.
pub fn initial_distribution(params: &SimParams) -> Result<Vec<(CompressedState, f64)>> {
    params.validate()?;
    let n = params.n;
    let unsupported = || Error::UnsupportedOracle(format!("{} on {:?}", params.init.variant_name(), params.topology));
    match (&params.init, params.topology) {
        (InitSpec::Explicit(list), topology) => {
            let cfg = Configuration::from_placements(n, topology, list)?;
            Ok(vec![(CompressedState::from_configuration(&cfg), 1.0)])
        }
        (InitSpec::OnePerVertex, Topology::CompleteWithLoops) => {
            let sites = singles(0, Color::Red, n).chain(singles(0, Color::Blue, n)).collect();
            Ok(vec![(CompressedState::new(sites), 1.0)])
        }
        (InitSpec::ClusteredRed, Topology::CompleteWithLoops) => {
            let mut sites: Vec<_> = singles(0, Color::Blue, n).collect();
            sites.push(SiteOccupancy { side: 0, color: Color::Red, count: n as u16 });
            Ok(vec![(CompressedState::new(sites), 1.0)])
        }
        (InitSpec::DisjointSites { a }, Topology::CompleteWithLoops) => {
            let red_sites = n - a;
            let total = (red_sites as f64).powi(*a as i32);
            if total > 1e6 {
                return Err(unsupported());
            }
            let mut dist: BTreeMap<CompressedState, f64> = BTreeMap::new();
            let mut drops = vec![0usize; *a];
            loop {
                let mut counts = vec![1u16; red_sites];
                for &d in &drops {
                    counts[d] += 1;
                }
                let mut sites: Vec<_> = singles(0, Color::Blue, n).collect();
                sites.extend(counts.iter().map(|&count| SiteOccupancy { side: 0, color: Color::Red, count }));
                *dist.entry(CompressedState::new(sites)).or_insert(0.0) += 1.0 / total;
                // odometer over all drop sequences
                let mut k = 0;
                while k < drops.len() {
                    drops[k] += 1;
                    if drops[k] < red_sites {
                        break;
                    }
                    drops[k] = 0;
                    k += 1;
                }
                if k == drops.len() {
                    break;
                }
            }
            Ok(dist.into_iter().collect())
        }
        (InitSpec::OnePerVertex, Topology::Bipartite) => {
            // k reds land on side 0
            let norm = binomial(2 * n, n);
            Ok((0..=n)
                .map(|k| {
                    let sites = singles(0, Color::Red, k)
                        .chain(singles(0, Color::Blue, n - k))
                        .chain(singles(1, Color::Red, n - k))
                        .chain(singles(1, Color::Blue, k))
                        .collect();
                    (CompressedState::new(sites), binomial(n, k) * binomial(n, n - k) / norm)
                })
                .collect())
        }
        (InitSpec::ClusteredRed, Topology::Bipartite) => {
            // cluster on side 0 by symmetry; j blues share its side
            let norm = binomial(2 * n - 1, n);
            Ok((0..n)
                .map(|j| {
                    let mut sites: Vec<_> = singles(0, Color::Blue, j).chain(singles(1, Color::Blue, n - j)).collect();
                    sites.push(SiteOccupancy { side: 0, color: Color::Red, count: n as u16 });
                    (CompressedState::new(sites), binomial(n - 1, j) * binomial(n, n - j) / norm)
                })
                .collect())
        }
        _ => Err(unsupported()),
    }
}

pub fn exact_chain(params: &SimParams) -> Result<ExactChain> {
    let initial = initial_distribution(params)?;
    ExactChain::build(params.n, params.topology, params.p, &initial)
}

/// `E[T]` for the simulated process, solved exactly.
pub fn exact_extinction_expectation(params: &SimParams) -> Result<f64> {
    exact_chain(params)?.expected_extinction()
}
