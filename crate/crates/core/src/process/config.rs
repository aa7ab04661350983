use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::{Color, InitSpec, Placement, SimParams, Topology};
use crate::error::{Error, Result};

/// Particles of one color.
///
/// `pos` is a dense particle -> vertex array so a uniform particle is one
/// index draw. Each vertex keeps the ids of its occupants and each particle
/// remembers its slot there, so moves and deletions are O(1) swap-removes.
#[derive(Clone, Debug)]
pub(crate) struct Species {
    pos: Vec<u32>,
    slot: Vec<u32>,
    occupants: Vec<Vec<u32>>,
    sites: usize,
}

impl Species {
    fn new(vertices: usize) -> Self {
        Self {
            pos: Vec::new(),
            slot: Vec::new(),
            occupants: vec![Vec::new(); vertices],
            sites: 0,
        }
    }

    fn len(&self) -> usize {
        self.pos.len()
    }

    fn count(&self, v: usize) -> usize {
        self.occupants[v].len()
    }

    fn add(&mut self, v: usize) {
        let id = self.pos.len() as u32;
        self.pos.push(v as u32);
        self.slot.push(0);
        self.attach(id, v);
    }

    fn attach(&mut self, id: u32, v: usize) {
        let occ = &mut self.occupants[v];
        if occ.is_empty() {
            self.sites += 1;
        }
        self.slot[id as usize] = occ.len() as u32;
        occ.push(id);
        self.pos[id as usize] = v as u32;
    }

    fn detach(&mut self, id: u32) {
        let v = self.pos[id as usize] as usize;
        let s = self.slot[id as usize] as usize;
        let occ = &mut self.occupants[v];
        occ.swap_remove(s);
        if let Some(&moved) = occ.get(s) {
            self.slot[moved as usize] = s as u32;
        }
        if occ.is_empty() {
            self.sites -= 1;
        }
    }

    fn relocate(&mut self, id: u32, to: usize) {
        self.detach(id);
        self.attach(id, to);
    }

    fn remove(&mut self, id: u32) {
        self.detach(id);
        let last = (self.pos.len() - 1) as u32;
        if id != last {
            let v = self.pos[last as usize];
            let s = self.slot[last as usize];
            self.pos[id as usize] = v;
            self.slot[id as usize] = s;
            self.occupants[v as usize][s as usize] = id;
        }
        self.pos.pop();
        self.slot.pop();
    }

    /// Removes an arbitrary particle sitting on `v`; same-colored particles
    /// on a site are exchangeable.
    fn remove_any_at(&mut self, v: usize) {
        let id = *self.occupants[v].last().expect("no particle to annihilate");
        self.remove(id);
    }
}

/// One transition, with the site counts before the move, after the move
/// (`*_star`) and after collision resolution (`*_post`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEvent {
    pub mover: Color,
    pub source: usize,
    pub target: usize,
    pub collided: bool,
    /// Particles per color before the step.
    pub m_pre: usize,
    pub r_pre: usize,
    pub r_star: usize,
    pub r_post: usize,
    pub b_pre: usize,
    pub b_star: usize,
    pub b_post: usize,
    /// A red particle moved onto a different vertex already holding red.
    pub bad_move: bool,
}

impl StepEvent {
    pub fn m_post(&self) -> usize {
        self.m_pre - self.collided as usize
    }
}

/// Live state of the particle system.
#[derive(Clone, Debug)]
pub struct Configuration {
    n: usize,
    topology: Topology,
    red: Species,
    blue: Species,
    t: u64,
    a: usize,
}

impl Configuration {
    /// Builds the initial configuration described by `params.init`.
    pub fn new<R: Rng + ?Sized>(params: &SimParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        let vertices = params.vertex_count();
        let placements = match &params.init {
            InitSpec::OnePerVertex => {
                let order = sample(rng, vertices, vertices);
                order
                    .iter()
                    .enumerate()
                    .map(|(i, v)| Placement {
                        vertex: v,
                        color: if i < n { Color::Red } else { Color::Blue },
                        count: 1,
                    })
                    .collect()
            }
            InitSpec::DisjointSites { a } => {
                let red_sites = n - a;
                let chosen = sample(rng, vertices, red_sites + n).into_vec();
                let mut reds = vec![1usize; red_sites];
                for _ in 0..*a {
                    reds[rng.random_range(0..red_sites)] += 1;
                }
                let mut out: Vec<Placement> = chosen[..red_sites]
                    .iter()
                    .zip(&reds)
                    .map(|(&vertex, &count)| Placement { vertex, color: Color::Red, count })
                    .collect();
                out.extend(chosen[red_sites..].iter().map(|&vertex| Placement {
                    vertex,
                    color: Color::Blue,
                    count: 1,
                }));
                out
            }
            InitSpec::ClusteredRed => {
                let chosen = sample(rng, vertices, n + 1).into_vec();
                let mut out = vec![Placement { vertex: chosen[0], color: Color::Red, count: n }];
                out.extend(chosen[1..].iter().map(|&vertex| Placement {
                    vertex,
                    color: Color::Blue,
                    count: 1,
                }));
                out
            }
            InitSpec::Explicit(list) => list.clone(),
        };
        Self::from_placements(n, params.topology, &placements)
    }

    /// Builds and validates a configuration from explicit placements.
    pub fn from_placements(n: usize, topology: Topology, placements: &[Placement]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        let vertices = topology.vertex_count(n);
        let mut red = Species::new(vertices);
        let mut blue = Species::new(vertices);
        for pl in placements {
            if pl.vertex >= vertices {
                return Err(Error::VertexOutOfRange { vertex: pl.vertex, vertices });
            }
            let (own, opp) = match pl.color {
                Color::Red => (&mut red, &blue),
                Color::Blue => (&mut blue, &red),
            };
            if pl.count > 0 && opp.count(pl.vertex) > 0 {
                return Err(Error::MixedSite(pl.vertex));
            }
            for _ in 0..pl.count {
                own.add(pl.vertex);
            }
        }
        if red.len() != n || blue.len() != n {
            return Err(Error::InvalidInit(format!(
                "expected {n} particles of each color, got {} red and {} blue",
                red.len(),
                blue.len()
            )));
        }
        let a = n - red.sites;
        Ok(Self { n, topology, red, blue, t: 0, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertex_count(self.n)
    }

    /// Particles per color.
    pub fn m(&self) -> usize {
        self.red.len()
    }

    /// Red-occupied sites.
    pub fn r(&self) -> usize {
        self.red.sites
    }

    /// Blue-occupied sites.
    pub fn b(&self) -> usize {
        self.blue.sites
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// `n - R_0`, fixed at construction.
    pub fn a(&self) -> usize {
        self.a
    }

    pub fn count(&self, color: Color, v: usize) -> usize {
        self.species(color).count(v)
    }

    pub fn position(&self, color: Color, particle: usize) -> usize {
        self.species(color).pos[particle] as usize
    }

    fn species(&self, color: Color) -> &Species {
        match color {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    fn species_pair(&mut self, color: Color) -> (&mut Species, &mut Species) {
        match color {
            Color::Red => (&mut self.red, &mut self.blue),
            Color::Blue => (&mut self.blue, &mut self.red),
        }
    }

    /// Draws a target vertex for a particle leaving `source`.
    pub fn sample_target<R: Rng + ?Sized>(&self, source: usize, rng: &mut R) -> usize {
        match self.topology {
            Topology::CompleteWithLoops => rng.random_range(0..2 * self.n),
            Topology::Bipartite => {
                let other_side = if source < self.n { self.n } else { 0 };
                other_side + rng.random_range(0..self.n)
            }
        }
    }

    /// One step of the dynamics: with probability `p` a uniform red particle
    /// moves, otherwise a uniform blue one.
    ///
    /// Panics if no particles remain.
    pub fn step<R: Rng + ?Sized>(&mut self, p: f64, rng: &mut R) -> StepEvent {
        let m = self.m();
        assert!(m > 0, "step called on an extinct configuration");
        let color = if rng.random_bool(p) { Color::Red } else { Color::Blue };
        let particle = rng.random_range(0..m);
        let source = self.position(color, particle);
        let target = self.sample_target(source, rng);
        self.apply_move(color, particle, target)
    }

    /// Moves particle `particle` of `color` to `target` and resolves any
    /// collision there. This is the deterministic half of [`step`](Self::step).
    pub fn apply_move(&mut self, color: Color, particle: usize, target: usize) -> StepEvent {
        debug_assert!(target < self.vertex_count());
        let m_pre = self.m();
        let r_pre = self.r();
        let b_pre = self.b();
        let id = particle as u32;
        let source = self.position(color, particle);
        let bad_move = color == Color::Red && target != source && self.red.count(target) > 0;

        let (own, opp) = self.species_pair(color);
        own.relocate(id, target);
        let collided = opp.count(target) > 0;
        let r_star = self.r();
        let b_star = self.b();
        if collided {
            let (own, opp) = self.species_pair(color);
            own.remove(id);
            opp.remove_any_at(target);
        }
        self.t += 1;

        let ev = StepEvent {
            mover: color,
            source,
            target,
            collided,
            m_pre,
            r_pre,
            r_star,
            r_post: self.r(),
            b_pre,
            b_star,
            b_post: self.b(),
            bad_move,
        };
        debug_assert!(self.red.len() == self.blue.len());
        debug_assert!(ev.r_star.abs_diff(ev.r_pre) <= 1 && ev.r_post.abs_diff(ev.r_star) <= 1);
        debug_assert!(self.red.count(target) == 0 || self.blue.count(target) == 0);
        ev
    }

    /// Full invariant check, O(vertices). Intended for tests and debugging.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let vertices = self.vertex_count();
        let mut red_total = 0;
        let mut blue_total = 0;
        let mut r = 0;
        let mut b = 0;
        for v in 0..vertices {
            let (rc, bc) = (self.red.count(v), self.blue.count(v));
            if rc > 0 && bc > 0 {
                return Err(format!("vertex {v} holds {rc} red and {bc} blue"));
            }
            red_total += rc;
            blue_total += bc;
            r += (rc > 0) as usize;
            b += (bc > 0) as usize;
        }
        if red_total != blue_total || red_total != self.m() || self.blue.len() != self.m() {
            return Err(format!("color totals disagree: {red_total} red, {blue_total} blue"));
        }
        if r != self.r() || b != self.b() {
            return Err(format!("site counters R={} B={} but recount gives {r}, {b}", self.r(), self.b()));
        }
        for species in [&self.red, &self.blue] {
            for (id, &v) in species.pos.iter().enumerate() {
                let s = species.slot[id] as usize;
                if species.occupants[v as usize].get(s) != Some(&(id as u32)) {
                    return Err(format!("particle {id} not found in occupant list of vertex {v}"));
                }
            }
        }
        Ok(())
    }
}
