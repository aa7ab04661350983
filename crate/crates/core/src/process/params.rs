use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Graph on which the particles walk. Both have `2n` vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// `K_{2n}` with a loop at every vertex: a step targets any of the `2n`
    /// vertices uniformly, the current one included.
    #[default]
    CompleteWithLoops,
    /// `K_{n,n}`: vertices `0..n` form one side, `n..2n` the other; a step
    /// targets a uniform vertex of the opposite side.
    Bipartite,
}

impl Topology {
    pub fn vertex_count(self, n: usize) -> usize {
        2 * n
    }
}

/// One entry of an explicit initial configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub vertex: usize,
    pub color: Color,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitSpec {
    /// One particle on every vertex, exactly `n` of each color, colors
    /// assigned uniformly at random.
    #[default]
    OnePerVertex,
    /// Reds on `n - a` distinct random vertices (one each, the `a` surplus
    /// reds dropped uniformly onto those sites), blues on `n` further
    /// distinct vertices.
    DisjointSites { a: usize },
    /// All `n` reds on one random vertex, blues on `n` distinct others.
    ClusteredRed,
    Explicit(Vec<Placement>),
}

impl InitSpec {
    pub fn variant_name(&self) -> String {
        match self {
            InitSpec::OnePerVertex => "default".into(),
            InitSpec::DisjointSites { a } => format!("disjoint:{a}"),
            InitSpec::ClusteredRed => "clustered".into(),
            InitSpec::Explicit(_) => "explicit".into(),
        }
    }

    /// Mirror image of `ClusteredRed`: every blue on vertex 0, reds on
    /// vertices `1..=n`.
    pub fn clustered_blue(n: usize) -> InitSpec {
        let mut placements = vec![Placement { vertex: 0, color: Color::Blue, count: n }];
        placements.extend((1..=n).map(|v| Placement { vertex: v, color: Color::Red, count: 1 }));
        InitSpec::Explicit(placements)
    }
}

/// Parses `default`, `clustered` and `disjoint:A`.
impl FromStr for InitSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(InitSpec::OnePerVertex),
            "clustered" => Ok(InitSpec::ClusteredRed),
            _ => match s.strip_prefix("disjoint:").map(str::parse) {
                Some(Ok(a)) => Ok(InitSpec::DisjointSites { a }),
                _ => Err(Error::InvalidInit(format!("unrecognized initial configuration {s:?}"))),
            },
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" | "complete_with_loops" => Ok(Topology::CompleteWithLoops),
            "bipartite" => Ok(Topology::Bipartite),
            _ => Err(Error::InvalidParams(format!("unknown topology {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub n: usize,
    pub p: f64,
    #[serde(default)]
    pub topology: Topology,
    #[serde(default)]
    pub init: InitSpec,
    /// Hard cap on the number of steps; `None` means `10 n^2`.
    #[serde(default)]
    pub step_cap: Option<u64>,
}

impl SimParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        let params = Self {
            n,
            p,
            topology: Topology::CompleteWithLoops,
            init: InitSpec::OnePerVertex,
            step_cap: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    pub fn with_init(mut self, init: InitSpec) -> Self {
        self.init = init;
        self
    }

    pub fn with_step_cap(mut self, cap: u64) -> Self {
        self.step_cap = Some(cap);
        self
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertex_count(self.n)
    }

    pub fn step_cap(&self) -> u64 {
        self.step_cap.unwrap_or(10 * (self.n as u64) * (self.n as u64))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p <= 0.5) {
            return Err(Error::InvalidParams(format!("p = {} is outside (0, 1/2]", self.p)));
        }
        if let InitSpec::DisjointSites { a } = self.init {
            if a >= self.n {
                return Err(Error::InvalidInit(format!(
                    "A = {a} leaves no red sites for n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_p() {
        assert!(SimParams::new(4, 0.0).is_err());
        assert!(SimParams::new(4, 0.51).is_err());
        assert!(SimParams::new(4, f64::NAN).is_err());
        assert!(SimParams::new(0, 0.5).is_err());
        let p = SimParams::new(4, 0.5).unwrap();
        assert_eq!(p.q(), 0.5);
        assert_eq!(p.step_cap(), 160);
    }

    #[test]
    fn parses_init_names() {
        assert_eq!("default".parse::<InitSpec>().unwrap(), InitSpec::OnePerVertex);
        assert_eq!("disjoint:3".parse::<InitSpec>().unwrap(), InitSpec::DisjointSites { a: 3 });
        assert_eq!("clustered".parse::<InitSpec>().unwrap(), InitSpec::ClusteredRed);
        assert!("disjoint:x".parse::<InitSpec>().is_err());
        assert!("spread".parse::<InitSpec>().is_err());
        for init in [InitSpec::OnePerVertex, InitSpec::DisjointSites { a: 7 }, InitSpec::ClusteredRed] {
            assert_eq!(init.variant_name().parse::<InitSpec>().unwrap(), init);
        }
    }

    #[test]
    fn disjoint_requires_a_red_site() {
        let p = SimParams::new(4, 0.5).unwrap().with_init(InitSpec::DisjointSites { a: 4 });
        assert!(p.validate().is_err());
    }
}
