//! Deterministic graph generators.
//!
//! Generation is a pure function of the spec: the PRNG is a fixed splitmix64
//! (Steele et al. constants 0x9e3779b97f4a7c15 / 0xbf58476d1ce4e5b9 /
//! 0x94d049bb133111eb), so outputs are byte-identical across platforms.

use thiserror::Error;

use crate::graph::{build_graph, Graph};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("bad generator spec: {0}")]
    BadSpec(String),
}

/// splitmix64 mixing PRNG.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-enough value in `[0, n)`; modulo bias is irrelevant here and
    /// keeps the generator trivially portable.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform float in `[0, 1)` with 53 bits of randomness.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Random,
    Path,
    Grid,
    Layered,
}

impl std::str::FromStr for GenKind {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, GenError> {
        match s {
            "random" => Ok(GenKind::Random),
            "path" => Ok(GenKind::Path),
            "grid" => Ok(GenKind::Grid),
            "layered" => Ok(GenKind::Layered),
            other => Err(GenError::BadSpec(format!("unknown kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    /// Edge count; only meaningful for `Random`.
    pub m: usize,
    pub weight_min: f64,
    pub weight_max: f64,
    pub integer_weights: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn random(n: usize, m: usize, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::Random,
            n,
            m,
            weight_min: 0.0,
            weight_max: (1 << 20) as f64,
            integer_weights: true,
            seed,
        }
    }
}

fn weight(spec: &GenSpec, rng: &mut SplitMix64) -> f64 {
    if spec.integer_weights {
        let lo = spec.weight_min as u64;
        let hi = spec.weight_max as u64;
        (lo + rng.next_below(hi - lo + 1)) as f64
    } else {
        spec.weight_min + rng.next_f64() * (spec.weight_max - spec.weight_min)
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    if spec.n == 0 {
        return Err(GenError::BadSpec("n must be >= 1".into()));
    }
    if spec.weight_min < 0.0 || spec.weight_max < spec.weight_min {
        return Err(GenError::BadSpec("bad weight range".into()));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let n = spec.n;
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    match spec.kind {
        GenKind::Random => {
            for _ in 0..spec.m {
                let u = rng.next_below(n as u64) as u32;
                let v = rng.next_below(n as u64) as u32;
                let w = weight(spec, &mut rng);
                edges.push((u, v, w));
            }
        }
        GenKind::Path => {
            for v in 1..n {
                edges.push((v as u32 - 1, v as u32, 1.0));
            }
        }
        GenKind::Grid => {
            // 4-neighbor directed grid on side x side vertices, side = floor(sqrt n).
            let side = (n as f64).sqrt().floor() as usize;
            if side < 1 {
                return Err(GenError::BadSpec("grid needs n >= 1".into()));
            }
            let at = |r: usize, c: usize| (r * side + c) as u32;
            for r in 0..side {
                for c in 0..side {
                    let mut link = |to_r: usize, to_c: usize, rng: &mut SplitMix64| {
                        edges.push((at(r, c), at(to_r, to_c), weight(spec, rng)));
                    };
                    if c + 1 < side {
                        link(r, c + 1, &mut rng);
                    }
                    if r + 1 < side {
                        link(r + 1, c, &mut rng);
                    }
                    if c > 0 {
                        link(r, c - 1, &mut rng);
                    }
                    if r > 0 {
                        link(r - 1, c, &mut rng);
                    }
                }
            }
            return build_graph(side * side, &edges)
                .map_err(|e| GenError::BadSpec(e.to_string()));
        }
        GenKind::Layered => {
            // Unit-weight layers of equal width: every s->v route to layer i
            // has length i+1 and hop count i+2, so tie-breaking is exercised
            // on nearly every relaxation.
            if n < 3 {
                return Err(GenError::BadSpec("layered needs n >= 3".into()));
            }
            let width = ((n - 1) as f64).sqrt().floor().max(2.0) as usize;
            let mut layers: Vec<Vec<u32>> = Vec::new();
            let mut next = 1u32;
            while (next as usize) < n {
                let take = width.min(n - next as usize);
                layers.push((next..next + take as u32).collect());
                next += take as u32;
            }
            for &v in &layers[0] {
                edges.push((0, v, 1.0));
            }
            for i in 0..layers.len() - 1 {
                let targets = &layers[i + 1];
                for &u in &layers[i] {
                    let fanout = 2 + rng.next_below(2) as usize;
                    for _ in 0..fanout.min(targets.len()) {
                        let v = targets[rng.next_below(targets.len() as u64) as usize];
                        edges.push((u, v, 1.0));
                    }
                }
            }
        }
    }
    build_graph(n, &edges).map_err(|e| GenError::BadSpec(e.to_string()))
}
