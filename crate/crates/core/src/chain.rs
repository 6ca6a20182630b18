//! The 1+1D triangular brickwork of three-qubit gates and exact
//! infinite-temperature correlators.
//!
//! Half-layer `e` acts on `(x, x+1, x+2)` for `x = 0 mod 4`, half-layer `o` on
//! the same triplets shifted by two sites; `U_e` is applied first. Time `t`
//! counts half-layers, so half-layer `k = 1, 2, ...` is `e` for odd `k`.
//!
//! With `SWAP_13` as the skeleton of every gate, even sites move by two per
//! half-layer and odd sites (the middle leg of one parity, idle in the other)
//! never move.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::channel::{predicted_ray_correlator, Direction};
use crate::tensor::{ChainState, Gate3, LocalOperator, LocalUnitary, QubitOp, C64};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            _ => Err(Error::Parse(format!("unknown boundary {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of half-layer `k` (1-based).
    pub fn of_step(k: usize) -> Parity {
        if k % 2 == 1 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 2,
        }
    }
}

/// A gate placed on explicit sites, applied with its qubit 1 on `sites[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedGate {
    pub sites: Vec<usize>,
    pub gate: DMatrix<C64>,
}

impl PlacedGate {
    pub fn new<G: LocalUnitary + ?Sized>(g: &G, sites: Vec<usize>) -> Self {
        let d = 1usize << g.arity();
        PlacedGate { sites, gate: DMatrix::from_row_slice(d, d, &g.row_major()) }
    }
}

/// Pulls `a` on `site` back through `t` half-layers of a time-periodic
/// sequence: half-layer `k` is `layers[(k - 1) % layers.len()]`, each listed in
/// time order.
pub fn heisenberg_operator(layers: &[Vec<PlacedGate>], site: usize, a: &QubitOp, t: usize) -> Result<LocalOperator> {
    let mut op = LocalOperator::single(site, a);
    for k in (1..=t).rev() {
        let layer = &layers[(k - 1) % layers.len()];
        for g in layer.iter().rev() {
            if g.sites.iter().any(|s| op.sites().contains(s)) {
                op.heisenberg(&g.gate, &g.sites)?;
            }
        }
    }
    Ok(op)
}

/// Dense unitary of a gate sequence (time order) on `l` qubits.
pub fn dense_unitary(l: usize, gates: &[PlacedGate]) -> Result<DMatrix<C64>> {
    if l > 12 {
        return Err(Error::ResourceBound(format!("dense unitary limited to 12 sites, got {l}")));
    }
    let dim = 1usize << l;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut psi = ChainState::basis(l, col)?;
        for g in gates {
            psi.apply(&g.gate, &g.sites)?;
        }
        for (row, a) in psi.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    Ok(u)
}

/// Brickwork circuit with a default gate and optional per-cell overrides.
#[derive(Clone, Debug)]
pub struct ChainCircuit {
    l: usize,
    boundary: Boundary,
    default: Gate3,
    overrides: BTreeMap<(Parity, usize), Gate3>,
}

/// Propagation speed in sites per half-layer.
pub const V: usize = 2;

impl ChainCircuit {
    pub fn uniform(l: usize, boundary: Boundary, gate: Gate3) -> Result<Self> {
        match boundary {
            Boundary::Periodic if !l.is_multiple_of(4) || l == 0 => {
                return Err(Error::InvalidParameter(format!(
                    "periodic chain needs L a positive multiple of 4, got {l}"
                )))
            }
            Boundary::Open if l < 3 => {
                return Err(Error::InvalidParameter(format!("open chain needs L >= 3, got {l}")))
            }
            _ => {}
        }
        Ok(ChainCircuit { l, boundary, default: gate, overrides: BTreeMap::new() })
    }

    /// Replaces the gate of one cell; `cell` indexes the triplets of that
    /// parity from the left.
    pub fn set_gate(&mut self, parity: Parity, cell: usize, gate: Gate3) -> Result<()> {
        if cell >= self.cells(parity).len() {
            return Err(Error::InvalidParameter(format!("no {parity:?} cell {cell} in a chain of {}", self.l)));
        }
        self.overrides.insert((parity, cell), gate);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn default_gate(&self) -> &Gate3 {
        &self.default
    }

    pub fn is_uniform(&self) -> bool {
        self.overrides.is_empty()
    }

    /// Leftmost sites of the gates of one half-layer.
    pub fn cells(&self, parity: Parity) -> Vec<usize> {
        let start = parity.offset();
        (start..self.l).step_by(4).filter(|&x| self.boundary == Boundary::Periodic || x + 2 < self.l).collect()
    }

    pub fn gate_at(&self, parity: Parity, cell: usize) -> &Gate3 {
        self.overrides.get(&(parity, cell)).unwrap_or(&self.default)
    }

    /// Gate triplets `(x, x+1, x+2)` of one half-layer (mod L when periodic).
    pub fn half_layer(&self, parity: Parity) -> Vec<([usize; 3], &Gate3)> {
        self.cells(parity)
            .into_iter()
            .enumerate()
            .map(|(k, x)| ([x, (x + 1) % self.l, (x + 2) % self.l], self.gate_at(parity, k)))
            .collect()
    }

    /// Sites no gate of `parity` acts on.
    pub fn idle_sites(&self, parity: Parity) -> Vec<usize> {
        let busy: Vec<usize> = self.half_layer(parity).iter().flat_map(|(s, _)| *s).collect();
        (0..self.l).filter(|s| !busy.contains(s)).collect()
    }

    pub fn placed_half_layer(&self, parity: Parity) -> Vec<PlacedGate> {
        self.half_layer(parity).into_iter().map(|(s, g)| PlacedGate::new(g, s.to_vec())).collect()
    }

    /// `[U_e, U_o]` as placed gates.
    pub fn layers(&self) -> Vec<Vec<PlacedGate>> {
        vec![self.placed_half_layer(Parity::Even), self.placed_half_layer(Parity::Odd)]
    }

    pub fn apply_half_layer(&self, state: &mut ChainState, parity: Parity) -> Result<()> {
        if state.n_qubits() != self.l {
            return Err(Error::InvalidParameter(format!("state has {} qubits, chain {}", state.n_qubits(), self.l)));
        }
        for (sites, g) in self.half_layer(parity) {
            state.apply(g, &sites)?;
        }
        Ok(())
    }

    pub fn apply_half_layer_dagger(&self, state: &mut ChainState, parity: Parity) -> Result<()> {
        for (sites, g) in self.half_layer(parity) {
            state.apply_dagger(g, &sites)?;
        }
        Ok(())
    }

    /// Applies half-layers `1..=t`.
    pub fn evolve(&self, state: &mut ChainState, t: usize) -> Result<()> {
        for k in 1..=t {
            self.apply_half_layer(state, Parity::of_step(k))?;
        }
        Ok(())
    }

    pub fn half_layer_dense(&self, parity: Parity) -> Result<DMatrix<C64>> {
        dense_unitary(self.l, &self.placed_half_layer(parity))
    }

    fn check_window(&self, t: usize, allow_wrap: bool) -> Result<()> {
        if self.boundary == Boundary::Periodic && !allow_wrap && 2 * V * t + 1 > self.l {
            return Err(Error::Wraparound(format!("t = {t} needs 2vt + 1 = {} <= L = {}", 2 * V * t + 1, self.l)));
        }
        Ok(())
    }

    fn target(&self, anchor: usize, x: i64) -> Option<usize> {
        let y = anchor as i64 + x;
        match self.boundary {
            Boundary::Periodic => Some(y.rem_euclid(self.l as i64) as usize),
            Boundary::Open => (0..self.l as i64).contains(&y).then_some(y as usize),
        }
    }

    /// `a(t) = U^dagger(t) a U(t)` restricted to its support.
    pub fn heisenberg(&self, a: &QubitOp, anchor: usize, t: usize) -> Result<LocalOperator> {
        if anchor >= self.l {
            return Err(Error::SiteOutOfRange { site: anchor, n: self.l });
        }
        heisenberg_operator(&self.layers(), anchor, a, t)
    }

    /// `C(x, t) = 2^{-L} Tr(a_anchor(t) b_{anchor+x})`.
    pub fn heisenberg_correlator(
        &self,
        a: &QubitOp,
        b: &QubitOp,
        anchor: usize,
        x: i64,
        t: usize,
        allow_wrap: bool,
    ) -> Result<C64> {
        self.check_window(t, allow_wrap)?;
        let site = self
            .target(anchor, x)
            .ok_or_else(|| Error::InvalidRegion(format!("site {anchor} + {x} outside the open chain")))?;
        Ok(self.heisenberg(a, anchor, t)?.correlate_single(site, b))
    }

    /// Brute-force correlators for `|x| <= 2t`, `1 <= t <= t_max`.
    pub fn correlation_grid(&self, a: &QubitOp, b: &QubitOp, anchor: usize, t_max: usize) -> Result<CorrelationGrid> {
        self.check_window(t_max, false)?;
        let mut entries = Vec::new();
        for t in 1..=t_max {
            let op = self.heisenberg(a, anchor, t)?;
            let reach = (V * t) as i64;
            for x in -reach..=reach {
                if let Some(site) = self.target(anchor, x) {
                    entries.push(GridEntry { x, t, value: op.correlate_single(site, b) });
                }
            }
        }
        Ok(CorrelationGrid { l: self.l, boundary: self.boundary, anchor, source: Source::BruteForce, entries })
    }

    /// The one ray on which a correlator from `anchor` can survive after `t`
    /// half-layers, with the number of channel applications along it.
    ///
    /// Movers (even sites) follow `+2` per half-layer when they sit on the
    /// gate's qubit 1 at the final half-layer and `-2` when on qubit 3; odd
    /// sites stay put and pick up one `M_0` per half-layer in which they are
    /// the middle leg.
    pub fn ray_for(&self, anchor: usize, t: usize) -> RayPrediction {
        let last = Parity::of_step(t);
        if anchor.is_multiple_of(2) {
            let on_first = anchor % 4 == last.offset();
            let direction = if on_first { Direction::Plus } else { Direction::Minus };
            RayPrediction { direction, x: direction.sign() * (V * t) as i64, steps: t }
        } else {
            let active = (1..=t).filter(|&k| anchor % 4 == Parity::of_step(k).offset() + 1).count();
            RayPrediction { direction: Direction::Zero, x: 0, steps: active }
        }
    }

    /// Brute force against channel iteration on all three rays, for a
    /// uniform circuit. Rays other than [`ChainCircuit::ray_for`] are
    /// predicted to vanish.
    pub fn ray_channel_match(&self, a: &QubitOp, b: &QubitOp, anchor: usize, t_max: usize) -> Result<RayMatchReport> {
        if !self.is_uniform() {
            return Err(Error::InvalidParameter("channel predictions need a uniform circuit".into()));
        }
        let grid = self.correlation_grid(a, b, anchor, t_max)?;
        let mut checks = Vec::new();
        for t in 1..=t_max {
            let ray = self.ray_for(anchor, t);
            for mu in Direction::ALL {
                let x = mu.sign() * (V * t) as i64;
                let Some(brute) = grid.get(x, t) else { continue };
                let predicted = if mu == ray.direction {
                    predicted_ray_correlator(&self.default, mu, a, b, ray.steps)?
                } else {
                    C64::new(0.0, 0.0)
                };
                checks.push(RayCheck { direction: mu, t, x, brute, predicted });
            }
        }
        Ok(RayMatchReport { anchor, checks })
    }

    /// Image under the reflection `y -> 2 - y (mod L)`, which maps every gate
    /// triplet onto a triplet of the same parity with its legs reversed.
    pub fn mirrored(&self) -> Result<ChainCircuit> {
        if self.boundary != Boundary::Periodic {
            return Err(Error::InvalidParameter("mirror image defined for periodic chains".into()));
        }
        let mut out = ChainCircuit::uniform(self.l, self.boundary, self.default.mirrored())?;
        for (&(parity, cell), g) in &self.overrides {
            let x = parity.offset() + 4 * cell;
            let image = (2 * self.l + 2 - x - 2) % self.l;
            let new_cell = (image - parity.offset()) / 4;
            out.overrides.insert((parity, new_cell), g.mirrored());
        }
        Ok(out)
    }

    /// Site image of [`ChainCircuit::mirrored`].
    pub fn mirror_site(&self, site: usize) -> usize {
        (self.l + 2 - site % self.l) % self.l
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayPrediction {
    pub direction: Direction,
    pub x: i64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayCheck {
    pub direction: Direction,
    pub t: usize,
    pub x: i64,
    pub brute: C64,
    pub predicted: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayMatchReport {
    pub anchor: usize,
    pub checks: Vec<RayCheck>,
}

impl RayMatchReport {
    pub fn max_error(&self, mu: Direction) -> f64 {
        self.checks.iter().filter(|c| c.direction == mu).map(|c| (c.brute - c.predicted).norm()).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> f64 {
        Direction::ALL.iter().map(|&mu| self.max_error(mu)).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    BruteForce,
    ChannelPrediction,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridEntry {
    pub x: i64,
    pub t: usize,
    pub value: C64,
}

impl GridEntry {
    pub fn on_ray(&self) -> bool {
        self.x == 0 || self.x.unsigned_abs() as usize == V * self.t
    }
}

/// Correlator values on a spacetime window around one anchor site.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationGrid {
    pub l: usize,
    pub boundary: Boundary,
    pub anchor: usize,
    pub source: Source,
    pub entries: Vec<GridEntry>,
}

impl CorrelationGrid {
    pub fn get(&self, x: i64, t: usize) -> Option<C64> {
        self.entries.iter().find(|e| e.x == x && e.t == t).map(|e| e.value)
    }

    pub fn max_off_ray(&self) -> f64 {
        self.entries.iter().filter(|e| !e.on_ray()).map(|e| e.value.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.value.norm()).fold(0.0, f64::max)
    }
}

/// Correlation grid of an arbitrary time-periodic gate sequence, e.g. a
/// kicked Ising chain, with the same window conventions as
/// [`ChainCircuit::correlation_grid`].
pub fn sequence_correlation_grid(
    l: usize,
    boundary: Boundary,
    layers: &[Vec<PlacedGate>],
    a: &QubitOp,
    b: &QubitOp,
    anchor: usize,
    t_max: usize,
) -> Result<CorrelationGrid> {
    if boundary == Boundary::Periodic && 2 * V * t_max + 1 > l {
        return Err(Error::Wraparound(format!("t = {t_max} wraps a ring of {l}")));
    }
    let mut entries = Vec::new();
    for t in 1..=t_max {
        let op = heisenberg_operator(layers, anchor, a, t)?;
        let reach = (V * t) as i64;
        for x in -reach..=reach {
            let y = anchor as i64 + x;
            let site = match boundary {
                Boundary::Periodic => y.rem_euclid(l as i64) as usize,
                Boundary::Open if (0..l as i64).contains(&y) => y as usize,
                Boundary::Open => continue,
            };
            entries.push(GridEntry { x, t, value: op.correlate_single(site, b) });
        }
    }
    Ok(CorrelationGrid { l, boundary, anchor, source: Source::BruteForce, entries })
}
