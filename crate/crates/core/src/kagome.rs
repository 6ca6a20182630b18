//! The 2+1D circuit of tri-unitary gates on a kagome qubit array.
//!
//! Gates sit on the vertices `v` of a cubic lattice and fire at time
//! `x + y + z`. Projecting along `(1,1,1)` sends `v` to the cell
//! `(x - z, y - z)` of a triangular lattice and the three worldline directions
//! to `P(x) = (1,0)`, `P(y) = (0,1)`, `P(z) = (-1,-1)`. The worldline segment
//! leaving cell `c` along axis `d` sits at `c + P(d)/2`, and these midpoints
//! form a kagome lattice. Cells of colour `(c1 + c2) mod 3 = k` fire in layer
//! `k` of each cycle; a segment takes the colour of the cell it leaves.
//!
//! Gate legs: inputs `(z_in, y_in, x_in)` on qubits 1..3, outputs
//! `(x, y, z)`, so `SWAP_13` carries every worldline straight through.
//!
//! The static array keeps the state on one colour class at a time. A layer
//! applies `SWAP_13 U` to the three incoming sites of each hexagon and then
//! swaps every site with the opposite vertex, where an ancilla in `|0>` waits.
//! System qubits live on the blue class (colour 2) between cycles.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{predicted_ray_correlator, Direction};
use crate::tensor::{ChainState, Gate2, Gate3, LocalOperator, QubitOp, C64};
use crate::{Error, Result};

/// Layers per Floquet cycle.
pub const LAYERS: usize = 3;

/// Tolerance on the ancilla fidelity after each layer.
pub const ANCILLA_TOL: f64 = 1e-10;

/// Worldline direction of a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Projection of the unit step onto the cell lattice.
    pub fn step(self) -> [i64; 2] {
        match self {
            Axis::X => [1, 0],
            Axis::Y => [0, 1],
            Axis::Z => [-1, -1],
        }
    }

    /// The channel carrying an operator one gate back along this worldline.
    pub fn direction(self) -> Direction {
        match self {
            Axis::X => Direction::Plus,
            Axis::Y => Direction::Zero,
            Axis::Z => Direction::Minus,
        }
    }

    /// Image under the `2 pi / 3` rotation `x -> y -> z -> x`.
    pub fn rotated(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::Z,
            Axis::Z => Axis::X,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::Parse(format!("unknown axis {s:?}"))),
        }
    }
}

/// Colour class of the kagome array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sublattice {
    Red,
    Green,
    Blue,
}

impl Sublattice {
    /// The class that holds the system between cycles.
    pub const SYSTEM: Sublattice = Sublattice::Blue;

    pub fn of_colour(colour: usize) -> Sublattice {
        [Sublattice::Red, Sublattice::Green, Sublattice::Blue][colour % 3]
    }

    pub fn colour(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sublattice::Red => "red",
            Sublattice::Green => "green",
            Sublattice::Blue => "blue",
        })
    }
}

fn add(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: [i64; 2], k: i64) -> [i64; 2] {
    [a[0] * k, a[1] * k]
}

/// Colour `(c1 + c2) mod 3` of a cell.
pub fn cell_colour(cell: [i64; 2]) -> usize {
    (cell[0] + cell[1]).rem_euclid(3) as usize
}

/// Cell displacements `i1 b1 + i2 b2` with `b1 = (1,-1)`, `b2 = (1,2)`: the
/// colour-preserving lattice, one step per system unit cell.
pub fn cell_offset(i1: i64, i2: i64) -> [i64; 2] {
    [i1 + i2, -i1 + 2 * i2]
}

/// Inverse of [`cell_offset`], if the displacement preserves colour.
pub fn offset_coords(d: [i64; 2]) -> Option<(i64, i64)> {
    let s = d[0] + d[1];
    if s.rem_euclid(3) != 0 {
        return None;
    }
    let i2 = s / 3;
    Some((d[0] - i2, i2))
}

/// The `2 pi / 3` rotation `(c1, c2) -> (-c2, c1 - c2)`, which maps
/// `P(x) -> P(y) -> P(z) -> P(x)` and preserves colour.
pub fn rotate_cell(c: [i64; 2]) -> [i64; 2] {
    [-c[1], c[0] - c[1]]
}

/// One kagome site: the segment leaving `cell` along `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KagomeSite {
    pub cell: [i64; 2],
    pub axis: Axis,
}

impl KagomeSite {
    pub fn new(cell: [i64; 2], axis: Axis) -> Self {
        KagomeSite { cell, axis }
    }

    pub fn colour(&self) -> usize {
        cell_colour(self.cell)
    }

    pub fn sublattice(&self) -> Sublattice {
        Sublattice::of_colour(self.colour())
    }

    /// Position `cell + P(axis)/2` in cell coordinates.
    pub fn position(&self) -> [f64; 2] {
        let s = self.axis.step();
        [self.cell[0] as f64 + 0.5 * s[0] as f64, self.cell[1] as f64 + 0.5 * s[1] as f64]
    }

    /// The cell whose gate consumes this segment.
    pub fn consumer(&self) -> [i64; 2] {
        add(self.cell, self.axis.step())
    }

    pub fn rotated(&self) -> KagomeSite {
        KagomeSite { cell: rotate_cell(self.cell), axis: self.axis.rotated() }
    }
}

/// Incoming sites on qubits 1..3 of the gate at `cell` and the opposite
/// hexagon vertices they are swapped to.
pub fn hexagon(cell: [i64; 2]) -> ([KagomeSite; 3], [KagomeSite; 3]) {
    let inputs = [
        KagomeSite::new(add(cell, [1, 1]), Axis::Z),
        KagomeSite::new(add(cell, [0, -1]), Axis::Y),
        KagomeSite::new(add(cell, [-1, 0]), Axis::X),
    ];
    let outputs = [KagomeSite::new(cell, Axis::Z), KagomeSite::new(cell, Axis::Y), KagomeSite::new(cell, Axis::X)];
    (inputs, outputs)
}

/// The single ray along which a correlator from a system site can survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KagomeRay {
    pub axis: Axis,
    pub site: KagomeSite,
    /// Channel applications along the ray.
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KagomeEntry {
    pub i1: i64,
    pub i2: i64,
    pub axis: Axis,
    pub value: C64,
    pub on_ray: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KagomeGrid {
    pub n1: usize,
    pub n2: usize,
    pub anchor: KagomeSite,
    pub cycles: usize,
    pub entries: Vec<KagomeEntry>,
}

impl KagomeGrid {
    pub fn max_off_ray(&self) -> f64 {
        self.entries.iter().filter(|e| !e.on_ray).map(|e| e.value.norm()).fold(0.0, f64::max)
    }

    pub fn on_ray(&self) -> impl Iterator<Item = &KagomeEntry> {
        self.entries.iter().filter(|e| e.on_ray)
    }
}

/// A torus of `3 n1 n2` cells spanned by `n1 (1,-1)` and `n2 (1,2)`, with
/// three qubits per cell and one uniform gate.
#[derive(Clone, Debug)]
pub struct KagomeCircuit {
    n1: usize,
    n2: usize,
    gate: Gate3,
    /// `SWAP_13 U`, the in-place action on a hexagon before the swaps.
    placed: Gate3,
    cells: Vec<[i64; 2]>,
    index: HashMap<[i64; 2], usize>,
}

impl KagomeCircuit {
    /// No wraparound check; see [`build_kagome`].
    pub fn new(n1: usize, n2: usize, gate: Gate3) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidParameter("torus dimensions must be positive".into()));
        }
        let det = 3 * (n1 * n2) as i64;
        let reach = 3 * (n1 + n2) as i64;
        let mut set = BTreeSet::new();
        for c1 in -reach..=reach {
            for c2 in -reach..=reach {
                set.insert(reduce_cell(n1 as i64, n2 as i64, [c1, c2]));
            }
        }
        let cells: Vec<[i64; 2]> = set.into_iter().collect();
        debug_assert_eq!(cells.len() as i64, det);
        let index = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let placed = Gate3::swap13().compose(&gate);
        Ok(KagomeCircuit { n1, n2, gate, placed, cells, index })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn gate(&self) -> &Gate3 {
        &self.gate
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_sites(&self) -> usize {
        3 * self.cells.len()
    }

    pub fn lattice_vectors(&self) -> [[i64; 2]; 2] {
        let (n1, n2) = (self.n1 as i64, self.n2 as i64);
        [[n1, -n1], [n2, 2 * n2]]
    }

    pub fn reduce(&self, cell: [i64; 2]) -> [i64; 2] {
        reduce_cell(self.n1 as i64, self.n2 as i64, cell)
    }

    /// Register index `3 * cell + axis` of a site, after reduction.
    pub fn site_index(&self, s: KagomeSite) -> usize {
        3 * self.index[&self.reduce(s.cell)] + s.axis.index()
    }

    pub fn site(&self, i: usize) -> KagomeSite {
        KagomeSite::new(self.cells[i / 3], Axis::ALL[i % 3])
    }

    pub fn sites_of(&self, sub: Sublattice) -> Vec<usize> {
        (0..self.n_sites()).filter(|&i| self.site(i).colour() == sub.colour()).collect()
    }

    pub fn layer_cells(&self, colour: usize) -> Vec<[i64; 2]> {
        self.cells.iter().copied().filter(|&c| cell_colour(c) == colour % 3).collect()
    }

    fn hexagon_indices(&self, cell: [i64; 2]) -> ([usize; 3], [usize; 3]) {
        let (ins, outs) = hexagon(cell);
        (ins.map(|s| self.site_index(s)), outs.map(|s| self.site_index(s)))
    }

    /// One layer of the static array: the gate on each hexagon of `colour`
    /// followed by the three swaps across it.
    pub fn apply_layer(&self, state: &mut ChainState, colour: usize) -> Result<()> {
        self.check_register(state)?;
        let swap = Gate2::swap();
        for cell in self.layer_cells(colour) {
            let (ins, outs) = self.hexagon_indices(cell);
            state.apply(&self.placed, &ins)?;
            for j in 0..3 {
                state.apply(&swap, &[ins[j], outs[j]])?;
            }
        }
        Ok(())
    }

    /// Three layers, checking after each that every qubit off the current
    /// system class is back in `|0>`.
    pub fn floquet_cycle(&self, state: &mut ChainState) -> Result<()> {
        for colour in 0..LAYERS {
            self.apply_layer(state, colour)?;
            let f = self.ancilla_fidelity(state, Sublattice::of_colour(colour))?;
            if f < 1.0 - ANCILLA_TOL {
                return Err(Error::AncillaContamination(1.0 - f));
            }
        }
        Ok(())
    }

    /// Weight of the state with every qubit outside `system` in `|0>`.
    pub fn ancilla_fidelity(&self, state: &ChainState, system: Sublattice) -> Result<f64> {
        self.check_register(state)?;
        let n = self.n_sites();
        let mask =
            (0..n).filter(|&i| self.site(i).colour() != system.colour()).fold(0usize, |m, i| m | (1 << (n - 1 - i)));
        Ok(state.amplitudes().iter().enumerate().filter(|(idx, _)| idx & mask == 0).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Places `amps` on the system class (sites in ascending index order)
    /// with every ancilla in `|0>`.
    pub fn embed_system(&self, amps: &[C64]) -> Result<ChainState> {
        let sys = self.sites_of(Sublattice::SYSTEM);
        if amps.len() != 1 << sys.len() {
            return Err(Error::InvalidParameter(format!("expected {} system amplitudes", 1usize << sys.len())));
        }
        let n = self.n_sites();
        let mut full = ChainState::zeros(n)?.amplitudes().to_vec();
        full[0] = C64::new(0.0, 0.0);
        for (k, &a) in amps.iter().enumerate() {
            let idx = sys
                .iter()
                .enumerate()
                .filter(|(j, _)| (k >> (sys.len() - 1 - j)) & 1 == 1)
                .fold(0usize, |acc, (_, &s)| acc | (1 << (n - 1 - s)));
            full[idx] = a;
        }
        ChainState::from_amplitudes(full)
    }

    /// Amplitudes on the system class, assuming clean ancillas.
    pub fn system_amplitudes(&self, state: &ChainState) -> Result<Vec<C64>> {
        self.check_register(state)?;
        let sys = self.sites_of(Sublattice::SYSTEM);
        let n = self.n_sites();
        Ok((0..1usize << sys.len())
            .map(|k| {
                let idx = sys
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| (k >> (sys.len() - 1 - j)) & 1 == 1)
                    .fold(0usize, |acc, (_, &s)| acc | (1 << (n - 1 - s)));
                state.amplitudes()[idx]
            })
            .collect())
    }

    fn check_register(&self, state: &ChainState) -> Result<()> {
        if state.n_qubits() != self.n_sites() {
            return Err(Error::InvalidParameter(format!(
                "state has {} qubits, the array has {}",
                state.n_qubits(),
                self.n_sites()
            )));
        }
        Ok(())
    }

    fn owners(&self, op: &LocalOperator, colour: usize) -> Result<Vec<[i64; 2]>> {
        let mut cells = BTreeSet::new();
        for &i in op.sites() {
            let s = self.site(i);
            if s.colour() != colour % 3 {
                return Err(Error::InvalidRegion(format!("site {i} is not alive after layer {colour}")));
            }
            cells.insert(s.cell);
        }
        Ok(cells.into_iter().collect())
    }

    /// `O -> V^dagger O V` for the system map `V` of layer `colour`, with `O`
    /// supported on sites of that colour.
    pub fn heisenberg_layer(&self, op: &mut LocalOperator, colour: usize) -> Result<()> {
        let mut map = HashMap::new();
        let mut gates = Vec::new();
        for cell in self.owners(op, colour)? {
            let (ins, outs) = self.hexagon_indices(cell);
            for j in 0..3 {
                map.insert(outs[j], ins[j]);
            }
            gates.push(ins);
        }
        op.relabel(|s| map[&s])?;
        for ins in gates {
            op.heisenberg(&self.placed, &ins)?;
        }
        Ok(())
    }

    /// `O -> V O V^dagger`, with `O` supported on the inputs of layer `colour`.
    pub fn push_forward_layer(&self, op: &mut LocalOperator, colour: usize) -> Result<()> {
        let mut cells = BTreeSet::new();
        for &i in op.sites() {
            let s = self.site(i);
            if (s.colour() + 1) % 3 != colour % 3 {
                return Err(Error::InvalidRegion(format!("site {i} is not an input of layer {colour}")));
            }
            cells.insert(self.reduce(s.consumer()));
        }
        let mut map = HashMap::new();
        for cell in cells {
            let (ins, outs) = self.hexagon_indices(cell);
            op.push_forward(&self.placed, &ins)?;
            for j in 0..3 {
                map.insert(ins[j], outs[j]);
            }
        }
        op.relabel(|s| map[&s])
    }

    /// Unwrapped backward light cone of `site` over `layers` layers, one set
    /// per time slice (latest first).
    fn cone(site: KagomeSite, layers: usize) -> Vec<BTreeSet<KagomeSite>> {
        let mut slices = vec![BTreeSet::from([site])];
        for _ in 0..layers {
            let mut prev = BTreeSet::new();
            for s in slices.last().expect("non-empty") {
                prev.extend(hexagon(s.cell).0);
            }
            slices.push(prev);
        }
        slices
    }

    /// Fails with [`Error::Wraparound`] unless the backward light cone of `a`
    /// over `cycles` embeds in the torus and `b` has no other image in it.
    pub fn check_window(&self, a: KagomeSite, b: KagomeSite, cycles: usize) -> Result<()> {
        let slices = Self::cone(a, LAYERS * cycles);
        for (k, slice) in slices.iter().enumerate() {
            let images: BTreeSet<usize> = slice.iter().map(|&s| self.site_index(s)).collect();
            if images.len() != slice.len() {
                return Err(Error::Wraparound(format!(
                    "light cone wraps the {}x{} torus {k} layers back",
                    self.n1, self.n2
                )));
            }
        }
        let last = slices.last().expect("non-empty");
        let target = self.site_index(b);
        if last.iter().any(|&s| s != b && self.site_index(s) == target) {
            return Err(Error::Wraparound(format!("site {b:?} aliases a light-cone site")));
        }
        Ok(())
    }

    fn check_system(site: KagomeSite) -> Result<()> {
        if site.sublattice() != Sublattice::SYSTEM {
            return Err(Error::InvalidRegion(format!("{site:?} is not a system site")));
        }
        Ok(())
    }

    /// `2^{-N} Tr(a_A(t) b_B)` over the system qubits, with `a` evolved for
    /// `cycles` cycles in the Heisenberg picture.
    pub fn correlator(
        &self,
        a: &QubitOp,
        site_a: KagomeSite,
        b: &QubitOp,
        site_b: KagomeSite,
        cycles: usize,
        allow_wrap: bool,
    ) -> Result<C64> {
        Self::check_system(site_a)?;
        Self::check_system(site_b)?;
        if !allow_wrap {
            self.check_window(site_a, site_b, cycles)?;
        }
        let total = LAYERS * cycles;
        let back = total / 2;
        let mut late = LocalOperator::single(self.site_index(site_a), a);
        for k in 0..back {
            self.heisenberg_layer(&mut late, (total - 1 - k) % 3)?;
        }
        let mut early = LocalOperator::single(self.site_index(site_b), b);
        for k in 0..total - back {
            self.push_forward_layer(&mut early, k % 3)?;
        }
        late.overlap(&early)
    }

    /// The ray of a correlator anchored at `site_a`: the worldline through it,
    /// traced back `3 cycles` gates.
    pub fn ray_for(&self, site_a: KagomeSite, cycles: usize) -> KagomeRay {
        let steps = LAYERS * cycles;
        let cell = add(site_a.cell, scale(site_a.axis.step(), -(steps as i64)));
        KagomeRay { axis: site_a.axis, site: KagomeSite::new(cell, site_a.axis), steps }
    }

    /// Channel prediction on the ray: `(1/2) Tr(b M^(3 cycles)(a))`.
    pub fn predicted_ray_correlator(&self, a: &QubitOp, b: &QubitOp, axis: Axis, cycles: usize) -> Result<C64> {
        predicted_ray_correlator(&self.gate, axis.direction(), a, b, LAYERS * cycles)
    }

    /// Brute-force correlators on every system site within `radius` unit
    /// cells of `anchor`, skipping sites that alias the light cone.
    pub fn correlation_grid(
        &self,
        a: &QubitOp,
        b: &QubitOp,
        anchor: KagomeSite,
        cycles: usize,
        radius: i64,
    ) -> Result<KagomeGrid> {
        Self::check_system(anchor)?;
        let slices = Self::cone(anchor, LAYERS * cycles);
        let total = LAYERS * cycles;
        let back = total / 2;
        let mut late = LocalOperator::single(self.site_index(anchor), a);
        for k in 0..back {
            self.heisenberg_layer(&mut late, (total - 1 - k) % 3)?;
        }
        let ray = self.ray_for(anchor, cycles);
        let mut entries = Vec::new();
        for i1 in -radius..=radius {
            for i2 in -radius..=radius {
                for axis in Axis::ALL {
                    let site = KagomeSite::new(add(anchor.cell, cell_offset(i1, i2)), axis);
                    if i1 == 0 && i2 == 0 && axis == anchor.axis {
                        self.check_window(anchor, site, cycles)?;
                    } else {
                        let target = self.site_index(site);
                        let last = slices.last().expect("non-empty");
                        if last.iter().any(|&s| s != site && self.site_index(s) == target) {
                            continue;
                        }
                    }
                    let mut early = LocalOperator::single(self.site_index(site), b);
                    for k in 0..total - back {
                        self.push_forward_layer(&mut early, k % 3)?;
                    }
                    let value = late.overlap(&early)?;
                    entries.push(KagomeEntry { i1, i2, axis, value, on_ray: site == ray.site });
                }
            }
        }
        Ok(KagomeGrid { n1: self.n1, n2: self.n2, anchor, cycles, entries })
    }

    /// The same circuit seen after a `2 pi / 3` rotation of the lattice: the
    /// torus must be symmetric (`n1 = n2`) and the gate's legs follow the
    /// axes.
    pub fn rotated(&self) -> Result<KagomeCircuit> {
        if self.n1 != self.n2 {
            return Err(Error::InvalidParameter("rotation needs n1 = n2".into()));
        }
        KagomeCircuit::new(self.n1, self.n2, rotate_gate(&self.gate))
    }
}

/// The gate that plays the role of `g` after the lattice rotation: new qubit
/// 1 (incoming `z`) is old qubit 2, and so on around the axes.
pub fn rotate_gate(g: &Gate3) -> Gate3 {
    let t = g.tensor().permute_legs([1, 2, 0, 5, 3, 4]);
    Gate3::from_matrix(*t.matrix()).expect("leg relabeling preserves unitarity")
}

/// Representative of `cell` in the half-open parallelogram spanned by
/// `n1 (1,-1)` and `n2 (1,2)`.
fn reduce_cell(n1: i64, n2: i64, c: [i64; 2]) -> [i64; 2] {
    let det = 3 * n1 * n2;
    let alpha = (2 * n2 * c[0] - n2 * c[1]).div_euclid(det);
    let beta = (n1 * c[0] + n1 * c[1]).div_euclid(det);
    [c[0] - alpha * n1 - beta * n2, c[1] + alpha * n1 - 2 * beta * n2]
}

/// A circuit whose one-cycle light cone fits in the torus.
pub fn build_kagome(n1: usize, n2: usize, gate: Gate3) -> Result<KagomeCircuit> {
    let c = KagomeCircuit::new(n1, n2, gate)?;
    let anchor = KagomeSite::new([1, 1], Axis::X);
    c.check_window(anchor, anchor, 1)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Pauli;

    #[test]
    fn torus_counts() {
        let c = KagomeCircuit::new(2, 1, Gate3::swap13()).unwrap();
        assert_eq!(c.n_cells(), 6);
        assert_eq!(c.n_sites(), 18);
        for colour in 0..3 {
            assert_eq!(c.layer_cells(colour).len(), 2);
            assert_eq!(c.sites_of(Sublattice::of_colour(colour)).len(), 6);
        }
        let [a1, a2] = c.lattice_vectors();
        assert_eq!(c.reduce(add(a1, [4, -2])), c.reduce([4, -2]));
        assert_eq!(c.reduce(add(a2, [-3, 7])), c.reduce([-3, 7]));
    }

    #[test]
    fn hexagon_is_opposite_pairs() {
        let (ins, outs) = hexagon([0, 0]);
        for j in 0..3 {
            let (p, q) = (ins[j].position(), outs[j].position());
            assert_eq!([p[0] + q[0], p[1] + q[1]], [0.0, 0.0]);
            assert_eq!(ins[j].consumer(), [0, 0]);
            assert_eq!(ins[j].colour(), 2);
        }
    }

    #[test]
    fn offsets_round_trip() {
        for i1 in -3..=3 {
            for i2 in -3..=3 {
                let d = cell_offset(i1, i2);
                assert_eq!(cell_colour(d), 0);
                assert_eq!(offset_coords(d), Some((i1, i2)));
            }
        }
        assert_eq!(offset_coords([1, 0]), None);
    }

    #[test]
    fn rotation_cycles_axes() {
        for axis in Axis::ALL {
            assert_eq!(rotate_cell(axis.step()), axis.rotated().step());
        }
        assert_eq!(cell_colour(rotate_cell([2, 0])), 2);
    }

    #[test]
    fn swap_gate_translates_along_axis() {
        let c = build_kagome(3, 3, Gate3::swap13()).unwrap();
        for axis in Axis::ALL {
            let site = KagomeSite::new([1, 1], axis);
            let mut op = LocalOperator::single(c.site_index(site), &QubitOp::z());
            for colour in (0..3).rev() {
                c.heisenberg_layer(&mut op, colour).unwrap();
                op.trim(1e-12).unwrap();
            }
            let ray = c.ray_for(site, 1);
            assert_eq!(op.sites(), &[c.site_index(ray.site)]);
            assert_eq!(op, LocalOperator::single(c.site_index(ray.site), &QubitOp::z()));
        }
    }

    #[test]
    fn small_torus_is_rejected() {
        assert!(matches!(build_kagome(1, 1, Gate3::swap13()), Err(Error::Wraparound(_))));
    }

    #[test]
    fn correlator_rejects_non_system_sites() {
        let c = build_kagome(3, 3, Gate3::swap13()).unwrap();
        let z = Pauli::Z.op();
        let red = KagomeSite::new([0, 0], Axis::X);
        let blue = KagomeSite::new([1, 1], Axis::X);
        assert!(c.correlator(&z, red, &z, blue, 1, false).is_err());
    }
}
