//! RHG lattice assembled from star clusters, with heralded fusion errors
//! propagated onto the central qubits.
//!
//! Coordinates are doubled integers. Primal cells sit at all-odd points,
//! primal qubits (face centres) have exactly two odd components and dual
//! qubits exactly one.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bsm_model::{DetectorModel, EncodingParams, FusionErrorProfile, FusionSampler, LossParams};
use crate::error::{check_probability, Error, Result};

pub type Coord = [i32; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub encoding: bool,
    pub pssl: bool,
    pub hic: bool,
    pub pnrd: bool,
    pub d: usize,
    pub eta: f64,
    pub p_fail: f64,
    pub enc_params: Option<EncodingParams>,
}

impl ModelConfig {
    pub fn unencoded(d: usize, eta: f64, p_fail: f64, pssl: bool) -> Self {
        Self {
            encoding: false,
            pssl,
            hic: true,
            pnrd: true,
            d,
            eta,
            p_fail,
            enc_params: None,
        }
    }

    pub fn encoded(params: EncodingParams, detector: DetectorModel, hic: bool, pssl: bool, d: usize, eta: f64) -> Self {
        Self {
            encoding: true,
            pssl,
            hic,
            pnrd: detector == DetectorModel::PnrdTwo,
            d,
            eta,
            p_fail: 0.0,
            enc_params: Some(params),
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn detector(&self) -> DetectorModel {
        if self.pnrd {
            DetectorModel::PnrdTwo
        } else {
            DetectorModel::OnOff
        }
    }

    /// Checks the invariants and forces HIC for the unencoded scheme.
    pub fn validated(mut self) -> Result<Self> {
        check_probability("eta", self.eta)?;
        check_probability("p_fail", self.p_fail)?;
        if self.d < 3 || self.d % 2 == 0 {
            return Err(Error::Config(format!("code distance must be odd and >= 3, got {}", self.d)));
        }
        if self.encoding && self.enc_params.is_none() {
            return Err(Error::Config("encoding enabled without (n, m, j)".into()));
        }
        if !self.encoding {
            self.hic = true;
            self.enc_params = None;
        }
        Ok(self)
    }

    pub fn sampler(&self) -> Result<FusionSampler> {
        let loss = LossParams::new(self.eta)?;
        match self.enc_params {
            Some(params) if self.encoding => FusionSampler::encoded(params, self.detector(), loss),
            _ => FusionSampler::unencoded(self.p_fail, loss),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XBoundary {
    Low,
    High,
}

#[derive(Debug, Clone)]
pub struct Qubit {
    pub coord: Coord,
    pub primal: bool,
    /// Primal cells this face belongs to (empty for dual qubits).
    pub cells: Vec<usize>,
    pub t_boundary: bool,
    pub x_boundary: Option<XBoundary>,
}

/// A step-1 fusion attaching one side microcluster to a star. The two side
/// qubits point along `axis` towards `neighbours`.
#[derive(Debug, Clone)]
pub struct Step1Slot {
    pub star: usize,
    pub axis: usize,
    pub neighbours: Vec<usize>,
}

/// A step-2 fusion between the side qubits of two adjacent stars. The
/// Hadamard always sits on the side qubit of the `lower` star.
#[derive(Debug, Clone, Copy)]
pub struct Step2Slot {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionSlot {
    Step1(usize),
    Step2(usize),
}

#[derive(Debug, Clone)]
pub struct RhgLattice {
    cells_per_axis: [usize; 3],
    qubits: Vec<Qubit>,
    index: HashMap<Coord, usize>,
    cells: Vec<Coord>,
    cell_faces: Vec<Vec<usize>>,
    step1: Vec<Step1Slot>,
    step2: Vec<Step2Slot>,
    x_sheet: Vec<usize>,
}

fn odd(v: i32) -> bool {
    v.rem_euclid(2) == 1
}

fn odd_count(c: Coord) -> usize {
    c.iter().filter(|&&v| odd(v)).count()
}

impl RhgLattice {
    /// Lattice for code distance `d`: `d - 1` cells across x and y and
    /// `4d + 1` along the simulated time axis.
    pub fn for_distance(d: usize) -> Self {
        Self::with_cells(d - 1, d - 1, 4 * d + 1)
    }

    /// x and t boundaries are primal (faces present), y boundaries dual.
    pub fn with_cells(cx: usize, cy: usize, ct: usize) -> Self {
        let lo = [0, 1, 0];
        let hi = [2 * cx as i32, 2 * cy as i32 - 1, 2 * ct as i32];
        let inside = |c: Coord| (0..3).all(|a| c[a] >= lo[a] && c[a] <= hi[a]);

        let mut cells = Vec::new();
        let mut cell_index = HashMap::new();
        let mut qubits = Vec::new();
        let mut index = HashMap::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for t in lo[2]..=hi[2] {
                    let c = [x, y, t];
                    match odd_count(c) {
                        3 => {
                            cell_index.insert(c, cells.len());
                            cells.push(c);
                        }
                        1 | 2 => {
                            index.insert(c, qubits.len());
                            qubits.push(Qubit {
                                coord: c,
                                primal: odd_count(c) == 2,
                                cells: Vec::new(),
                                t_boundary: false,
                                x_boundary: None,
                            });
                        }
                        _ => {}
                    }
                }
            }
        }

        let mut cell_faces = vec![Vec::with_capacity(6); cells.len()];
        for (ci, &c) in cells.iter().enumerate() {
            for axis in 0..3 {
                for s in [-1, 1] {
                    let mut f = c;
                    f[axis] += s;
                    if let Some(&qi) = index.get(&f) {
                        cell_faces[ci].push(qi);
                        qubits[qi].cells.push(ci);
                    }
                }
            }
        }
        let mut x_sheet = Vec::new();
        for (qi, q) in qubits.iter_mut().enumerate() {
            if !q.primal {
                continue;
            }
            let c = q.coord;
            q.t_boundary = !odd(c[2]) && (c[2] == lo[2] || c[2] == hi[2]);
            if !odd(c[0]) && c[0] == lo[0] {
                q.x_boundary = Some(XBoundary::Low);
                x_sheet.push(qi);
            } else if !odd(c[0]) && c[0] == hi[0] {
                q.x_boundary = Some(XBoundary::High);
            }
        }

        let mut step1 = Vec::new();
        let mut step2 = Vec::new();
        for (qi, q) in qubits.iter().enumerate() {
            for axis in 0..3 {
                // Star arms run along the odd axes of a primal qubit and the
                // even axes of a dual one.
                if odd(q.coord[axis]) != q.primal {
                    continue;
                }
                let mut neighbours = Vec::new();
                for s in [-1, 1] {
                    let mut n = q.coord;
                    n[axis] += s;
                    if inside(n) {
                        if let Some(&ni) = index.get(&n) {
                            neighbours.push(ni);
                            if s == 1 {
                                step2.push(Step2Slot { lower: qi, upper: ni });
                            }
                        }
                    }
                }
                step1.push(Step1Slot {
                    star: qi,
                    axis,
                    neighbours,
                });
            }
        }

        Self {
            cells_per_axis: [cx, cy, ct],
            qubits,
            index,
            cells,
            cell_faces,
            step1,
            step2,
            x_sheet,
        }
    }

    pub fn cells_per_axis(&self) -> [usize; 3] {
        self.cells_per_axis
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn qubit(&self, i: usize) -> &Qubit {
        &self.qubits[i]
    }

    pub fn qubit_at(&self, c: Coord) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, i: usize) -> Coord {
        self.cells[i]
    }

    pub fn cell_faces(&self, i: usize) -> &[usize] {
        &self.cell_faces[i]
    }

    pub fn step1_slots(&self) -> &[Step1Slot] {
        &self.step1
    }

    pub fn step2_slots(&self) -> &[Step2Slot] {
        &self.step2
    }

    /// Primal faces on the low-x boundary, used to judge logical errors.
    pub fn x_sheet(&self) -> &[usize] {
        &self.x_sheet
    }

    pub fn primal_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.qubits.iter().enumerate().filter(|(_, q)| q.primal).map(|(i, _)| i)
    }

    /// Deposits one fusion's heralded errors onto the central qubits.
    pub fn propagate(&self, slot: FusionSlot, profile: &FusionErrorProfile, hic: bool, records: &mut [QubitRecord]) {
        match slot {
            FusionSlot::Step1(i) => {
                let s = &self.step1[i];
                let (own, far) = if hic {
                    ((profile.q_sign, profile.sign_error), (profile.q_lett, profile.lett_error))
                } else {
                    ((profile.q_lett, profile.lett_error), (profile.q_sign, profile.sign_error))
                };
                records[s.star].deposit(own.0, own.1);
                for &n in &s.neighbours {
                    records[n].deposit(far.0, far.1);
                }
            }
            FusionSlot::Step2(i) => {
                let s = self.step2[i];
                records[s.lower].deposit(profile.q_sign, profile.sign_error);
                records[s.upper].deposit(profile.q_lett, profile.lett_error);
            }
        }
    }

    /// Violated primal cells for the given per-qubit error bits.
    pub fn syndrome_of(&self, errors: impl Fn(usize) -> bool) -> Syndrome {
        let violated_cells = (0..self.cells.len())
            .filter(|&c| self.cell_faces[c].iter().filter(|&&q| errors(q)).count() % 2 == 1)
            .collect();
        Syndrome { violated_cells }
    }

    /// Samples every fusion and central-qubit loss for one trial.
    pub fn run_trial<R: Rng + ?Sized>(&self, cfg: &ModelConfig, sampler: &FusionSampler, rng: &mut R) -> Trial {
        let mut records = vec![QubitRecord::default(); self.qubits.len()];
        let step1: Vec<FusionErrorProfile> = if cfg.pssl {
            vec![FusionErrorProfile::IDEAL; self.step1.len()]
        } else {
            (0..self.step1.len()).map(|_| sampler.sample(rng)).collect()
        };
        let step2: Vec<FusionErrorProfile> = (0..self.step2.len()).map(|_| sampler.sample(rng)).collect();
        for (i, p) in step1.iter().enumerate() {
            self.propagate(FusionSlot::Step1(i), p, cfg.hic, &mut records);
        }
        for (i, p) in step2.iter().enumerate() {
            self.propagate(FusionSlot::Step2(i), p, cfg.hic, &mut records);
        }
        if cfg.eta > 0.0 {
            for r in records.iter_mut() {
                if rng.gen::<f64>() < cfg.eta {
                    r.lost = true;
                    r.q_err = 0.5;
                    r.error = rng.gen::<bool>();
                }
            }
        }
        for (r, q) in records.iter_mut().zip(&self.qubits) {
            if q.t_boundary {
                *r = QubitRecord::default();
            }
        }
        let syndrome = self.syndrome_of(|q| records[q].error);
        Trial {
            records,
            syndrome,
            step1,
            step2,
        }
    }

    /// True when the residual error left by `correction` crosses the low-x
    /// boundary sheet an odd number of times.
    pub fn judge_logical_error(&self, actual: &[bool], correction: &[usize]) -> bool {
        let mut residual = actual.to_vec();
        for &q in correction {
            residual[q] ^= true;
        }
        self.x_sheet.iter().filter(|&&q| residual[q]).count() % 2 == 1
    }

    /// Plain-text dump of one trial: fusion profiles, deficient qubits and
    /// violated cells.
    pub fn debug_dump(&self, trial: &Trial) -> String {
        let mut out = String::new();
        for (i, p) in trial.step1.iter().enumerate() {
            if p.q_sign > 0.0 || p.q_lett > 0.0 {
                let s = &self.step1[i];
                let _ = writeln!(
                    out,
                    "step1 {i} star={:?} axis={} q_sign={} q_lett={} sign_err={} lett_err={}",
                    self.qubits[s.star].coord, s.axis, p.q_sign, p.q_lett, p.sign_error, p.lett_error
                );
            }
        }
        for (i, p) in trial.step2.iter().enumerate() {
            if p.q_sign > 0.0 || p.q_lett > 0.0 {
                let s = self.step2[i];
                let _ = writeln!(
                    out,
                    "step2 {i} {:?}-{:?} q_sign={} q_lett={} sign_err={} lett_err={}",
                    self.qubits[s.lower].coord, self.qubits[s.upper].coord, p.q_sign, p.q_lett, p.sign_error, p.lett_error
                );
            }
        }
        for (i, r) in trial.records.iter().enumerate() {
            if r.q_err > 0.0 || r.error {
                let _ = writeln!(
                    out,
                    "qubit {:?} primal={} error={} q_err={} lost={}",
                    self.qubits[i].coord, self.qubits[i].primal, r.error, r.q_err, r.lost
                );
            }
        }
        for &c in &trial.syndrome.violated_cells {
            let _ = writeln!(out, "violated {:?}", self.cells[c]);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QubitRecord {
    pub error: bool,
    pub q_err: f64,
    pub lost: bool,
}

impl QubitRecord {
    /// Folds in an independent error of probability `q` whose realised bit
    /// is `flip`.
    pub fn deposit(&mut self, q: f64, flip: bool) {
        if q > 0.0 {
            self.q_err = self.q_err * (1.0 - q) + q * (1.0 - self.q_err);
        }
        self.error ^= flip;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Syndrome {
    pub violated_cells: Vec<usize>,
}

impl Syndrome {
    pub fn is_empty(&self) -> bool {
        self.violated_cells.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub records: Vec<QubitRecord>,
    pub syndrome: Syndrome,
    pub step1: Vec<FusionErrorProfile>,
    pub step2: Vec<FusionErrorProfile>,
}

impl Trial {
    pub fn error_bits(&self) -> Vec<bool> {
        self.records.iter().map(|r| r.error).collect()
    }
}
