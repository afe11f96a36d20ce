//! Parameter sweeps: eigenvalue trajectories, state pairing between grid
//! points, and width-bifurcation reports.
//!
//! Eigenvalues returned per grid point carry no identity, so trajectories
//! are stitched together by matching eigenvectors between neighboring
//! points: the permutation maximizing the total bilinear overlap
//! `sum |phi_prev . phi_next|` continues each track.  Near an exceptional
//! point overlaps saturate (every vector collapses onto the defective
//! direction) and the pairing falls back to nearest eigenvalues; the record
//! for that step says so.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::matrix::CMatrix;
use crate::model::{ModelError, SystemConfig};
use crate::spectral::{self, Condition, EigenState, Spectrum, SpectralError};

/// Width-spread threshold for the dark-state report: a track is flagged when
/// its half width never leaves its bare value by more than this while the
/// overall spread is at least ten times larger.
pub const OBSERVER_TOL: f64 = 1e-2;

/// Exhaustive assignment is used up to this many states; larger systems use
/// a deterministic greedy matching.
const EXHAUSTIVE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum SweepError {
    /// The plan itself is inconsistent.
    Plan(&'static str),
    /// Hamiltonian assembly failed at one grid point.
    Model { index: usize, at: f64, source: ModelError },
    /// Diagonalization failed at one grid point.
    Spectral { index: usize, at: f64, source: SpectralError },
    /// Grid and spectra passed to assembly do not line up.
    Mismatch(&'static str),
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Plan(msg) => write!(f, "invalid sweep plan: {msg}"),
            Self::Model { index, at, source } => {
                write!(f, "grid point {index} (parameter {at}): {source}")
            }
            Self::Spectral { index, at, source } => {
                write!(f, "grid point {index} (parameter {at}): {source}")
            }
            Self::Mismatch(msg) => write!(f, "assembly mismatch: {msg}"),
        }
    }
}

impl core::error::Error for SweepError {}

/// Which knob the sweep turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// External parameter `a` entering the energy curves.
    A,
    /// Coupling mixing parameter `y` (y-parametrized law only).
    Y,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::Y => "y",
        }
    }
}

/// A linear grid over one parameter, everything else held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub config: SystemConfig,
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// For a `y` sweep: the fixed value of `a`.  Must be `None` for `a`
    /// sweeps (their `y`, if any, lives in the coupling law).
    pub fixed_other: Option<f64>,
}

impl SweepPlan {
    pub fn new(
        config: SystemConfig,
        param: SweepParam,
        start: f64,
        stop: f64,
        steps: usize,
        fixed_other: Option<f64>,
    ) -> Result<Self, SweepError> {
        let plan = Self { config, param, start, stop, steps, fixed_other };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        // NaN bounds must fail this check too
        if self.start.partial_cmp(&self.stop) != Some(core::cmp::Ordering::Less) {
            return Err(SweepError::Plan("start must be strictly below stop"));
        }
        if self.steps < 2 {
            return Err(SweepError::Plan("a sweep needs at least 2 grid points"));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(SweepError::Plan("sweep bounds must be finite"));
        }
        match self.param {
            SweepParam::A => {
                if self.fixed_other.is_some() {
                    return Err(SweepError::Plan("fixed_other only applies to y sweeps"));
                }
            }
            SweepParam::Y => {
                if self.config.coupling().y().is_none() {
                    return Err(SweepError::Plan("y sweep needs the y-parametrized coupling law"));
                }
                if self.start < 0.0 || self.stop > 1.0 {
                    return Err(SweepError::Plan("y sweep range must stay inside [0, 1]"));
                }
                if self.fixed_other.is_none() {
                    return Err(SweepError::Plan("y sweep needs fixed_other (the value of a)"));
                }
            }
        }
        Ok(())
    }

    /// Evenly spaced grid with exact endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let denom = (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + span * (i as f64 / denom)).collect()
    }

    /// Hamiltonian at one grid value.
    pub fn hamiltonian_at(&self, t: f64) -> Result<CMatrix, ModelError> {
        match self.param {
            SweepParam::A => self.config.hamiltonian(t),
            SweepParam::Y => {
                let a = self.fixed_other.expect("validated y sweep carries fixed_other");
                self.config.with_y(t)?.hamiltonian(a)
            }
        }
    }

    /// Diagonalized spectrum at one grid value.
    pub fn spectrum_at(&self, index: usize, t: f64) -> Result<Spectrum, SweepError> {
        let h = self
            .hamiltonian_at(t)
            .map_err(|source| SweepError::Model { index, at: t, source })?;
        spectral::eig_general(&h).map_err(|source| SweepError::Spectral { index, at: t, source })
    }
}

/// How one grid step was paired to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingRecord {
    /// `permutation[j] = l`: state slot `j` of the previous point continues
    /// as slot `l` of the next point.
    pub permutation: Vec<usize>,
    /// Nearest-eigenvalue fallback was used instead of vector overlaps.
    pub fallback: bool,
    /// A spectrum at either end of the step was near-defective.
    pub near_defective: bool,
}

/// A completed sweep: grid, one track per state, and the pairing trail.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    pub param: SweepParam,
    pub grid: Vec<f64>,
    /// `tracks[k][i]` is track `k` at grid point `i`; track order follows
    /// ascending `Re E` at the first grid point.
    pub tracks: Vec<Vec<EigenState>>,
    /// One record per grid step (`grid.len() - 1` of them).
    pub pairing_permutations: Vec<PairingRecord>,
    /// Bare half width of the level each track starts out dominated by.
    pub bare_gamma_half: Vec<f64>,
}

impl TrajectorySet {
    pub fn n_states(&self) -> usize {
        self.tracks.len()
    }

    /// True when any step needed the eigenvalue fallback.
    pub fn any_fallback(&self) -> bool {
        self.pairing_permutations.iter().any(|p| p.fallback)
    }
}

/// Runs the sweep sequentially: diagonalize every grid point, then stitch.
pub fn run_sweep(plan: &SweepPlan) -> Result<TrajectorySet, SweepError> {
    plan.validate()?;
    let grid = plan.grid();
    let spectra = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| plan.spectrum_at(i, t))
        .collect::<Result<Vec<_>, _>>()?;
    assemble_tracks(&plan.config, plan.param, grid, spectra)
}

/// Stitches precomputed spectra (one per grid point, same order) into
/// tracks.  Split out from [`run_sweep`] so callers may compute the spectra
/// in parallel; assembly itself is order-dependent and stays sequential.
pub fn assemble_tracks(
    config: &SystemConfig,
    param: SweepParam,
    grid: Vec<f64>,
    spectra: Vec<Spectrum>,
) -> Result<TrajectorySet, SweepError> {
    if grid.len() != spectra.len() {
        return Err(SweepError::Mismatch("one spectrum per grid point required"));
    }
    if grid.is_empty() {
        return Err(SweepError::Mismatch("empty grid"));
    }
    let n = spectra[0].n();
    if spectra.iter().any(|s| s.n() != n) {
        return Err(SweepError::Mismatch("state count changed across the grid"));
    }

    // First grid point fixes track order: ascending Re E (already sorted).
    let mut tracks: Vec<Vec<EigenState>> = (0..n).map(|_| Vec::new()).collect();
    for (k, track) in tracks.iter_mut().enumerate() {
        track.push(spectra[0].states[k].clone());
    }

    let mut pairing = Vec::with_capacity(grid.len().saturating_sub(1));
    let mut slots: Vec<usize> = (0..n).collect(); // track k sits in slot slots[k]
    for i in 1..grid.len() {
        let record = pair_states(&spectra[i - 1].states, &spectra[i].states);
        let step_defective = spectra[i - 1].condition == Condition::NearDefective
            || spectra[i].condition == Condition::NearDefective;
        for (k, track) in tracks.iter_mut().enumerate() {
            let next_slot = record.permutation[slots[k]];
            track.push(spectra[i].states[next_slot].clone());
            slots[k] = next_slot;
        }
        pairing.push(PairingRecord { near_defective: step_defective, ..record });
    }

    let bare_gamma_half = tracks
        .iter()
        .map(|track| {
            let first = &track[0];
            let mut best = 0usize;
            let mut best_w = -1.0_f64;
            for (j, &w) in first.mixing_sq.iter().enumerate() {
                if w > best_w {
                    best_w = w;
                    best = j;
                }
            }
            config.levels()[best].gamma_half
        })
        .collect();

    Ok(TrajectorySet { param, grid, tracks, pairing_permutations: pairing, bare_gamma_half })
}

/// Pairs the states of two neighboring grid points.
///
/// Maximizes the total bilinear overlap `sum |phi_prev . phi_next|`
/// (exhaustively for up to [`EXHAUSTIVE_LIMIT`] states, greedily beyond).
/// When any state on either side is near-defective the overlaps are
/// meaningless and the pairing minimizes `sum |delta E|` instead.
pub fn pair_states(prev: &[EigenState], next: &[EigenState]) -> PairingRecord {
    assert_eq!(prev.len(), next.len(), "state counts must match");
    let n = prev.len();
    let near_def = |s: &EigenState| !s.a_norm.is_finite() || s.a_norm > spectral::NORM_CEILING;
    let fallback = prev.iter().any(near_def) || next.iter().any(near_def);

    // cost[j][l]: larger is better for overlaps, so negate distances.
    let mut cost = vec![vec![0.0_f64; n]; n];
    for (j, p) in prev.iter().enumerate() {
        for (l, q) in next.iter().enumerate() {
            cost[j][l] = if fallback {
                -(p.value - q.value).norm()
            } else {
                spectral::bilinear(&p.vector, &q.vector).norm()
            };
        }
    }

    let permutation =
        if n <= EXHAUSTIVE_LIMIT { best_assignment_exhaustive(&cost) } else { best_assignment_greedy(&cost) };
    PairingRecord { permutation, fallback, near_defective: false }
}

/// Best assignment over all permutations, visited in lexicographic order so
/// ties resolve deterministically.
fn best_assignment_exhaustive(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut best_perm: Vec<usize> = (0..n).collect();
    let mut best_total = f64::NEG_INFINITY;
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn recurse(
        cost: &[Vec<f64>],
        current: &mut Vec<usize>,
        used: &mut [bool],
        total: f64,
        best_total: &mut f64,
        best_perm: &mut Vec<usize>,
    ) {
        let j = current.len();
        if j == cost.len() {
            if total > *best_total {
                *best_total = total;
                best_perm.clone_from(current);
            }
            return;
        }
        for l in 0..cost.len() {
            if used[l] {
                continue;
            }
            used[l] = true;
            current.push(l);
            recurse(cost, current, used, total + cost[j][l], best_total, best_perm);
            current.pop();
            used[l] = false;
        }
    }
    recurse(cost, &mut current, &mut used, 0.0, &mut best_total, &mut best_perm);
    best_perm
}

/// Greedy global matching: repeatedly take the best remaining pair, breaking
/// ties toward the smallest indices.
fn best_assignment_greedy(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut perm = vec![usize::MAX; n];
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; n];
    for _ in 0..n {
        let mut best = (0usize, 0usize);
        let mut best_c = f64::NEG_INFINITY;
        for j in 0..n {
            if row_used[j] {
                continue;
            }
            for l in 0..n {
                if col_used[l] {
                    continue;
                }
                if cost[j][l] > best_c {
                    best_c = cost[j][l];
                    best = (j, l);
                }
            }
        }
        perm[best.0] = best.1;
        row_used[best.0] = true;
        col_used[best.1] = true;
    }
    perm
}

/// Per-grid-point widths spread, energy gap, and rigidity floor, plus the
/// per-track dark-state flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationReport {
    /// `max_k Gamma_k/2 - min_k Gamma_k/2` at each grid point.
    pub delta_gamma_half: Vec<f64>,
    /// Smallest pairwise `|E_j - E_k|` at each grid point.
    pub energy_gap: Vec<f64>,
    /// Smallest phase rigidity at each grid point.
    pub min_rigidity: Vec<f64>,
    /// Track `k` kept its bare half width (within `observer_tol`) while the
    /// overall spread grew past `10 * observer_tol`: a trapped observer
    /// state that never picks up decay width.
    pub observer_flags: Vec<bool>,
    pub observer_tol: f64,
}

pub fn bifurcation_report(tracks: &TrajectorySet, observer_tol: f64) -> BifurcationReport {
    let m = tracks.grid.len();
    let n = tracks.n_states();
    let mut delta_gamma_half = Vec::with_capacity(m);
    let mut energy_gap = Vec::with_capacity(m);
    let mut min_rigidity = Vec::with_capacity(m);
    for i in 0..m {
        let mut g_lo = f64::INFINITY;
        let mut g_hi = f64::NEG_INFINITY;
        let mut rig = f64::INFINITY;
        for track in &tracks.tracks {
            let s = &track[i];
            g_lo = g_lo.min(s.gamma_half());
            g_hi = g_hi.max(s.gamma_half());
            rig = rig.min(s.rigidity);
        }
        let mut gap = f64::INFINITY;
        for j in 0..n {
            for k in (j + 1)..n {
                gap = gap.min((tracks.tracks[j][i].energy() - tracks.tracks[k][i].energy()).abs());
            }
        }
        delta_gamma_half.push(g_hi - g_lo);
        energy_gap.push(if gap.is_finite() { gap } else { 0.0 });
        min_rigidity.push(rig);
    }

    let max_spread = delta_gamma_half.iter().copied().fold(0.0_f64, f64::max);
    let spread_significant = max_spread > 10.0 * observer_tol;
    let observer_flags = (0..n)
        .map(|k| {
            if !spread_significant {
                return false;
            }
            let worst = tracks.tracks[k]
                .iter()
                .map(|s| (s.gamma_half() - tracks.bare_gamma_half[k]).abs())
                .fold(0.0_f64, f64::max);
            worst < observer_tol
        })
        .collect();

    BifurcationReport { delta_gamma_half, energy_gap, min_rigidity, observer_flags, observer_tol }
}
