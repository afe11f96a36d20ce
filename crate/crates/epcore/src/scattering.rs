//! Two-resonance scattering: unitary S matrix and elastic cross section.
//!
//! For resonance positions `E_i` and widths `Gamma_i <= 0`,
//!
//! ```text
//! S(E) = prod_i (E - E_i + i*Gamma_i/2) / (E - E_i - i*Gamma_i/2)
//! ```
//!
//! is unimodular on the real energy axis, and the cross section
//! `sigma = |1 - S|^2` lies in `[0, 4]` with fully resolved peaks touching 4
//! exactly.  When the two resonances coalesce the product degenerates; the
//! double-pole form below is its algebraic limit and keeps `|S| = 1` exactly,
//! producing the characteristic zero at the coalesced position flanked by
//! two maxima of 4 at `E_d ± Gamma_d/2`.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::sweep::{self, SweepError, SweepParam, SweepPlan};

/// A positive width up to this size is treated as rounding noise and
/// clamped to zero.
pub const WIDTH_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ScatteringError {
    /// A width came out positive beyond rounding noise.
    PositiveWidth { gamma: f64 },
    /// The surface needs a two-level system.
    WrongStateCount { n: usize },
    Sweep(SweepError),
    /// The surface needs a `y` sweep plan.
    NotAYSweep,
}

impl fmt::Display for ScatteringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PositiveWidth { gamma } => {
                write!(f, "resonance width must be <= 0, got Gamma = {gamma}")
            }
            Self::WrongStateCount { n } => {
                write!(f, "cross-section surface needs 2 states, got {n}")
            }
            Self::Sweep(e) => write!(f, "{e}"),
            Self::NotAYSweep => write!(f, "cross-section surface needs a y sweep plan"),
        }
    }
}

impl core::error::Error for ScatteringError {}

impl From<SweepError> for ScatteringError {
    fn from(e: SweepError) -> Self {
        Self::Sweep(e)
    }
}

/// Two resonances: positions `E_i`, full widths `Gamma_i <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePair {
    pub e1: f64,
    pub gamma1: f64,
    pub e2: f64,
    pub gamma2: f64,
}

impl ResonancePair {
    pub fn new(e1: f64, gamma1: f64, e2: f64, gamma2: f64) -> Result<Self, ScatteringError> {
        Ok(Self {
            e1,
            gamma1: checked_width(gamma1)?,
            e2,
            gamma2: checked_width(gamma2)?,
        })
    }

    /// From complex eigenvalues `E + i*Gamma/2`.
    pub fn from_eigenvalues(v1: Complex64, v2: Complex64) -> Result<Self, ScatteringError> {
        Self::new(v1.re, 2.0 * v1.im, v2.re, 2.0 * v2.im)
    }

    pub fn max_abs_gamma(&self) -> f64 {
        self.gamma1.abs().max(self.gamma2.abs())
    }
}

fn checked_width(gamma: f64) -> Result<f64, ScatteringError> {
    if !gamma.is_finite() || gamma > WIDTH_CLAMP {
        return Err(ScatteringError::PositiveWidth { gamma });
    }
    Ok(if gamma > 0.0 { 0.0 } else { gamma })
}

fn factor(e: f64, e_i: f64, gamma_i: f64) -> Complex64 {
    if gamma_i == 0.0 {
        // A zero-width resonance contributes nothing; this also avoids the
        // 0/0 at e == e_i.
        return Complex64::new(1.0, 0.0);
    }
    Complex64::new(e - e_i, 0.5 * gamma_i) / Complex64::new(e - e_i, -0.5 * gamma_i)
}

/// Unimodular two-resonance S matrix at real energy `e`.
pub fn s_matrix(e: f64, pair: &ResonancePair) -> Complex64 {
    factor(e, pair.e1, pair.gamma1) * factor(e, pair.e2, pair.gamma2)
}

/// Algebraic limit of [`s_matrix`] for two coalesced resonances at `e_d`
/// with common width `gamma_d`: the single resonance factor squared.
pub fn s_matrix_double_pole(e: f64, e_d: f64, gamma_d: f64) -> Complex64 {
    let f = factor(e, e_d, gamma_d);
    f * f
}

/// Elastic cross section `|1 - S|^2` at one energy.
pub fn cross_section_at(e: f64, pair: &ResonancePair) -> f64 {
    (Complex64::new(1.0, 0.0) - s_matrix(e, pair)).norm_sqr()
}

/// Cross section plus the S values it came from, over an energy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionGrid {
    pub energies: Vec<f64>,
    pub sigma: Vec<f64>,
    pub s_values: Vec<Complex64>,
}

pub fn cross_section(energies: &[f64], pair: &ResonancePair) -> CrossSectionGrid {
    let s_values: Vec<Complex64> = energies.iter().map(|&e| s_matrix(e, pair)).collect();
    let sigma = s_values.iter().map(|s| (Complex64::new(1.0, 0.0) - s).norm_sqr()).collect();
    CrossSectionGrid { energies: energies.to_vec(), sigma, s_values }
}

/// Double-pole counterpart of [`cross_section`].
pub fn cross_section_double_pole(energies: &[f64], e_d: f64, gamma_d: f64) -> CrossSectionGrid {
    let s_values: Vec<Complex64> =
        energies.iter().map(|&e| s_matrix_double_pole(e, e_d, gamma_d)).collect();
    let sigma = s_values.iter().map(|s| (Complex64::new(1.0, 0.0) - s).norm_sqr()).collect();
    CrossSectionGrid { energies: energies.to_vec(), sigma, s_values }
}

/// Evenly spaced energy grid spanning
/// `[min E - 3 max|Gamma|, max E + 3 max|Gamma|]` over the given pairs.
pub fn default_energy_grid(pairs: &[ResonancePair], points: usize) -> Vec<f64> {
    assert!(points >= 2, "energy grid needs at least 2 points");
    let mut e_lo = f64::INFINITY;
    let mut e_hi = f64::NEG_INFINITY;
    let mut g_max = 0.0_f64;
    for p in pairs {
        e_lo = e_lo.min(p.e1.min(p.e2));
        e_hi = e_hi.max(p.e1.max(p.e2));
        g_max = g_max.max(p.max_abs_gamma());
    }
    if !e_lo.is_finite() || !e_hi.is_finite() {
        e_lo = 0.0;
        e_hi = 1.0;
    }
    let pad = if g_max > 0.0 { 3.0 * g_max } else { 1.0 };
    let (lo, hi) = (e_lo - pad, e_hi + pad);
    let denom = (points - 1) as f64;
    (0..points).map(|i| lo + (hi - lo) * (i as f64 / denom)).collect()
}

/// Cross section as a function of the coupling mixing parameter `y` (rows)
/// and energy (columns), for a two-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionSurface {
    pub y: Vec<f64>,
    pub energies: Vec<f64>,
    /// `sigma[row][col]` at `(y[row], energies[col])`.
    pub sigma: Vec<Vec<f64>>,
}

/// Runs the `y` sweep of `plan` and evaluates the cross section at every
/// `(y, E)` point.  With a single-row grid this degenerates to
/// [`cross_section`] at that `y`.
pub fn cross_section_surface(
    plan: &SweepPlan,
    energies: &[f64],
) -> Result<CrossSectionSurface, ScatteringError> {
    if plan.param != SweepParam::Y {
        return Err(ScatteringError::NotAYSweep);
    }
    let ts = sweep::run_sweep(plan)?;
    surface_from_tracks(&ts.grid, |i| {
        ResonancePair::from_eigenvalues(ts.tracks[0][i].value, ts.tracks[1][i].value)
    }, ts.n_states(), energies)
}

fn surface_from_tracks<F>(
    grid: &[f64],
    pair_at: F,
    n_states: usize,
    energies: &[f64],
) -> Result<CrossSectionSurface, ScatteringError>
where
    F: Fn(usize) -> Result<ResonancePair, ScatteringError>,
{
    if n_states != 2 {
        return Err(ScatteringError::WrongStateCount { n: n_states });
    }
    let mut sigma = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let pair = pair_at(i)?;
        sigma.push(energies.iter().map(|&e| cross_section_at(e, &pair)).collect());
    }
    Ok(CrossSectionSurface { y: grid.to_vec(), energies: energies.to_vec(), sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingLaw, EnergyCurve, LevelSpec, SystemConfig};

    #[test]
    fn width_validation_and_clamping() {
        assert!(ResonancePair::new(0.0, 0.1, 1.0, -0.5).is_err());
        let p = ResonancePair::new(0.0, 5e-13, 1.0, -0.5).unwrap();
        assert_eq!(p.gamma1, 0.0);
        let p = ResonancePair::from_eigenvalues(
            Complex64::new(0.3, -0.2),
            Complex64::new(0.7, -0.6),
        )
        .unwrap();
        assert_eq!(p.gamma1, -0.4);
        assert_eq!(p.gamma2, -1.2);
    }

    #[test]
    fn s_is_unimodular_on_the_real_axis() {
        let pair = ResonancePair::new(0.3, -0.4, 0.7, -1.2).unwrap();
        for &e in &default_energy_grid(&[pair], 801) {
            let s = s_matrix(e, &pair);
            assert!((s.norm() - 1.0).abs() < 1e-14, "|S({e})| = {}", s.norm());
        }
    }

    #[test]
    fn sigma_stays_in_range_and_resolved_peaks_reach_four() {
        // Far-separated narrow resonances: the peak at each position is
        // barely disturbed by the other factor.
        let pair = ResonancePair::new(0.0, -0.1, 100.0, -0.1).unwrap();
        let sigma_peak = cross_section_at(0.0, &pair);
        assert!(sigma_peak > 3.99 && sigma_peak <= 4.0 + 1e-9);
        for &e in &default_energy_grid(&[pair], 2001) {
            let s = cross_section_at(e, &pair);
            assert!((0.0..=4.0 + 1e-9).contains(&s));
        }
    }

    #[test]
    fn zero_width_factor_is_inert() {
        let pair = ResonancePair::new(0.5, 0.0, 1.0, -0.2).unwrap();
        // no NaN at e == e1
        let s = s_matrix(0.5, &pair);
        assert!(s.re.is_finite() && s.im.is_finite());
        let lone = ResonancePair::new(1.0, -0.2, 99.0, 0.0).unwrap();
        assert_eq!(s_matrix(0.7, &lone), factor(0.7, 1.0, -0.2));
    }

    #[test]
    fn double_pole_zero_and_maxima_are_exact() {
        let (e_d, gamma_d) = (0.85, -0.9);
        // sigma vanishes exactly at the coalesced position...
        assert_eq!(cross_section_double_pole(&[e_d], e_d, gamma_d).sigma[0], 0.0);
        // ...and the flanking maxima at E_d ± Gamma_d/2 are exactly 4.
        for e in [e_d - 0.5 * gamma_d.abs(), e_d + 0.5 * gamma_d.abs()] {
            let s = cross_section_double_pole(&[e], e_d, gamma_d).sigma[0];
            assert_eq!(s, 4.0);
        }
    }

    #[test]
    fn double_pole_is_the_limit_of_the_product() {
        let (e_d, gamma_d) = (0.6, -0.8);
        let e = 0.43;
        let mut prev_err = f64::INFINITY;
        for delta in [1e-4, 1e-6, 1e-8] {
            let pair = ResonancePair::new(e_d - delta, gamma_d, e_d + delta, gamma_d).unwrap();
            let err = (s_matrix(e, &pair) - s_matrix_double_pole(e, e_d, gamma_d)).norm();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 1e-7);
    }

    #[test]
    fn default_grid_spans_three_widths() {
        let pair = ResonancePair::new(0.0, -0.5, 1.0, -1.0).unwrap();
        let g = default_energy_grid(&[pair], 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], -3.0);
        assert_eq!(g[10], 4.0);
    }

    #[test]
    fn surface_single_row_matches_cross_section() {
        let cfg = SystemConfig::pair(
            LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::linear(0.0, 1.0), -0.5).unwrap(),
            CouplingLaw::y_parametrized(0.5, 0.0).unwrap(),
        )
        .unwrap();
        let plan = SweepPlan::new(cfg.clone(), SweepParam::Y, 0.3, 0.7, 2, Some(0.7)).unwrap();
        let energies: Vec<f64> = (0..50).map(|i| -1.0 + 0.06 * i as f64).collect();
        let surf = cross_section_surface(&plan, &energies).unwrap();
        assert_eq!(surf.sigma.len(), 2);
        // row 0 equals a direct cross section at y = 0.3
        let h = cfg.with_y(0.3).unwrap().hamiltonian(0.7).unwrap();
        let (v1, v2) = crate::spectral::eig2_closed_form(&h);
        let pair = ResonancePair::from_eigenvalues(v1, v2).unwrap();
        for (j, &e) in energies.iter().enumerate() {
            assert!((surf.sigma[0][j] - cross_section_at(e, &pair)).abs() < 1e-12);
        }
    }
}
