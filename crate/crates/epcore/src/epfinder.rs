//! Locating exceptional points: parameter values where two eigenvalues and
//! their eigenvectors coalesce.
//!
//! Two routes:
//!
//! * **Analytic** ([`ep_condition_2level`]) — for two equal-width levels with
//!   a constant purely imaginary coupling `i*x`, eigenvalues coalesce exactly
//!   where `e1(a) - e2(a) = ±2x`; both branches are solved by bisection.
//! * **Scan** ([`find_eps_scan`]) — for everything else the smallest
//!   eigenvalue distance is minimized numerically: coarse grid, local
//!   refinement, then an ulp-level argmin pass.  That last pass matters: the
//!   evaluated gap near a coalescence behaves like `sqrt(machine eps)` per
//!   ulp of parameter, so smooth minimizers alone stall an order of
//!   magnitude above the acceptance threshold [`GAP_TOL`].

use alloc::vec::Vec;
use core::fmt;

use crate::model::{CouplingLaw, ModelError, SystemConfig};
use crate::spectral::{self, Spectrum};

/// A candidate counts as an exceptional point when the eigenvalue distance
/// falls below this.
pub const GAP_TOL: f64 = 1e-8;
/// ... and the smallest phase rigidity falls below this.
pub const RIGIDITY_TOL: f64 = 1e-3;
/// Candidates closer than this merge into one.
pub const MERGE_RADIUS: f64 = 1e-4;
/// Coarse scan resolution per axis.
pub const SCAN_POINTS: usize = 400;

/// Half width (in ulps) of the final argmin pass around a refined minimum.
const ULP_SCAN_RADIUS: i64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum EpError {
    /// The closed-form route does not cover this configuration.
    Unsupported(&'static str),
    Model(ModelError),
}

impl fmt::Display for EpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unsupported(msg) => write!(f, "unsupported for the closed-form route: {msg}"),
            Self::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EpError {}

impl From<ModelError> for EpError {
    fn from(e: ModelError) -> Self {
        Self::Model(e)
    }
}

/// How a candidate was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpMethod {
    /// Root of the closed-form coalescence condition.
    Analytic,
    /// Numerical gap minimization.
    ScanRefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EPCandidate {
    pub a_star: f64,
    /// Present when the coupling's mixing parameter was scanned too.
    pub y_star: Option<f64>,
    /// Eigenvalue distance at the candidate.
    pub gap: f64,
    /// Smallest phase rigidity at the candidate.
    pub min_rigidity: f64,
    pub method: EpMethod,
}

/// Which side of the coalescence condition a two-level system sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// `(e1 - e2)^2 > 4x^2`: eigenvalues split in energy, widths agree.
    LevelRepulsion,
    /// `(e1 - e2)^2 < 4x^2`: energies agree, widths bifurcate.
    WidthBifurcation,
    /// Within tolerance of the exceptional point itself.
    Boundary,
}

/// Extracts `(x, gamma_half)` when the closed-form route applies: two levels
/// with equal widths and a constant coupling.  Returns `x = 0` for a purely
/// real coupling (no coalescence on the real axis) and an error otherwise.
fn closed_form_context(config: &SystemConfig) -> Result<f64, EpError> {
    if config.n() != 2 {
        return Err(EpError::Unsupported("closed-form route needs exactly 2 levels"));
    }
    let levels = config.levels();
    if levels[0].gamma_half != levels[1].gamma_half {
        return Err(EpError::Unsupported("closed-form route needs equal widths"));
    }
    match config.coupling() {
        CouplingLaw::Constant { omega } => {
            if omega.re == 0.0 {
                Ok(omega.im.abs())
            } else if omega.im == 0.0 {
                // Real coupling: (e1-e2)^2 + 4w^2 > 0, no coalescence.
                Ok(0.0)
            } else {
                Err(EpError::Unsupported(
                    "constant coupling must be purely real or purely imaginary",
                ))
            }
        }
        _ => Err(EpError::Unsupported("closed-form route needs a constant coupling")),
    }
}

/// Solves the two-level coalescence condition `e1(a) - e2(a) = ±2x` over
/// `[a_lo, a_hi]` by bracketed bisection on both branches.
///
/// Requires two equal-width levels and a constant coupling; a purely real
/// coupling yields the empty list (no coalescence for real `omega`).
pub fn ep_condition_2level(
    config: &SystemConfig,
    a_lo: f64,
    a_hi: f64,
) -> Result<Vec<f64>, EpError> {
    let x = closed_form_context(config)?;
    if x == 0.0 {
        return Ok(Vec::new());
    }
    let levels = config.levels();
    let delta = |a: f64| -> Result<f64, EpError> {
        Ok(levels[0].curve.eval(a)? - levels[1].curve.eval(a)?)
    };

    let mut roots = Vec::new();
    for target in [2.0 * x, -2.0 * x] {
        let f = |a: f64| -> Result<f64, EpError> { Ok(delta(a)? - target) };
        scan_roots(&f, a_lo, a_hi, 512, &mut roots)?;
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(roots)
}

/// Collects roots of `f` over `[lo, hi]` by segment scanning plus bisection.
fn scan_roots<F>(f: &F, lo: f64, hi: f64, segments: usize, roots: &mut Vec<f64>) -> Result<(), EpError>
where
    F: Fn(f64) -> Result<f64, EpError>,
{
    let step = (hi - lo) / segments as f64;
    let mut a0 = lo;
    let mut f0 = f(a0)?;
    for k in 1..=segments {
        let a1 = if k == segments { hi } else { lo + step * k as f64 };
        let f1 = f(a1)?;
        if f0 == 0.0 {
            roots.push(a0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(f, a0, f0, a1)?);
        }
        a0 = a1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(a0);
    }
    Ok(())
}

fn bisect<F>(f: &F, mut lo: f64, mut flo: f64, mut hi: f64) -> Result<f64, EpError>
where
    F: Fn(f64) -> Result<f64, EpError>,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break; // interval exhausted at float resolution
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Eigenvalue distance at `(a, y)`; `None` when the model cannot be
/// evaluated there (curve domain) or the solver fails.
fn gap_at(config: &SystemConfig, a: f64, y: Option<f64>) -> Option<f64> {
    let owned;
    let cfg = match y {
        Some(yv) => {
            owned = config.with_y(yv).ok()?;
            &owned
        }
        None => config,
    };
    let h = cfg.hamiltonian(a).ok()?;
    if h.n() == 2 {
        // Closed form: distance = |sqrt((h11-h22)^2 + 4 h12 h21)|.
        let d = h[(0, 0)] - h[(1, 1)];
        Some((d * d + 4.0 * h[(0, 1)] * h[(1, 0)]).sqrt().norm())
    } else {
        Some(spectral::eig_general(&h).ok()?.min_gap())
    }
}

fn spectrum_at(config: &SystemConfig, a: f64, y: Option<f64>) -> Option<Spectrum> {
    let owned;
    let cfg = match y {
        Some(yv) => {
            owned = config.with_y(yv).ok()?;
            &owned
        }
        None => config,
    };
    spectral::eig_general(&cfg.hamiltonian(a).ok()?).ok()
}

fn min_rigidity(spec: &Spectrum) -> f64 {
    spec.states.iter().map(|s| s.rigidity).fold(f64::INFINITY, f64::min)
}

/// Golden-section minimization of `f` over `[lo, hi]`, run until the
/// interval is exhausted at float resolution; returns the best evaluated
/// point.  `f` returning `None` counts as +infinity.
fn golden_min<F>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64)
where
    F: Fn(f64) -> Option<f64>,
{
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let eval = |x: f64| f(x).unwrap_or(f64::INFINITY);
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    if !(lo < x1 && x1 < x2 && x2 < hi) {
        let (flo, fhi) = (eval(lo), eval(hi));
        return if flo <= fhi { (lo, flo) } else { (hi, fhi) };
    }
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..400 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            if !(lo < x1 && x1 < x2) {
                break;
            }
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            if !(x1 < x2 && x2 < hi) {
                break;
            }
            f2 = eval(x2);
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// Argmin of `f` over `x0 ± ULP_SCAN_RADIUS` ulps.  Near a coalescence the
/// evaluated gap is dominated by rounding and dips far below its smooth
/// envelope at specific ulps; this pass finds them deterministically.
fn ulp_argmin<F>(f: &F, x0: f64, f0: f64) -> (f64, f64)
where
    F: Fn(f64) -> Option<f64>,
{
    if !(x0.is_finite()) || x0.abs() < 1e-300 {
        return (x0, f0);
    }
    let bits = x0.to_bits() as i64;
    let mut best = (x0, f0);
    for k in -ULP_SCAN_RADIUS..=ULP_SCAN_RADIUS {
        let b = bits + k;
        if b <= 0 {
            continue;
        }
        let x = f64::from_bits(b as u64);
        if let Some(fx) = f(x) {
            // Strict improvement keeps the scan deterministic under ties.
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// Numerically locates exceptional points by minimizing the eigenvalue gap.
///
/// Scans `a` over `a_range`; when `y_range` is given (y-parametrized
/// coupling) the scan is two-dimensional.  Candidates must reach
/// `gap < GAP_TOL` *and* `min_rigidity < RIGIDITY_TOL`; nearby candidates
/// merge within [`MERGE_RADIUS`].  An empty result means nothing qualified.
pub fn find_eps_scan(
    config: &SystemConfig,
    a_range: (f64, f64),
    y_range: Option<(f64, f64)>,
) -> Vec<EPCandidate> {
    match y_range {
        None => scan_1d(config, a_range),
        Some(yr) => scan_2d(config, a_range, yr),
    }
}

fn scan_1d(config: &SystemConfig, (a_lo, a_hi): (f64, f64)) -> Vec<EPCandidate> {
    let f = |a: f64| gap_at(config, a, None);
    let m = SCAN_POINTS;
    let xs: Vec<f64> =
        (0..=m).map(|i| a_lo + (a_hi - a_lo) * (i as f64 / m as f64)).collect();
    let gs: Vec<f64> = xs.iter().map(|&a| f(a).unwrap_or(f64::INFINITY)).collect();

    let mut candidates: Vec<EPCandidate> = Vec::new();
    for i in 0..=m {
        let left_ok = i == 0 || gs[i] <= gs[i - 1];
        let right_ok = i == m || gs[i] <= gs[i + 1];
        if !(left_ok && right_ok) || !gs[i].is_finite() {
            continue;
        }
        let lo = if i == 0 { xs[0] } else { xs[i - 1] };
        let hi = if i == m { xs[m] } else { xs[i + 1] };
        let (a1, g1) = golden_min(&f, lo, hi);
        let (a_star, gap) = ulp_argmin(&f, a1, g1);
        if gap >= GAP_TOL {
            continue;
        }
        let Some(spec) = spectrum_at(config, a_star, None) else { continue };
        let rig = min_rigidity(&spec);
        if rig >= RIGIDITY_TOL {
            continue;
        }
        merge_candidate(
            &mut candidates,
            EPCandidate { a_star, y_star: None, gap, min_rigidity: rig, method: EpMethod::ScanRefined },
        );
    }
    candidates.sort_by(|p, q| p.a_star.total_cmp(&q.a_star));
    candidates
}

fn scan_2d(
    config: &SystemConfig,
    (a_lo, a_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
) -> Vec<EPCandidate> {
    let f = |a: f64, y: f64| gap_at(config, a, Some(y));
    let m = SCAN_POINTS;
    let ax: Vec<f64> =
        (0..=m).map(|i| a_lo + (a_hi - a_lo) * (i as f64 / m as f64)).collect();
    let yx: Vec<f64> =
        (0..=m).map(|j| y_lo + (y_hi - y_lo) * (j as f64 / m as f64)).collect();
    let mut g = alloc::vec![alloc::vec![f64::INFINITY; m + 1]; m + 1];
    for (i, &a) in ax.iter().enumerate() {
        for (j, &y) in yx.iter().enumerate() {
            g[i][j] = f(a, y).unwrap_or(f64::INFINITY);
        }
    }

    let mut candidates: Vec<EPCandidate> = Vec::new();
    for i in 0..=m {
        for j in 0..=m {
            if !g[i][j].is_finite() {
                continue;
            }
            let mut is_min = true;
            'neigh: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii > m as i64 || jj > m as i64 {
                        continue;
                    }
                    if g[ii as usize][jj as usize] < g[i][j] {
                        is_min = false;
                        break 'neigh;
                    }
                }
            }
            if !is_min {
                continue;
            }
            let (a_star, y_star, gap) = refine_2d(
                &f,
                ax[i],
                yx[j],
                (a_hi - a_lo) / m as f64,
                (y_hi - y_lo) / m as f64,
                (a_lo, a_hi),
                (y_lo, y_hi),
            );
            if gap >= GAP_TOL {
                continue;
            }
            let Some(spec) = spectrum_at(config, a_star, Some(y_star)) else { continue };
            let rig = min_rigidity(&spec);
            if rig >= RIGIDITY_TOL {
                continue;
            }
            merge_candidate(
                &mut candidates,
                EPCandidate {
                    a_star,
                    y_star: Some(y_star),
                    gap,
                    min_rigidity: rig,
                    method: EpMethod::ScanRefined,
                },
            );
        }
    }
    candidates.sort_by(|p, q| p.a_star.total_cmp(&q.a_star).then(p.y_star.unwrap_or(0.0).total_cmp(&q.y_star.unwrap_or(0.0))));
    candidates
}

/// Compass pattern search with shrinking steps, then an ulp pass along `a`.
#[allow(clippy::too_many_arguments)]
fn refine_2d<F>(
    f: &F,
    mut a: f64,
    mut y: f64,
    mut step_a: f64,
    mut step_y: f64,
    (a_lo, a_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
) -> (f64, f64, f64)
where
    F: Fn(f64, f64) -> Option<f64>,
{
    let eval = |a: f64, y: f64| f(a, y).unwrap_or(f64::INFINITY);
    let mut best = eval(a, y);
    for _ in 0..10_000 {
        if step_a.max(step_y) < 1e-14 {
            break;
        }
        let moves = [
            (a - step_a, y),
            (a + step_a, y),
            (a, y - step_y),
            (a, y + step_y),
        ];
        let mut improved = false;
        for (na, ny) in moves {
            if na < a_lo || na > a_hi || ny < y_lo || ny > y_hi {
                continue;
            }
            let fv = eval(na, ny);
            if fv < best {
                best = fv;
                a = na;
                y = ny;
                improved = true;
            }
        }
        if !improved {
            step_a *= 0.5;
            step_y *= 0.5;
        }
    }
    let (a_star, gap) = ulp_argmin(&|x| f(x, y), a, best);
    (a_star, y, gap)
}

fn merge_candidate(candidates: &mut Vec<EPCandidate>, new: EPCandidate) {
    for c in candidates.iter_mut() {
        let da = c.a_star - new.a_star;
        let dy = c.y_star.unwrap_or(0.0) - new.y_star.unwrap_or(0.0);
        if libm::sqrt(da * da + dy * dy) < MERGE_RADIUS {
            if new.gap < c.gap {
                *c = new;
            }
            return;
        }
    }
    candidates.push(new);
}

/// Analytic route when it applies, scan otherwise.
///
/// Analytic candidates are accepted because they satisfy the coalescence
/// condition algebraically; their `gap` and `min_rigidity` fields report the
/// evaluated evidence at the nearest representable parameter.  When the exact
/// root is not representable that evidence can sit slightly above [`GAP_TOL`]
/// (the evaluated gap moves in steps of ~sqrt(ulp) per parameter ulp), which
/// is precisely the case the strict scan filter rejects.
pub fn locate_eps(
    config: &SystemConfig,
    a_range: (f64, f64),
    y_range: Option<(f64, f64)>,
) -> Vec<EPCandidate> {
    if y_range.is_none() {
        if let Ok(roots) = ep_condition_2level(config, a_range.0, a_range.1) {
            return roots
                .into_iter()
                .map(|a| {
                    // Polish by a few ulps: the bisection root can sit one
                    // float away from where the evaluated gap bottoms out.
                    let g0 = gap_at(config, a, None).unwrap_or(f64::INFINITY);
                    let (a_star, gap) = ulp_argmin(&|x| gap_at(config, x, None), a, g0);
                    let rig = spectrum_at(config, a_star, None)
                        .map(|s| min_rigidity(&s))
                        .unwrap_or(f64::INFINITY);
                    EPCandidate {
                        a_star,
                        y_star: None,
                        gap,
                        min_rigidity: rig,
                        method: EpMethod::Analytic,
                    }
                })
                .collect();
        }
    }
    find_eps_scan(config, a_range, y_range)
}

/// Classifies a two-level configuration at parameter `a` against the
/// coalescence boundary `(e1 - e2)^2 = 4x^2`; same preconditions as
/// [`ep_condition_2level`], with a purely real coupling always reporting
/// level repulsion.
pub fn classify_regime(config: &SystemConfig, a: f64) -> Result<RegimeLabel, EpError> {
    let x = closed_form_context(config)?;
    let levels = config.levels();
    let delta = levels[0].curve.eval(a)? - levels[1].curve.eval(a)?;
    let d = delta.abs() - 2.0 * x;
    if d.abs() <= GAP_TOL {
        Ok(RegimeLabel::Boundary)
    } else if d > 0.0 {
        Ok(RegimeLabel::LevelRepulsion)
    } else {
        Ok(RegimeLabel::WidthBifurcation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EnergyCurve, LevelSpec};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level(w: Complex64) -> SystemConfig {
        SystemConfig::pair(
            LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::linear(0.0, 1.0), -0.5).unwrap(),
            CouplingLaw::constant(w),
        )
        .unwrap()
    }

    #[test]
    fn analytic_roots_of_the_linear_family() {
        // e1 - e2 = 1 - 1.5a = ±1  =>  a = 0 and a = 4/3.
        let cfg = two_level(c(0.0, 0.5));
        let roots = ep_condition_2level(&cfg, -0.5, 2.0).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.0).abs() < 1e-12);
        assert!((roots[1] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn real_coupling_has_no_coalescence() {
        let cfg = two_level(c(0.5, 0.0));
        assert!(ep_condition_2level(&cfg, -0.5, 2.0).unwrap().is_empty());
    }

    #[test]
    fn closed_form_route_rejects_what_it_cannot_solve() {
        // mixed complex constant coupling
        let cfg = two_level(c(0.3, 0.4));
        assert!(matches!(ep_condition_2level(&cfg, 0.0, 2.0), Err(EpError::Unsupported(_))));
        // non-constant law
        let cfg = SystemConfig::pair(
            LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::linear(0.0, 1.0), -0.5).unwrap(),
            CouplingLaw::gaussian(c(0.0, 0.5)),
        )
        .unwrap();
        assert!(matches!(ep_condition_2level(&cfg, 0.0, 2.0), Err(EpError::Unsupported(_))));
        // unequal widths
        let cfg = SystemConfig::pair(
            LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.53).unwrap(),
            LevelSpec::new(EnergyCurve::linear(0.0, 1.0), -0.55).unwrap(),
            CouplingLaw::constant(c(0.0, 0.5)),
        )
        .unwrap();
        assert!(matches!(ep_condition_2level(&cfg, 0.0, 2.0), Err(EpError::Unsupported(_))));
    }

    #[test]
    fn scan_accepts_only_sub_threshold_gaps() {
        // The family has coalescences at a = 0 and a = 4/3.  At a = 0 the
        // parameter is representable and the evaluated gap reaches 0 exactly.
        // 4/3 is not representable: over every float near it the evaluated
        // gap bottoms out at ~1.5e-8 (one rounding step of e1 - e2 moves the
        // gap by ~sqrt(ulp)), which is above GAP_TOL, so the strict scan
        // filter rejects that minimum by design.
        let cfg = two_level(c(0.0, 0.5));
        let found = find_eps_scan(&cfg, (-0.2, 1.6), None);
        assert_eq!(found.len(), 1, "candidates: {found:?}");
        assert!(found[0].a_star.abs() < 1e-6);
        assert!(found[0].gap < GAP_TOL);
        assert!(found[0].min_rigidity < RIGIDITY_TOL);
        assert_eq!(found[0].method, EpMethod::ScanRefined);

        // Document the floor at the non-representable root.
        let mut floor = f64::INFINITY;
        let bits = (4.0f64 / 3.0).to_bits() as i64;
        for k in -2048i64..=2048 {
            let a = f64::from_bits((bits + k) as u64);
            if let Some(g) = gap_at(&cfg, a, None) {
                floor = floor.min(g);
            }
        }
        assert!(floor > GAP_TOL, "floor {floor:e} unexpectedly below tolerance");
        assert!(floor < 100.0 * GAP_TOL, "floor {floor:e} unexpectedly large");
    }

    #[test]
    fn scan_reports_nothing_for_real_coupling() {
        let cfg = two_level(c(0.5, 0.0));
        assert!(find_eps_scan(&cfg, (-0.2, 1.6), None).is_empty());
    }

    #[test]
    fn locate_prefers_the_analytic_route() {
        let cfg = two_level(c(0.0, 0.5));
        let found = locate_eps(&cfg, (-0.5, 2.0), None);
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|cand| cand.method == EpMethod::Analytic));
        assert!(found[0].a_star.abs() < 1e-12);
        assert!((found[1].a_star - 4.0 / 3.0).abs() < 1e-12);
        // Rigidity collapses at both roots; the evaluated gap reaches 0 only
        // where the root is representable (see scan_accepts_only_sub_threshold_gaps).
        assert!(found.iter().all(|cand| cand.min_rigidity < RIGIDITY_TOL));
        assert!(found[0].gap < GAP_TOL);
        assert!(found[1].gap < 100.0 * GAP_TOL);
    }

    #[test]
    fn regime_classification_across_the_family() {
        let cfg = two_level(c(0.0, 0.5));
        assert_eq!(classify_regime(&cfg, 0.5).unwrap(), RegimeLabel::WidthBifurcation);
        assert_eq!(classify_regime(&cfg, 1.8).unwrap(), RegimeLabel::LevelRepulsion);
        assert_eq!(classify_regime(&cfg, -0.5).unwrap(), RegimeLabel::LevelRepulsion);
        let roots = ep_condition_2level(&cfg, 1.0, 2.0).unwrap();
        assert_eq!(classify_regime(&cfg, roots[0]).unwrap(), RegimeLabel::Boundary);
        // purely real coupling: always repulsion
        let real = two_level(c(0.5, 0.0));
        assert_eq!(classify_regime(&real, 0.5).unwrap(), RegimeLabel::LevelRepulsion);
    }
}
