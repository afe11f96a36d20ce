//! Eigendecomposition of complex-symmetric matrices with biorthogonal
//! normalization and per-state diagnostics.
//!
//! A complex-symmetric matrix (`H = H^T`, not Hermitian) has eigenvectors
//! that are orthogonal under the *bilinear* product `u . v = sum(u_i v_i)`
//! with no conjugation.  We normalize to `v . v = 1`, which makes the
//! Hermitian norm `A = <v|v> >= 1` a measure of non-orthogonality: `A = 1`
//! for real vectors, `A -> inf` as two eigenstates coalesce at an
//! exceptional point.  The phase rigidity `r = |v . v| / <v|v> = 1/A` drops
//! from 1 to 0 on the same approach.
//!
//! The solver is a cyclic Jacobi iteration built from complex-orthogonal
//! rotations `G = [[c, s], [-s, c]]` with `c^2 + s^2 = 1` (complex `c`, `s`).
//! For a pivot `(p, q)` the annihilation condition is the quadratic
//! `t^2 + 2*tau*t - 1 = 0`, `tau = (a_qq - a_pp) / (2 a_pq)`, and we take the
//! smaller root `t = 1/(tau ± sqrt(tau^2 + 1))` for stability.  The rotated
//! diagonal is updated through the exact identities `a_pp - t*a_pq` and
//! `a_qq + t*a_pq`, which preserve the trace to rounding error even when the
//! rotation itself is enormous.  When `tau^2 + 1` underflows the pivot block
//! is defective (a genuine exceptional point): the block then gets the mean
//! eigenvalue pair and the single defective direction `(1, tau)` instead of
//! a diverging rotation, and the spectrum is flagged.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::matrix::CMatrix;

/// Hard cap on Jacobi sweeps; generic inputs converge in well under ten.
pub const MAX_SWEEPS: usize = 200;
/// Off-diagonal convergence threshold, relative to the Frobenius norm.
pub const OFFDIAG_TOL_FACTOR: f64 = 1e-13;
/// `A_k` above this flags the whole spectrum as near-defective.
pub const NORM_CEILING: f64 = 1e8;
/// Bilinear self-product below this fraction of the Hermitian norm means the
/// vector cannot be biorthogonally normalized in a trustworthy way.
pub const BILINEAR_FLOOR_RATIO: f64 = 1e-8;
/// Pivot discriminant `|tau^2 + 1|` below this (relative to `1 + |tau|^2`)
/// marks the 2x2 block as defective.
const DEFECT_DISC_EPS: f64 = 1e-26;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// Input matrix is not symmetric within tolerance.
    NotSymmetric { max_asymmetry: f64 },
    /// Input matrix contains NaN or infinity.
    NonFinite,
    /// Jacobi iteration failed to converge; carries the offending matrix.
    Convergence { sweeps: usize, max_offdiag: f64, matrix: CMatrix },
    /// A vector's bilinear self-product is too small to normalize against:
    /// the state is (numerically) self-orthogonal, the signature of an
    /// exceptional point.
    NearDefective { bilinear_ratio: f64 },
    /// A vector with no nonzero component.
    ZeroVector,
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix is not symmetric (max |h_ij - h_ji| = {max_asymmetry:e})")
            }
            Self::NonFinite => write!(f, "matrix has non-finite entries"),
            Self::Convergence { sweeps, max_offdiag, matrix } => write!(
                f,
                "jacobi iteration did not converge after {sweeps} sweeps \
                 (n = {}, max off-diagonal {max_offdiag:e})",
                matrix.n()
            ),
            Self::NearDefective { bilinear_ratio } => write!(
                f,
                "near-defective state: |v.v| / <v|v> = {bilinear_ratio:e} is below {BILINEAR_FLOOR_RATIO:e}"
            ),
            Self::ZeroVector => write!(f, "zero vector cannot be normalized"),
        }
    }
}

impl core::error::Error for SpectralError {}

/// One eigenstate with its diagnostics.
///
/// `vector` is biorthogonally normalized (`v . v = 1`) except at an exactly
/// defective state, where only the Euclidean-normalized defective direction
/// exists and `a_norm` is infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    /// Complex eigenvalue `E + i*Gamma/2` (`Gamma <= 0`).
    pub value: Complex64,
    pub vector: Vec<Complex64>,
    /// Hermitian norm `<v|v>` of the bilinearly normalized vector; `>= 1`.
    pub a_norm: f64,
    /// Phase rigidity `|v . v| / <v|v>` in `[0, 1]`; equals `1 / a_norm`.
    pub rigidity: f64,
    /// `|v_j|^2` per basis level: the mixing weights `|b_kj|^2`.
    pub mixing_sq: Vec<f64>,
}

impl EigenState {
    /// Position `E = Re(value)`.
    pub fn energy(&self) -> f64 {
        self.value.re
    }

    /// Half width `Gamma/2 = Im(value)`; non-positive for decaying states.
    pub fn gamma_half(&self) -> f64 {
        self.value.im
    }

    pub fn gamma(&self) -> f64 {
        2.0 * self.value.im
    }
}

/// Overall conditioning of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Regular,
    /// Some state has `A_k` beyond [`NORM_CEILING`] (or is exactly
    /// defective): diagnostics near an exceptional point are saturated.
    NearDefective,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// States sorted by `(Re E, Im E)`.
    pub states: Vec<EigenState>,
    pub condition: Condition,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn is_regular(&self) -> bool {
        self.condition == Condition::Regular
    }

    pub fn eigenvalue_sum(&self) -> Complex64 {
        self.states.iter().map(|s| s.value).sum()
    }

    /// Smallest pairwise eigenvalue distance; infinity for fewer than two states.
    pub fn min_gap(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.states.len() {
            for j in (i + 1)..self.states.len() {
                best = best.min((self.states[i].value - self.states[j].value).norm());
            }
        }
        best
    }
}

/// Bilinear product `sum(u_i * v_i)` — no conjugation.
pub fn bilinear(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Hermitian product `sum(conj(u_i) * v_i)`.
pub fn hermitian_inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Phase rigidity `|v . v| / <v|v>` of an arbitrary (not necessarily
/// normalized) vector; scale-invariant, in `[0, 1]`.
pub fn phase_rigidity(v: &[Complex64]) -> f64 {
    let h: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if h == 0.0 {
        return 0.0;
    }
    (bilinear(v, v).norm() / h).min(1.0)
}

/// Mixing weights `|v_j|^2` for each vector.
pub fn mixing_coefficients(vectors: &[Vec<Complex64>]) -> Vec<Vec<f64>> {
    vectors.iter().map(|v| v.iter().map(|z| z.norm_sqr()).collect()).collect()
}

/// All Hermitian overlaps `B[k][l] = <v_k|v_l>`.
///
/// The diagonal holds the norms `A_k`; for a complex-symmetric spectrum the
/// off-diagonal entries are (approximately) anti-symmetric under index
/// exchange, i.e. close to purely imaginary — exactly so for `N = 2`.
/// `max_asymmetry` reports the worst violation `max |B[k][l] + B[l][k]|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseOverlaps {
    pub b: Vec<Vec<Complex64>>,
    pub max_asymmetry: f64,
}

pub fn pairwise_bnorms(vectors: &[Vec<Complex64>]) -> PairwiseOverlaps {
    let n = vectors.len();
    let mut b = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 0..n {
        for l in 0..n {
            b[k][l] = hermitian_inner(&vectors[k], &vectors[l]);
        }
    }
    let mut max_asymmetry = 0.0_f64;
    for (k, row) in b.iter().enumerate() {
        for (l, overlap) in row.iter().enumerate().skip(k + 1) {
            max_asymmetry = max_asymmetry.max((overlap + b[l][k]).norm());
        }
    }
    PairwiseOverlaps { b, max_asymmetry }
}

/// Closed-form eigenvalues of a 2x2 complex-symmetric matrix:
/// `(e1 + e2)/2 ± Z` with `Z = sqrt((e1 - e2)^2 + 4 w^2) / 2`, principal
/// square root, `+Z` first.
pub fn eig2_closed_form(h: &CMatrix) -> (Complex64, Complex64) {
    assert_eq!(h.n(), 2, "eig2_closed_form needs a 2x2 matrix");
    let d = h[(0, 0)] - h[(1, 1)];
    let z = (d * d + 4.0 * h[(0, 1)] * h[(1, 0)]).sqrt() * 0.5;
    let mean = (h[(0, 0)] + h[(1, 1)]) * 0.5;
    (mean + z, mean - z)
}

/// Rescales every vector to `v . v = 1` and fixes the overall sign so the
/// largest-modulus component has argument in `(-pi/2, pi/2]`.
///
/// Errors with [`SpectralError::NearDefective`] when any vector has
/// `|v . v| < 1e-8 * <v|v>`: that close to self-orthogonality the scaling
/// blows up and the caller should treat the state as (nearly) defective.
pub fn normalize_biorthogonal(
    vectors: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>, SpectralError> {
    let mut out = Vec::with_capacity(vectors.len());
    for v in vectors {
        let h: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if h == 0.0 {
            return Err(SpectralError::ZeroVector);
        }
        let p = bilinear(v, v);
        let ratio = p.norm() / h;
        if ratio < BILINEAR_FLOOR_RATIO {
            return Err(SpectralError::NearDefective { bilinear_ratio: ratio });
        }
        out.push(scale_and_sign(v, p));
    }
    Ok(out)
}

/// `v / sqrt(p)` with the sign convention applied; `p` must be `v . v != 0`.
fn scale_and_sign(v: &[Complex64], p: Complex64) -> Vec<Complex64> {
    let inv = p.sqrt().inv();
    let mut u: Vec<Complex64> = v.iter().map(|z| z * inv).collect();
    if !leading_sign_ok(&u) {
        for z in &mut u {
            *z = -*z;
        }
    }
    u
}

/// True when the largest-modulus component has argument in `(-pi/2, pi/2]`.
fn leading_sign_ok(v: &[Complex64]) -> bool {
    let mut best = 0usize;
    let mut best_norm = -1.0_f64;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm_sqr();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    let lead = v[best];
    lead.re > 0.0 || (lead.re == 0.0 && lead.im > 0.0)
}

/// Euclidean-normalizes `v` in place and returns the original norm.
fn euclid_normalize(v: &mut [Complex64]) -> f64 {
    let n = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    if n > 0.0 {
        let inv = 1.0 / n;
        for z in v.iter_mut() {
            *z *= inv;
        }
    }
    n
}

struct RotationPlan {
    t: Complex64,
    c: Complex64,
    s: Complex64,
}

/// Annihilation rotation for the pivot block `[[a_pp, b], [b, a_qq]]`, or
/// `None` when the block is defective (discriminant underflow).
fn plan_rotation(app: Complex64, aqq: Complex64, b: Complex64) -> Option<RotationPlan> {
    let tau = (aqq - app) / (b * 2.0);
    let disc = tau * tau + Complex64::new(1.0, 0.0);
    if disc.norm() < DEFECT_DISC_EPS * (1.0 + tau.norm_sqr()) {
        return None;
    }
    let root = disc.sqrt();
    let dplus = tau + root;
    let dminus = tau - root;
    let denom = if dplus.norm() >= dminus.norm() { dplus } else { dminus };
    let t = denom.inv();
    let c = (Complex64::new(1.0, 0.0) + t * t).sqrt().inv();
    let s = t * c;
    Some(RotationPlan { t, c, s })
}

/// Full eigendecomposition of a complex-symmetric matrix.
///
/// Returns states sorted by `(Re E, Im E)`, each with its biorthogonally
/// normalized vector and diagnostics.  Exactly defective inputs do not fail:
/// the coalesced pair shares the defective direction and the spectrum comes
/// back flagged [`Condition::NearDefective`].
pub fn eig_general(h: &CMatrix) -> Result<Spectrum, SpectralError> {
    let n = h.n();
    if !h.is_finite() {
        return Err(SpectralError::NonFinite);
    }
    let fro = h.frobenius_norm();
    let max_asym = max_asymmetry(h);
    if max_asym > 1e-12 * fro {
        return Err(SpectralError::NotSymmetric { max_asymmetry: max_asym });
    }
    let tol = OFFDIAG_TOL_FACTOR * fro;

    let mut a = h.clone();
    let mut q = CMatrix::identity(n);
    let mut sweeps = 0;
    let mut converged = a.max_offdiag() <= tol;
    while !converged && sweeps < MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for r in (p + 1)..n {
                let b = a[(p, r)];
                if b.norm() <= tol {
                    continue;
                }
                let Some(plan) = plan_rotation(a[(p, p)], a[(r, r)], b) else {
                    continue; // defective block, handled after the loop
                };
                apply_rotation(&mut a, &mut q, p, r, b, &plan);
                rotated = true;
            }
        }
        sweeps += 1;
        converged = a.max_offdiag() <= tol;
        if !rotated {
            break; // only defective pivots remain
        }
    }

    let mut values: Vec<Complex64> = (0..n).map(|i| a[(i, i)]).collect();
    let mut vectors: Vec<Vec<Complex64>> = (0..n).map(|j| q.column(j)).collect();
    let mut defective = vec![false; n];

    if !converged {
        resolve_defective_blocks(h, &a, &q, tol, sweeps, &mut values, &mut vectors, &mut defective)?;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i].re.total_cmp(&values[j].re).then(values[i].im.total_cmp(&values[j].im))
    });

    let mut states = Vec::with_capacity(n);
    let mut near_defective = false;
    for &i in &order {
        let state = finish_state(values[i], &vectors[i], defective[i]);
        near_defective |= !state.a_norm.is_finite() || state.a_norm > NORM_CEILING;
        states.push(state);
    }
    let condition = if near_defective { Condition::NearDefective } else { Condition::Regular };
    Ok(Spectrum { states, condition })
}

fn max_asymmetry(h: &CMatrix) -> f64 {
    let n = h.n();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((h[(i, j)] - h[(j, i)]).norm());
        }
    }
    worst
}

/// Applies `A <- G^T A G`, `Q <- Q G` for the pivot `(p, r)`.
fn apply_rotation(
    a: &mut CMatrix,
    q: &mut CMatrix,
    p: usize,
    r: usize,
    b: Complex64,
    plan: &RotationPlan,
) {
    let n = a.n();
    let (c, s, t) = (plan.c, plan.s, plan.t);
    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let akp = a[(k, p)];
        let akr = a[(k, r)];
        let np = c * akp - s * akr;
        let nr = s * akp + c * akr;
        a[(k, p)] = np;
        a[(p, k)] = np;
        a[(k, r)] = nr;
        a[(r, k)] = nr;
    }
    // Exact diagonal identities: together they keep the trace unchanged.
    let tb = t * b;
    a[(p, p)] -= tb;
    a[(r, r)] += tb;
    a[(p, r)] = Complex64::new(0.0, 0.0);
    a[(r, p)] = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let qip = q[(i, p)];
        let qir = q[(i, r)];
        q[(i, p)] = c * qip - s * qir;
        q[(i, r)] = s * qip + c * qir;
    }
}

/// Classifies every surviving off-diagonal pivot: defective blocks get the
/// coalesced eigenvalue pair and the defective direction `(1, tau)` mapped
/// back through `Q`; anything else is a genuine convergence failure.
#[allow(clippy::too_many_arguments)]
fn resolve_defective_blocks(
    h: &CMatrix,
    a: &CMatrix,
    q: &CMatrix,
    tol: f64,
    sweeps: usize,
    values: &mut [Complex64],
    vectors: &mut [Vec<Complex64>],
    defective: &mut [bool],
) -> Result<(), SpectralError> {
    let n = a.n();
    let mut used = vec![false; n];
    for p in 0..n.saturating_sub(1) {
        for r in (p + 1)..n {
            let b = a[(p, r)];
            if b.norm() <= tol {
                continue;
            }
            if used[p] || used[r] {
                return Err(SpectralError::Convergence {
                    sweeps,
                    max_offdiag: a.max_offdiag(),
                    matrix: h.clone(),
                });
            }
            let tau = (a[(r, r)] - a[(p, p)]) / (b * 2.0);
            let disc = tau * tau + Complex64::new(1.0, 0.0);
            if disc.norm() >= DEFECT_DISC_EPS * (1.0 + tau.norm_sqr()) {
                return Err(SpectralError::Convergence {
                    sweeps,
                    max_offdiag: a.max_offdiag(),
                    matrix: h.clone(),
                });
            }
            used[p] = true;
            used[r] = true;
            let mean = (a[(p, p)] + a[(r, r)]) * 0.5;
            let z = b * disc.sqrt(); // residual half-splitting, ~0
            values[p] = mean + z;
            values[r] = mean - z;
            let colp = q.column(p);
            let colr = q.column(r);
            let mut w: Vec<Complex64> =
                colp.iter().zip(&colr).map(|(&cp, &cr)| cp + tau * cr).collect();
            euclid_normalize(&mut w);
            if !leading_sign_ok(&w) {
                for zc in &mut w {
                    *zc = -*zc;
                }
            }
            vectors[p] = w.clone();
            vectors[r] = w;
            defective[p] = true;
            defective[r] = true;
        }
    }
    Ok(())
}

/// Normalizes one harvested vector and fills in the diagnostics.
fn finish_state(value: Complex64, vector: &[Complex64], is_defective: bool) -> EigenState {
    let p = bilinear(vector, vector);
    let (v, a_norm, rigidity) = if is_defective || p.norm() == 0.0 {
        // Only the Euclidean-normalized direction is available.
        let mut w = vector.to_vec();
        euclid_normalize(&mut w);
        let r = phase_rigidity(&w);
        let a = if r > 0.0 { 1.0 / r } else { f64::INFINITY };
        (w, a, r)
    } else {
        let u = scale_and_sign(vector, p);
        let a: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let r = phase_rigidity(&u);
        (u, a, r)
    };
    let mixing_sq = v.iter().map(|z| z.norm_sqr()).collect();
    EigenState { value, vector: v, a_norm, rigidity, mixing_sq }
}
