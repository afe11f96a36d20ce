//! System definitions: parameter-dependent level energies, complex coupling
//! laws, and assembly of the effective Hamiltonian.
//!
//! A level contributes a diagonal entry `eps_i(a) = e_i(a) + i*gamma_half_i`
//! with `gamma_half_i <= 0` (decaying states).  Off-diagonal entries come
//! from one coupling law shared by the whole system; the matrix is complex
//! symmetric by construction, never Hermitian.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::matrix::CMatrix;

/// Scalar type used throughout: a double-precision complex number.
pub type ComplexScalar = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// Square-root energy curve evaluated at negative `a`.
    SqrtDomain { a: f64 },
    /// Tabulated energy curve evaluated outside its abscissa range.
    TableDomain { a: f64, lo: f64, hi: f64 },
    /// A level or curve parameter failed validation.
    InvalidLevel(&'static str),
    /// A coupling parameter failed validation.
    InvalidCoupling(&'static str),
    /// Level count does not match the requested topology.
    InvalidTopology { levels: usize },
    /// A matrix entry came out non-finite.
    NonFiniteEntry { row: usize, col: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SqrtDomain { a } => write!(f, "sqrt energy curve needs a >= 0, got a = {a}"),
            Self::TableDomain { a, lo, hi } => {
                write!(f, "tabulated curve evaluated at a = {a} outside [{lo}, {hi}]")
            }
            Self::InvalidLevel(msg) => write!(f, "invalid level: {msg}"),
            Self::InvalidCoupling(msg) => write!(f, "invalid coupling: {msg}"),
            Self::InvalidTopology { levels } => {
                write!(f, "topology does not fit {levels} level(s): pair needs exactly 2, star at least 3")
            }
            Self::NonFiniteEntry { row, col } => {
                write!(f, "hamiltonian entry ({row}, {col}) is not finite")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// Real energy of a level as a function of the external parameter `a`.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyCurve {
    /// `e(a) = c0 + c1 * a`
    Linear { c0: f64, c1: f64 },
    /// `e(a) = c * sqrt(a)`, defined for `a >= 0`
    Sqrt { c: f64 },
    /// Piecewise-linear interpolation through `(a, e)` points with strictly
    /// increasing abscissae; an escape hatch for curves the two analytic
    /// forms cannot express.
    Tabulated { points: Vec<(f64, f64)> },
}

impl EnergyCurve {
    pub fn linear(c0: f64, c1: f64) -> Self {
        Self::Linear { c0, c1 }
    }

    pub fn sqrt(c: f64) -> Self {
        Self::Sqrt { c }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Self::Linear { c0, c1 } => {
                if !c0.is_finite() || !c1.is_finite() {
                    return Err(ModelError::InvalidLevel("linear coefficients must be finite"));
                }
            }
            Self::Sqrt { c } => {
                if !c.is_finite() {
                    return Err(ModelError::InvalidLevel("sqrt coefficient must be finite"));
                }
            }
            Self::Tabulated { points } => {
                if points.len() < 2 {
                    return Err(ModelError::InvalidLevel("tabulated curve needs at least 2 points"));
                }
                for w in points.windows(2) {
                    // NaN abscissae must fail this check too
                    if w[1].0.partial_cmp(&w[0].0) != Some(core::cmp::Ordering::Greater) {
                        return Err(ModelError::InvalidLevel(
                            "tabulated abscissae must be strictly increasing",
                        ));
                    }
                }
                if points.iter().any(|(a, e)| !a.is_finite() || !e.is_finite()) {
                    return Err(ModelError::InvalidLevel("tabulated points must be finite"));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, a: f64) -> Result<f64, ModelError> {
        match self {
            Self::Linear { c0, c1 } => Ok(c0 + c1 * a),
            Self::Sqrt { c } => {
                if a < 0.0 {
                    Err(ModelError::SqrtDomain { a })
                } else {
                    Ok(c * libm::sqrt(a))
                }
            }
            Self::Tabulated { points } => {
                let lo = points[0].0;
                let hi = points[points.len() - 1].0;
                if a < lo || a > hi {
                    return Err(ModelError::TableDomain { a, lo, hi });
                }
                // Find the segment containing `a` and interpolate linearly.
                let k = match points.binary_search_by(|p| p.0.total_cmp(&a)) {
                    Ok(i) => return Ok(points[i].1),
                    Err(i) => i - 1,
                };
                let (a0, e0) = points[k];
                let (a1, e1) = points[k + 1];
                Ok(e0 + (e1 - e0) * (a - a0) / (a1 - a0))
            }
        }
    }
}

/// One decaying level: a real energy curve plus a constant half width
/// `gamma_half = Gamma_i / 2 <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec {
    pub curve: EnergyCurve,
    pub gamma_half: f64,
}

impl LevelSpec {
    pub fn new(curve: EnergyCurve, gamma_half: f64) -> Result<Self, ModelError> {
        curve.validate()?;
        if !gamma_half.is_finite() {
            return Err(ModelError::InvalidLevel("gamma_half must be finite"));
        }
        if gamma_half > 0.0 {
            return Err(ModelError::InvalidLevel("gamma_half must be <= 0 (decaying state)"));
        }
        Ok(Self { curve, gamma_half })
    }

    /// Complex diagonal entry `e(a) + i * gamma_half`.
    pub fn epsilon(&self, a: f64) -> Result<Complex64, ModelError> {
        Ok(Complex64::new(self.curve.eval(a)?, self.gamma_half))
    }
}

/// Complex diagonal entry of one level: `e_i(a) + i * gamma_half_i`.
pub fn eval_epsilon(level: &LevelSpec, a: f64) -> Result<Complex64, ModelError> {
    level.epsilon(a)
}

/// Off-diagonal coupling law shared by every coupled pair.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingLaw {
    /// Fixed complex `omega`, independent of the level energies.
    Constant { omega: Complex64 },
    /// `omega * exp(-(eps_i - eps_k)^2)` in full complex arithmetic, so the
    /// strength fades as the complex level distance grows.
    Gaussian { omega: Complex64 },
    /// `omega0 * exp(-(eps_k - eps_i)^2) * (sqrt(1 - y^2) + i*y)` with
    /// `omega0 > 0` and `y` in `[0, 1]`: a unit-modulus factor steers the
    /// coupling from purely real (`y = 0`) to purely imaginary (`y = 1`).
    YParametrized { omega0: f64, y: f64 },
}

impl CouplingLaw {
    pub fn constant(omega: Complex64) -> Self {
        Self::Constant { omega }
    }

    pub fn gaussian(omega: Complex64) -> Self {
        Self::Gaussian { omega }
    }

    pub fn y_parametrized(omega0: f64, y: f64) -> Result<Self, ModelError> {
        let law = Self::YParametrized { omega0, y };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Self::Constant { omega } | Self::Gaussian { omega } => {
                if !omega.re.is_finite() || !omega.im.is_finite() {
                    return Err(ModelError::InvalidCoupling("omega must be finite"));
                }
            }
            Self::YParametrized { omega0, y } => {
                // the finiteness check also rejects a NaN omega0
                if *omega0 <= 0.0 || !omega0.is_finite() {
                    return Err(ModelError::InvalidCoupling("omega0 must be positive and finite"));
                }
                if !(0.0..=1.0).contains(y) {
                    return Err(ModelError::InvalidCoupling("y must lie in [0, 1]"));
                }
            }
        }
        Ok(())
    }

    /// The mixing parameter `y`, when this law carries one.
    pub fn y(&self) -> Option<f64> {
        match self {
            Self::YParametrized { y, .. } => Some(*y),
            _ => None,
        }
    }

    /// Same law with the mixing parameter replaced; errors for laws without one.
    pub fn with_y(&self, y: f64) -> Result<Self, ModelError> {
        match self {
            Self::YParametrized { omega0, .. } => Self::y_parametrized(*omega0, y),
            _ => Err(ModelError::InvalidCoupling("only the y-parametrized law has a y parameter")),
        }
    }
}

/// Off-diagonal matrix element between two levels with diagonal entries
/// `eps_i` and `eps_k`.  Symmetric in its arguments for every law.
pub fn eval_coupling(law: &CouplingLaw, eps_i: Complex64, eps_k: Complex64) -> Complex64 {
    match law {
        CouplingLaw::Constant { omega } => *omega,
        CouplingLaw::Gaussian { omega } => {
            let d = eps_i - eps_k;
            *omega * (-(d * d)).exp()
        }
        CouplingLaw::YParametrized { omega0, y } => {
            let d = eps_k - eps_i;
            let phase = Complex64::new(libm::sqrt((1.0 - y * y).max(0.0)), *y);
            *omega0 * (-(d * d)).exp() * phase
        }
    }
}

/// Which pairs of levels are coupled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Two levels, one coupling element.
    Pair,
    /// Levels `1..N-1` couple only to the last level (the hub); all other
    /// off-diagonal entries are exactly zero.
    Star,
}

/// Complete system: levels, coupling law, topology.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    levels: Vec<LevelSpec>,
    coupling: CouplingLaw,
    topology: Topology,
}

impl SystemConfig {
    pub fn new(
        levels: Vec<LevelSpec>,
        coupling: CouplingLaw,
        topology: Topology,
    ) -> Result<Self, ModelError> {
        match topology {
            Topology::Pair if levels.len() != 2 => {
                return Err(ModelError::InvalidTopology { levels: levels.len() })
            }
            Topology::Star if levels.len() < 3 => {
                return Err(ModelError::InvalidTopology { levels: levels.len() })
            }
            _ => {}
        }
        for level in &levels {
            level.curve.validate()?;
            if level.gamma_half > 0.0 {
                return Err(ModelError::InvalidLevel("gamma_half must be <= 0"));
            }
        }
        coupling.validate()?;
        Ok(Self { levels, coupling, topology })
    }

    /// Two-level system.
    pub fn pair(l1: LevelSpec, l2: LevelSpec, coupling: CouplingLaw) -> Result<Self, ModelError> {
        Self::new(alloc::vec![l1, l2], coupling, Topology::Pair)
    }

    /// Star topology; the last level is the hub.
    pub fn star(levels: Vec<LevelSpec>, coupling: CouplingLaw) -> Result<Self, ModelError> {
        Self::new(levels, coupling, Topology::Star)
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn coupling(&self) -> &CouplingLaw {
        &self.coupling
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Same system with the coupling's `y` parameter replaced.
    pub fn with_y(&self, y: f64) -> Result<Self, ModelError> {
        Ok(Self {
            levels: self.levels.clone(),
            coupling: self.coupling.with_y(y)?,
            topology: self.topology,
        })
    }

    /// Diagonal entries at parameter `a`.
    pub fn epsilons(&self, a: f64) -> Result<Vec<Complex64>, ModelError> {
        self.levels.iter().map(|l| l.epsilon(a)).collect()
    }

    pub fn hamiltonian(&self, a: f64) -> Result<CMatrix, ModelError> {
        build_hamiltonian(self, a)
    }
}

/// Assembles the complex-symmetric Hamiltonian at parameter `a`.
pub fn build_hamiltonian(config: &SystemConfig, a: f64) -> Result<CMatrix, ModelError> {
    let n = config.n();
    let eps = config.epsilons(a)?;
    let mut h = CMatrix::zeros(n);
    for (i, &e) in eps.iter().enumerate() {
        h[(i, i)] = e;
    }
    match config.topology {
        Topology::Pair => {
            let w = eval_coupling(&config.coupling, eps[0], eps[1]);
            h[(0, 1)] = w;
            h[(1, 0)] = w;
        }
        Topology::Star => {
            let hub = n - 1;
            for i in 0..hub {
                let w = eval_coupling(&config.coupling, eps[i], eps[hub]);
                h[(i, hub)] = w;
                h[(hub, i)] = w;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(ModelError::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_and_sqrt_curves() {
        let lin = EnergyCurve::linear(1.0, -0.5);
        assert_eq!(lin.eval(0.8).unwrap(), 0.6);
        let sq = EnergyCurve::sqrt(1.0);
        assert_eq!(sq.eval(0.25).unwrap(), 0.5);
        assert!(matches!(sq.eval(-0.1), Err(ModelError::SqrtDomain { .. })));
    }

    #[test]
    fn tabulated_curve_interpolates_and_guards_range() {
        let t = EnergyCurve::Tabulated { points: alloc::vec![(0.0, 1.0), (1.0, 3.0), (2.0, 3.0)] };
        t.validate().unwrap();
        assert_eq!(t.eval(0.5).unwrap(), 2.0);
        assert_eq!(t.eval(1.0).unwrap(), 3.0);
        assert_eq!(t.eval(2.0).unwrap(), 3.0);
        assert!(matches!(t.eval(2.5), Err(ModelError::TableDomain { .. })));
        let bad = EnergyCurve::Tabulated { points: alloc::vec![(0.0, 1.0), (0.0, 2.0)] };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn level_rejects_growing_width() {
        assert!(LevelSpec::new(EnergyCurve::linear(0.0, 1.0), 0.5).is_err());
        let l = LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.5).unwrap();
        // eps(0.8) = 0.6 - 0.5i
        assert_eq!(eval_epsilon(&l, 0.8).unwrap(), c(0.6, -0.5));
    }

    #[test]
    fn constant_coupling_ignores_levels() {
        let law = CouplingLaw::constant(c(0.0, 0.5));
        assert_eq!(eval_coupling(&law, c(1.0, -0.5), c(9.0, -0.5)), c(0.0, 0.5));
    }

    #[test]
    fn gaussian_coupling_matches_scalar_decomposition() {
        // Independent route: with eps_i - eps_k = u + iv,
        //   -(u + iv)^2 = (v^2 - u^2) - 2uv i
        //   exp of that = e^(v^2 - u^2) * (cos(2uv) - i sin(2uv)).
        let law = CouplingLaw::gaussian(c(0.0, 0.05));
        let ei = c(0.9, -0.5);
        let ek = c(0.4, -0.3);
        let (u, v) = (0.5, -0.2);
        let mag = libm::exp(v * v - u * u);
        let expect = c(0.0, 0.05) * c(mag * libm::cos(2.0 * u * v), -mag * libm::sin(2.0 * u * v));
        let got = eval_coupling(&law, ei, ek);
        assert!((got - expect).norm() < 1e-16);
        // symmetric in its arguments: (eps_k - eps_i)^2 = (eps_i - eps_k)^2
        assert_eq!(got, eval_coupling(&law, ek, ei));
    }

    #[test]
    fn gaussian_coupling_with_equal_widths_is_real_attenuation() {
        // Equal widths make the level distance real, so the attenuation
        // factor is exp(-(e1-e2)^2) with no rotation.
        let law = CouplingLaw::gaussian(c(0.0, 0.5));
        let got = eval_coupling(&law, c(1.0, -0.5), c(0.3, -0.5));
        let expect = c(0.0, 0.5 * libm::exp(-0.49));
        assert!((got - expect).norm() < 1e-16);
    }

    #[test]
    fn y_factor_has_unit_modulus() {
        for k in 0..=10 {
            let y = k as f64 / 10.0;
            let law = CouplingLaw::y_parametrized(0.4, y).unwrap();
            // equal energies: the gaussian factor is exactly 1
            let w = eval_coupling(&law, c(0.7, -0.5), c(0.7, -0.5));
            assert!((w.norm() - 0.4).abs() < 1e-15, "y = {y}: |w| = {}", w.norm());
        }
        // endpoints: purely real at y = 0, purely imaginary at y = 1
        let w0 = eval_coupling(
            &CouplingLaw::y_parametrized(0.4, 0.0).unwrap(),
            c(0.7, -0.5),
            c(0.7, -0.5),
        );
        assert_eq!(w0, c(0.4, 0.0));
        let w1 = eval_coupling(
            &CouplingLaw::y_parametrized(0.4, 1.0).unwrap(),
            c(0.7, -0.5),
            c(0.7, -0.5),
        );
        assert!((w1 - c(0.0, 0.4)).norm() < 1e-16);
    }

    #[test]
    fn y_parameter_validation() {
        assert!(CouplingLaw::y_parametrized(0.4, -0.1).is_err());
        assert!(CouplingLaw::y_parametrized(0.4, 1.1).is_err());
        assert!(CouplingLaw::y_parametrized(0.0, 0.5).is_err());
        assert!(CouplingLaw::y_parametrized(-0.4, 0.5).is_err());
    }

    #[test]
    fn pair_hamiltonian_is_symmetric() {
        let cfg = SystemConfig::pair(
            LevelSpec::new(EnergyCurve::linear(1.0, -0.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::sqrt(1.0), -0.5).unwrap(),
            CouplingLaw::gaussian(c(0.0, 0.05)),
        )
        .unwrap();
        let h = cfg.hamiltonian(0.81).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h[(0, 0)], c(1.0 - 0.5 * 0.81, -0.5));
        assert_eq!(h[(1, 1)], c(0.9, -0.5));
        assert_eq!(h[(0, 1)], h[(1, 0)]);
    }

    #[test]
    fn star_hamiltonian_zero_pattern() {
        let levels = alloc::vec![
            LevelSpec::new(EnergyCurve::linear(1.0, -1.0 / 4.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::linear(1.1, -0.5), -0.5).unwrap(),
            LevelSpec::new(EnergyCurve::sqrt(1.0), -0.5).unwrap(),
        ];
        let cfg = SystemConfig::star(levels, CouplingLaw::constant(c(0.05, 0.0))).unwrap();
        let h = cfg.hamiltonian(0.3).unwrap();
        assert_eq!(h.n(), 3);
        // levels 0 and 1 couple only through the hub (level 2)
        assert_eq!(h[(0, 1)], c(0.0, 0.0));
        assert_eq!(h[(1, 0)], c(0.0, 0.0));
        assert_eq!(h[(0, 2)], c(0.05, 0.0));
        assert_eq!(h[(2, 0)], c(0.05, 0.0));
        assert_eq!(h[(1, 2)], c(0.05, 0.0));
    }

    #[test]
    fn topology_requires_matching_level_count() {
        let l = || LevelSpec::new(EnergyCurve::linear(0.0, 1.0), -0.5).unwrap();
        let law = CouplingLaw::constant(c(0.1, 0.0));
        assert!(SystemConfig::new(alloc::vec![l(), l(), l()], law.clone(), Topology::Pair).is_err());
        assert!(SystemConfig::new(alloc::vec![l(), l()], law, Topology::Star).is_err());
    }
}
