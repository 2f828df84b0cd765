//! Cohomogeneity-one Kähler-Einstein profiles on the total space of `L^k → ℙ^{n-1}`,
//! the resolution of the diagonal quotient `ℂⁿ/ℤ_k`.
//!
//! In the momentum coordinate `τ = F'(t)` the metric is
//! `ω = (1+τ) ω^T + φ(τ)^{-1} dτ ∧ d^c τ`, and with `s = 1 + τ` the Einstein
//! condition `Ric(ω) = −λω` becomes the scalar identity
//!
//! ```text
//! n/k − (n−1) φ/s − φ' + λ s = 0,
//! ```
//!
//! whose general solution is `φ = s/k + λ/(n+1) s² + C s^(1−n)`. Profiles
//! carry `φ` as an exact [`LaurentPolynomial`] so the identity is checked with
//! no tolerance; the coordinate `t` and potential `F` come from quadrature.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_arith::{int, rat, to_f64, BigRational, FloatLaurent, LaurentPolynomial};
use crate::numfmt::fmt12;
use crate::quadrature::{integrate, QuadratureConfig, QuadratureError};

/// Upper end of the default momentum grid.
pub const DEFAULT_TAU_MAX: f64 = 1.0e6;
/// Points in the default momentum grid.
pub const DEFAULT_GRID_POINTS: usize = 256;
/// Absolute tolerance for the `t` and `F` quadratures.
pub const QUADRATURE_ABS_TOL: f64 = 1e-10;
/// Absolute tolerance of the root bracket.
pub const ROOT_TOL: f64 = 1e-12;

const ROOT_PROBES: i64 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalabiError {
    #[error("invalid profile parameters: {0}")]
    InvalidParameters(String),
    #[error("k = {k} ≤ n = {n}: the resolution does not have c₁ < 0")]
    InadmissibleOrder { n: u32, k: u32 },
    #[error("φ is positive on all of (0, ∞)")]
    NoPositiveRoot,
    #[error("leading coefficient of φ is not positive")]
    NotEventuallyPositive,
    #[error("τ = {tau} is outside the domain τ > {tau_star}")]
    DomainError { tau: f64, tau_star: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("i/o error writing CSV: {0}")]
    Io(String),
}

impl CalabiError {
    pub fn code(&self) -> &'static str {
        match self {
            CalabiError::InvalidParameters(_) => "InvalidParameters",
            CalabiError::InadmissibleOrder { .. } => "InadmissibleOrder",
            CalabiError::NoPositiveRoot => "NoPositiveRoot",
            CalabiError::NotEventuallyPositive => "NotEventuallyPositive",
            CalabiError::DomainError { .. } => "DomainError",
            CalabiError::InvalidGrid(_) => "InvalidGrid",
            CalabiError::Quadrature(_) => "QuadratureFailure",
            CalabiError::Io(_) => "IoError",
        }
    }

    /// Failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, CalabiError::Quadrature(_))
    }
}

/// Momentum profile `φ(s)` together with the parameters it was built from.
#[derive(Debug, Clone)]
pub struct EinsteinProfile {
    n: u32,
    k: u32,
    lambda: BigRational,
    constant: BigRational,
    phi: LaurentPolynomial,
    phi_float: FloatLaurent,
    root: OnceLock<Result<f64, CalabiError>>,
}

impl EinsteinProfile {
    /// Assemble a profile from explicit parts. No relation between `phi` and
    /// the parameters is enforced; [`check_einstein_identity`] decides.
    pub fn from_parts(
        n: u32,
        k: u32,
        lambda: BigRational,
        constant: BigRational,
        phi: LaurentPolynomial,
    ) -> Self {
        let phi_float = phi.to_float();
        Self {
            n,
            k,
            lambda,
            constant,
            phi,
            phi_float,
            root: OnceLock::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    /// Integration constant `C`, the coefficient of `s^(1−n)`.
    pub fn integration_constant(&self) -> &BigRational {
        &self.constant
    }

    pub fn phi(&self) -> &LaurentPolynomial {
        &self.phi
    }

    /// `φ` at `s = 1 + τ` in floating point.
    pub fn phi_at_tau(&self, tau: f64) -> f64 {
        self.phi_float.eval(1.0 + tau)
    }

    /// `√(λ/(n+1))`, the decay rate expected from `φ ~ λ/(n+1) s²`.
    pub fn asymptotic_rate(&self) -> Option<f64> {
        self.lambda
            .is_positive()
            .then(|| (to_f64(&self.lambda) / (self.n as f64 + 1.0)).sqrt())
    }

    /// Lower end `s_lo` of the positivity domain `(s_lo, ∞)`: the largest root,
    /// or 0 when `φ` has none on `(0, ∞)`.
    fn domain_lower(&self) -> Result<f64, CalabiError> {
        match positive_root(self) {
            Ok(s) => Ok(s),
            Err(CalabiError::NoPositiveRoot) => Ok(0.0),
            Err(e) => Err(e),
        }
    }

    fn check_domain(&self, tau: f64) -> Result<(), CalabiError> {
        let lower = self.domain_lower()?;
        if !(1.0 + tau > lower) || !tau.is_finite() {
            return Err(CalabiError::DomainError {
                tau,
                tau_star: lower - 1.0,
            });
        }
        Ok(())
    }
}

/// `φ = s/k + λ/(n+1) s² + C s^(1−n)`, the general solution of the Einstein identity.
pub fn solve_profile(
    n: u32,
    k: u32,
    lambda: BigRational,
    constant: BigRational,
) -> Result<EinsteinProfile, CalabiError> {
    if n < 2 {
        return Err(CalabiError::InvalidParameters(format!("n = {n} < 2")));
    }
    if k < 1 {
        return Err(CalabiError::InvalidParameters("k must be positive".into()));
    }
    let quadratic = &lambda / int(n as i64 + 1);
    let phi = LaurentPolynomial::from_terms([
        (1, rat(1, k as i64)),
        (2, quadratic),
        (1 - n as i32, constant.clone()),
    ]);
    Ok(EinsteinProfile::from_parts(n, k, lambda, constant, phi))
}

/// Parameters of the closed-form profile: `λ = 2 − n/k`, `C = −(2n+k)/(n(n+1))`.
pub fn paper_parameters(n: u32, k: u32) -> (BigRational, BigRational) {
    let (n, k) = (n as i64, k as i64);
    (int(2) - rat(n, k), rat(-(2 * n + k), n * (n + 1)))
}

/// Closed-form profile for `k > n`, where the resolution has `c₁ < 0`.
pub fn paper_profile(n: u32, k: u32) -> Result<EinsteinProfile, CalabiError> {
    if k <= n {
        return Err(CalabiError::InadmissibleOrder { n, k });
    }
    paper_profile_any_order(n, k)
}

/// Same formula without the `k > n` gate.
pub fn paper_profile_any_order(n: u32, k: u32) -> Result<EinsteinProfile, CalabiError> {
    let (lambda, constant) = paper_parameters(n, k);
    solve_profile(n, k, lambda, constant)
}

/// `n/k − (n−1) φ/s − φ' + λ s`
pub fn einstein_residual(profile: &EinsteinProfile) -> LaurentPolynomial {
    let n = profile.n as i64;
    let constant = LaurentPolynomial::constant(rat(n, profile.k as i64));
    let damping = profile.phi.shift(-1).scale(&int(n - 1));
    let linear = LaurentPolynomial::monomial(profile.lambda.clone(), 1);
    &(&(&constant - &damping) - &profile.phi.derivative()) + &linear
}

/// Exact test that the residual is the zero polynomial.
pub fn check_einstein_identity(profile: &EinsteinProfile) -> bool {
    einstein_residual(profile).is_zero()
}

/// Largest zero `s_*` of `φ`, with `φ > 0` on `(s_*, ∞)`.
///
/// The bracket comes from exact signs at rational probes below a Cauchy root
/// bound; only the final refinement uses floating point.
pub fn positive_root(profile: &EinsteinProfile) -> Result<f64, CalabiError> {
    profile
        .root
        .get_or_init(|| find_positive_root(&profile.phi, &profile.phi_float))
        .clone()
}

fn find_positive_root(phi: &LaurentPolynomial, phi_f: &FloatLaurent) -> Result<f64, CalabiError> {
    let lead = phi.leading_coefficient();
    if !lead.is_positive() {
        return Err(CalabiError::NotEventuallyPositive);
    }
    if phi.positive_sign_changes() == 0 {
        return Err(CalabiError::NoPositiveRoot);
    }
    // Every root of s^m φ(s) lies below 1 + max |c_i / c_lead|.
    let bound = phi
        .terms()
        .map(|(_, c)| (c / &lead).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();

    let sign_at = |s: &BigRational| phi.eval_exact(s).expect("s > 0 is not a pole");
    let mut hi = bound.clone();
    let mut lo = None;
    for j in (1..ROOT_PROBES).rev() {
        let probe = &bound * rat(j, ROOT_PROBES);
        let value = sign_at(&probe);
        if value.is_zero() {
            return Ok(to_f64(&probe));
        }
        if value.is_negative() {
            lo = Some(probe);
            break;
        }
        hi = probe;
    }
    // Below the first probe, halve toward 0.
    if lo.is_none() {
        let mut probe = hi.clone();
        for _ in 0..64 {
            probe = probe / int(2);
            let value = sign_at(&probe);
            if value.is_zero() {
                return Ok(to_f64(&probe));
            }
            if value.is_negative() {
                lo = Some(probe);
                break;
            }
            hi = probe.clone();
        }
    }
    let lo = lo.ok_or(CalabiError::NoPositiveRoot)?;

    let (mut a, mut b) = (to_f64(&lo), to_f64(&hi));
    while b - a > ROOT_TOL {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if phi_f.eval(mid) > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(0.5 * (a + b))
}

fn quad_config() -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: QUADRATURE_ABS_TOL,
        rel_tol: 1e-12,
        max_intervals: 4000,
    }
}

/// `t(τ) = ∫_{τ₀}^{τ} dx / φ(x)`.
pub fn momentum_to_t(profile: &EinsteinProfile, tau0: f64, tau: f64) -> Result<f64, CalabiError> {
    profile.check_domain(tau0)?;
    profile.check_domain(tau)?;
    Ok(integrate(|x| 1.0 / profile.phi_at_tau(x), tau0, tau, &quad_config())?.value)
}

/// `F(τ) = ∫_{τ₀}^{τ} x dx / φ(x)`, the Kähler potential as a function of momentum.
pub fn kahler_potential(profile: &EinsteinProfile, tau0: f64, tau: f64) -> Result<f64, CalabiError> {
    profile.check_domain(tau0)?;
    profile.check_domain(tau)?;
    Ok(integrate(|x| x / profile.phi_at_tau(x), tau0, tau, &quad_config())?.value)
}

/// `∫_τ^∞ dx/φ(x)` through `x + 1 = 1/u`, which turns the tail into
/// `∫_0^{1/s} du / (u² φ(1/u))` on a bounded interval. Infinite when
/// `deg φ ≤ 1`.
pub fn tail_integral(profile: &EinsteinProfile, tau: f64) -> Result<f64, CalabiError> {
    profile.check_domain(tau)?;
    if profile.phi.max_exponent().unwrap_or(0) < 2 {
        return Ok(f64::INFINITY);
    }
    let reflected = profile.phi.reflect(2).to_float();
    let upper = 1.0 / (1.0 + tau);
    let cfg = QuadratureConfig {
        abs_tol: QUADRATURE_ABS_TOL * 1e-3,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    Ok(integrate(|u| 1.0 / reflected.eval(u), 0.0, upper, &cfg)?.value)
}

/// Strictly increasing momentum samples, geometric in `s = 1 + τ`.
pub fn geometric_taus(tau0: f64, tau_max: f64, points: usize) -> Result<Vec<f64>, CalabiError> {
    if points < 2 {
        return Err(CalabiError::InvalidGrid(format!("{points} points; need at least 2")));
    }
    let (s0, s1) = (1.0 + tau0, 1.0 + tau_max);
    if !(s0 > 0.0) || !(s1 > s0) || !s1.is_finite() {
        return Err(CalabiError::InvalidGrid(format!(
            "need -1 < tau0 < tau_max, got tau0 = {tau0}, tau_max = {tau_max}"
        )));
    }
    let ratio = (s1 / s0).ln();
    let mut taus: Vec<f64> = (0..points)
        .map(|i| s0 * (ratio * i as f64 / (points - 1) as f64).exp() - 1.0)
        .collect();
    taus[0] = tau0;
    taus[points - 1] = tau_max;
    Ok(taus)
}

/// Conventional starting momentum: half a unit past the zero section.
pub fn default_tau0(profile: &EinsteinProfile) -> Result<f64, CalabiError> {
    Ok(positive_root(profile)? + 0.5 - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSample {
    pub tau: f64,
    /// `t(τ)` measured from `τ₀`.
    pub t: f64,
    /// `c − t(τ)`, computed directly as the tail integral.
    pub remaining: f64,
    /// Fiber arclength `∫_{τ₀}^{τ} φ^{-1/2} dx`.
    pub arclength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDiagnostics {
    pub tau_star: f64,
    /// Upper end of the `t` range; `+∞` when `1/φ` is not integrable.
    pub c: f64,
    /// `e^{c/2k}`, the radius of the disc bundle carrying the complete metric.
    pub disc_radius: f64,
    pub arclength_divergent: bool,
    /// `β` in `c − t ~ e^{−β L}`; absent when `c` is infinite.
    pub fitted_rate: Option<f64>,
    /// `c − t(τ)` strictly decreases along the grid.
    pub remaining_monotone: bool,
    pub samples: Vec<DiagnosticSample>,
}

/// Completeness diagnostics on the default grid from `tau0` to [`DEFAULT_TAU_MAX`].
pub fn completeness_report(profile: &EinsteinProfile, tau0: f64) -> Result<ProfileDiagnostics, CalabiError> {
    completeness_report_on(profile, &geometric_taus(tau0, DEFAULT_TAU_MAX, DEFAULT_GRID_POINTS)?)
}

/// Completeness diagnostics on an explicit increasing momentum grid.
pub fn completeness_report_on(profile: &EinsteinProfile, taus: &[f64]) -> Result<ProfileDiagnostics, CalabiError> {
    let s_star = positive_root(profile)?;
    if taus.len() < 2 || taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CalabiError::InvalidGrid("need ≥ 2 strictly increasing points".into()));
    }
    profile.check_domain(taus[0])?;

    let cfg = quad_config();
    let mut samples = Vec::with_capacity(taus.len());
    let (mut t, mut arclength) = (0.0, 0.0);
    for (i, &tau) in taus.iter().enumerate() {
        if i > 0 {
            let a = taus[i - 1];
            t += integrate(|x| 1.0 / profile.phi_at_tau(x), a, tau, &cfg)?.value;
            arclength += integrate(|x| profile.phi_at_tau(x).powf(-0.5), a, tau, &cfg)?.value;
        }
        samples.push(DiagnosticSample {
            tau,
            t,
            remaining: tail_integral(profile, tau)?,
            arclength,
        });
    }

    let last = samples.last().expect("at least two samples");
    let c = last.t + last.remaining;
    let finite = c.is_finite();
    let remaining_monotone = finite && samples.windows(2).all(|w| w[1].remaining < w[0].remaining);

    // Window of (at most) one decade in s at the far end of the grid.
    let s_first = 1.0 + taus[0];
    let s_last = 1.0 + taus[taus.len() - 1];
    let decade = 10f64.min((s_last / s_first).sqrt());
    let index_at = |s: f64| samples.iter().position(|p| 1.0 + p.tau >= s).unwrap_or(samples.len() - 1);
    let mid = index_at(s_last / decade);
    let low = index_at(s_last / (decade * decade));

    let inc_last = last.arclength - samples[mid].arclength;
    let inc_prev = samples[mid].arclength - samples[low].arclength;
    let arclength_divergent = inc_last > 0.0 && inc_last >= 0.5 * inc_prev;

    let fitted_rate = if finite {
        let window = &samples[mid..];
        let xs: Vec<f64> = window.iter().map(|p| p.arclength).collect();
        let ys: Vec<f64> = window.iter().map(|p| p.remaining.ln()).collect();
        least_squares_slope(&xs, &ys).map(|slope| -slope)
    } else {
        None
    };

    Ok(ProfileDiagnostics {
        tau_star: s_star - 1.0,
        c,
        disc_radius: (c / (2.0 * profile.k as f64)).exp(),
        arclength_divergent,
        fitted_rate,
        remaining_monotone,
        samples,
    })
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// One row of the profile table: momentum, profile, coordinate, potential and
/// the metric coefficients `A = 1 + τ` (transverse) and `B = 1/φ` (fiber).
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub tau: f64,
    pub phi: f64,
    pub t: f64,
    pub potential: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub rows: Vec<ProfileRow>,
}

pub const CSV_HEADER: &str = "tau,phi,t,F,A,B";

impl ProfileTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [r.tau, r.phi, r.t, r.potential, r.a, r.b].map(fmt12);
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CalabiError> {
        fs::write(path, self.to_csv()).map_err(|e| CalabiError::Io(e.to_string()))
    }
}

/// Sample the profile on `grid_size` points geometric in `s` from `tau0` to
/// [`DEFAULT_TAU_MAX`].
pub fn emit_profile_csv(profile: &EinsteinProfile, tau0: f64, grid_size: usize) -> Result<ProfileTable, CalabiError> {
    profile_table_on(profile, &geometric_taus(tau0, DEFAULT_TAU_MAX, grid_size)?)
}

pub fn profile_table_on(profile: &EinsteinProfile, taus: &[f64]) -> Result<ProfileTable, CalabiError> {
    let first = *taus.first().ok_or_else(|| CalabiError::InvalidGrid("empty grid".into()))?;
    profile.check_domain(first)?;
    let cfg = quad_config();
    let (mut t, mut potential) = (0.0, 0.0);
    let mut rows = Vec::with_capacity(taus.len());
    for (i, &tau) in taus.iter().enumerate() {
        if i > 0 {
            let a = taus[i - 1];
            t += integrate(|x| 1.0 / profile.phi_at_tau(x), a, tau, &cfg)?.value;
            potential += integrate(|x| x / profile.phi_at_tau(x), a, tau, &cfg)?.value;
        }
        let phi = profile.phi_at_tau(tau);
        rows.push(ProfileRow {
            tau,
            phi,
            t,
            potential,
            a: 1.0 + tau,
            b: 1.0 / phi,
        });
    }
    Ok(ProfileTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i32, i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().map(|&(e, n, d)| (e, rat(n, d))))
    }

    /// Independent oracle: plain bisection on f64 from a wide bracket.
    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        assert!(f(a) < 0.0 && f(b) > 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m) > 0.0 {
                b = m
            } else {
                a = m
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn solve_profile_examples() {
        let p = solve_profile(2, 3, rat(4, 3), rat(-7, 6)).unwrap();
        assert_eq!(*p.phi(), lp(&[(1, 1, 3), (2, 4, 9), (-1, -7, 6)]));
        let flat = solve_profile(4, 5, int(0), int(0)).unwrap();
        assert_eq!(*flat.phi(), lp(&[(1, 1, 5)]));
        let rf = solve_profile(3, 3, int(0), rat(-1, 3)).unwrap();
        assert_eq!(*rf.phi(), lp(&[(1, 1, 3), (-2, -1, 3)]));
        assert_eq!(rf.phi().eval_exact(&int(1)).unwrap(), int(0));
        assert!(solve_profile(1, 3, int(1), int(0)).is_err());
        assert!(solve_profile(2, 0, int(1), int(0)).is_err());
    }

    #[test]
    fn paper_profile_parameters() {
        let p = paper_profile(2, 3).unwrap();
        assert_eq!(*p.lambda(), rat(4, 3));
        assert_eq!(*p.integration_constant(), rat(-7, 6));
        let p = paper_profile(3, 4).unwrap();
        assert_eq!(*p.lambda(), rat(5, 4));
        assert_eq!(*p.integration_constant(), rat(-10, 12));
        assert_eq!(paper_profile(2, 2).unwrap_err(), CalabiError::InadmissibleOrder { n: 2, k: 2 });
        assert!(paper_profile_any_order(2, 2).is_ok());
    }

    #[test]
    fn paper_profile_matches_displayed_coefficients() {
        // φ = (1/k)s − (n−2k)/(k(n+1)) s² − (2n+k)/(n(n+1)) s^(1−n)
        for n in 2..=6i64 {
            for k in n + 1..=12 {
                let p = paper_profile(n as u32, k as u32).unwrap();
                let expected = lp(&[
                    (1, 1, k),
                    (2, -(n - 2 * k), k * (n + 1)),
                    (1 - n as i32, -(2 * n + k), n * (n + 1)),
                ]);
                assert_eq!(*p.phi(), expected);
            }
        }
    }

    #[test]
    fn identity_holds_and_detects_perturbation() {
        assert!(check_einstein_identity(&paper_profile(2, 3).unwrap()));
        assert!(check_einstein_identity(&paper_profile(5, 9).unwrap()));
        let phi = lp(&[(1, 1, 3), (2, 5, 9), (-1, -7, 6)]);
        let bad = EinsteinProfile::from_parts(2, 3, rat(4, 3), rat(-7, 6), phi);
        assert!(!check_einstein_identity(&bad));
        // Residual is exactly −3·(5/9 − 4/9)·s.
        assert_eq!(einstein_residual(&bad), lp(&[(1, -1, 3)]));
    }

    #[test]
    fn root_of_paper_profile() {
        let p = paper_profile(2, 3).unwrap();
        let s = positive_root(&p).unwrap();
        // 18 s φ(s) = 8s³ + 6s² − 21
        let oracle = bisect(|x| 8.0 * x.powi(3) + 6.0 * x * x - 21.0, 0.0, 3.0);
        assert!((s - oracle).abs() < 2e-12);
        assert!((s - 1.16944).abs() < 1e-5);
    }

    #[test]
    fn root_is_exact_at_rational_probe() {
        let rf = solve_profile(3, 3, int(0), rat(-1, 3)).unwrap();
        assert_eq!(positive_root(&rf).unwrap(), 1.0);
    }

    #[test]
    fn root_errors() {
        let p = solve_profile(2, 3, rat(4, 3), int(0)).unwrap();
        assert_eq!(positive_root(&p), Err(CalabiError::NoPositiveRoot));
        let p = solve_profile(5, 2, rat(-1, 2), rat(-1, 1)).unwrap();
        assert_eq!(positive_root(&p), Err(CalabiError::NotEventuallyPositive));
    }

    #[test]
    fn t_of_linear_profile_is_logarithmic() {
        let p = solve_profile(3, 4, int(0), int(0)).unwrap();
        let (tau0, tau) = (0.25, 7.5);
        let t = momentum_to_t(&p, tau0, tau).unwrap();
        assert!((t - 4.0 * ((1.0 + tau) / (1.0 + tau0)).ln()).abs() < 1e-10);
        assert_eq!(momentum_to_t(&p, tau0, tau0).unwrap(), 0.0);
        assert_eq!(momentum_to_t(&p, tau, tau0).unwrap(), -t);
    }

    #[test]
    fn potential_of_linear_profile() {
        let p = solve_profile(2, 3, int(0), int(0)).unwrap();
        let (tau0, tau) = (0.5, 20.0);
        let f = kahler_potential(&p, tau0, tau).unwrap();
        let exact = 3.0 * ((tau - tau0) - ((1.0 + tau) / (1.0 + tau0)).ln());
        assert!((f - exact).abs() < 1e-10);
        assert_eq!(kahler_potential(&p, tau0, tau0).unwrap(), 0.0);
    }

    #[test]
    fn domain_is_enforced() {
        let p = paper_profile(2, 3).unwrap();
        let tau_star = positive_root(&p).unwrap() - 1.0;
        let err = momentum_to_t(&p, tau_star - 0.01, 1.0).unwrap_err();
        assert!(matches!(err, CalabiError::DomainError { .. }));
        assert!(kahler_potential(&p, 1.0, tau_star).is_err());
    }

    #[test]
    fn derivative_of_t_is_reciprocal_phi() {
        let p = paper_profile(2, 3).unwrap();
        let tau0 = default_tau0(&p).unwrap();
        for tau in [tau0 + 0.1, 1.3, 4.0, 55.0] {
            let h = 1e-5 * (1.0 + tau);
            let d = momentum_to_t(&p, tau - h, tau + h).unwrap() / (2.0 * h);
            assert!((d - 1.0 / p.phi_at_tau(tau)).abs() < 1e-8, "tau = {tau} d = {d} want = {}", 1.0 / p.phi_at_tau(tau));
        }
    }

    #[test]
    fn potential_derivative_against_t() {
        // dF/dt = (dF/dτ)/(dt/dτ) = τ
        let p = paper_profile(3, 5).unwrap();
        let tau0 = default_tau0(&p).unwrap();
        for tau in [tau0 + 0.2, 2.0, 9.0] {
            let h = 1e-4 * (1.0 + tau);
            let df = kahler_potential(&p, tau - h, tau + h).unwrap();
            let dt = momentum_to_t(&p, tau - h, tau + h).unwrap();
            assert!((df / dt - tau).abs() < 1e-7 * tau.max(1.0));
        }
    }

    #[test]
    fn tail_of_quadratic_profile() {
        // φ = s²: ∫_s^∞ dx/x² = 1/s
        let phi = lp(&[(2, 1, 1)]);
        let p = EinsteinProfile::from_parts(2, 1, int(3), int(0), phi);
        for tau in [0.0, 3.0, 1e4] {
            let tail = tail_integral(&p, tau).unwrap();
            assert!((tail - 1.0 / (1.0 + tau)).abs() < 1e-14 * (1.0 + 1.0 / (1.0 + tau)));
        }
    }

    #[test]
    fn completeness_of_paper_profile() {
        let p = paper_profile(2, 3).unwrap();
        let tau0 = default_tau0(&p).unwrap();
        let d = completeness_report(&p, tau0).unwrap();
        assert!(d.c.is_finite() && d.c > 0.0);
        assert!(d.remaining_monotone);
        assert!(d.arclength_divergent);
        assert!((d.disc_radius - (d.c / 6.0).exp()).abs() < 1e-15);
        let beta = d.fitted_rate.unwrap();
        let expected = p.asymptotic_rate().unwrap();
        assert!((beta / expected - 1.0).abs() < 0.02, "beta = {beta}, expected {expected}");
        // c − t at each sample agrees with the accumulated t.
        for s in &d.samples {
            assert!((d.c - s.t - s.remaining).abs() < 1e-8);
        }
    }

    #[test]
    fn cone_like_end_has_infinite_range() {
        let p = solve_profile(3, 4, int(0), rat(-1, 4)).unwrap();
        let d = completeness_report(&p, 0.5).unwrap();
        assert!(d.c.is_infinite());
        assert!(d.fitted_rate.is_none());
        assert!(d.arclength_divergent);
    }

    #[test]
    fn csv_two_rows() {
        let p = paper_profile(2, 3).unwrap();
        let tau0 = default_tau0(&p).unwrap();
        let table = emit_profile_csv(&p, tau0, 2).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].t, 0.0);
        assert_eq!(table.rows[0].potential, 0.0);
        let csv = table.to_csv();
        assert!(csv.starts_with("tau,phi,t,F,A,B\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(!csv.contains('\r'));
        for row in &table.rows {
            assert!((row.b * row.phi - 1.0).abs() <= 2.0 * f64::EPSILON);
            assert_eq!(row.a, 1.0 + row.tau);
        }
        assert!(emit_profile_csv(&p, tau0, 1).is_err());
    }
}
