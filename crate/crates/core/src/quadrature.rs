//! Globally adaptive 7/15-point Gauss-Kronrod quadrature on finite intervals.
//!
//! Improper integrals are handled by the caller through a change of variables
//! (see `calabi::tail_integral`), so only proper integrals reach this module.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not reach tolerance {tol:e} after {intervals} subintervals (estimate {estimate:e})")]
    NotConverged {
        tol: f64,
        estimate: f64,
        intervals: usize,
    },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
}

// Kronrod abscissae on [0, 1) for the 15-point rule; odd indices are the
// 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One application of the 15-point rule; the error is the Gauss/Kronrod gap.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let sum = f(center - x) + f(center + x);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

/// Integrate `f` over `[a, b]`, bisecting the worst subinterval until the
/// summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
///
/// Reversed limits give the negated integral.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    if b < a {
        let est = integrate(f, b, a, config)?;
        return Ok(Estimate {
            value: -est.value,
            error: est.error,
        });
    }

    let first = gauss_kronrod_15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, est: first });
    let (mut total, mut error) = (first.value, first.error);

    loop {
        if !total.is_finite() {
            return Err(QuadratureError::NonFinite(locate_bad(&f, &heap)));
        }
        let tol = config.abs_tol.max(config.rel_tol * total.abs());
        if error <= tol {
            return Ok(Estimate {
                value: total,
                error,
            });
        }
        if heap.len() >= config.max_intervals {
            return Err(QuadratureError::NotConverged {
                tol,
                estimate: error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at double precision; keep what we have.
            return Err(QuadratureError::NotConverged {
                tol,
                estimate: error,
                intervals: heap.len() + 1,
            });
        }
        let left = gauss_kronrod_15(&f, worst.a, mid);
        let right = gauss_kronrod_15(&f, mid, worst.b);
        total += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            est: right,
        });
        // Re-sum occasionally so the running totals do not drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.est.value).sum();
            error = heap.iter().map(|p| p.est.error).sum();
        }
    }
}

fn locate_bad<F: Fn(f64) -> f64>(f: &F, heap: &BinaryHeap<Piece>) -> f64 {
    heap.iter()
        .find(|p| !p.est.value.is_finite())
        .map(|p| {
            let mid = 0.5 * (p.a + p.b);
            if f(mid).is_finite() {
                p.a
            } else {
                mid
            }
        })
        .unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // K15 integrates degree-22 polynomials exactly on one panel.
        let est = gauss_kronrod_15(&|x: f64| x.powi(10) - 3.0 * x.powi(3), 0.0, 2.0);
        let exact = 2f64.powi(11) / 11.0 - 3.0 * 2f64.powi(4) / 4.0;
        assert!((est.value - exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_log_singularity_near_endpoint() {
        // ∫_ε^1 dx/x = −ln ε
        let eps = 1e-6;
        let est = integrate(|x| 1.0 / x, eps, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((est.value + eps.ln()).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_negate() {
        let cfg = QuadratureConfig::default();
        let fwd = integrate(f64::exp, 0.0, 1.5, &cfg).unwrap().value;
        let back = integrate(f64::exp, 1.5, 0.0, &cfg).unwrap().value;
        assert_eq!(fwd, -back);
        assert!((fwd - (1.5f64.exp() - 1.0)).abs() < 1e-12);
        assert_eq!(integrate(f64::exp, 2.0, 2.0, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_intervals: 4,
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, QuadratureError::NotConverged { .. }));
    }

    #[test]
    fn non_finite_integrand() {
        let err = integrate(|x: f64| 1.0 / (x - 0.5), 0.0, 1.0, &QuadratureConfig::default());
        assert!(err.is_err());
    }
}
