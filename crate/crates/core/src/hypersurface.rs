//! Weighted homogeneous hypersurface singularities `{f = 0} ⊂ ℂ^{n+1}`:
//! weighted degree, property S-E, the obstruction verdict and discrepancy
//! ledgers for the iterated weighted blow-ups of three Brieskorn-type families.

use std::fmt;

use num::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypersurfaceError {
    #[error("polynomial has no monomials")]
    EmptyPolynomial,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("monomial {index} has {got} exponents, expected {expected}")]
    ArityMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("monomial {index} has weighted degree {got}, expected {expected}")]
    NotHomogeneous { index: usize, got: i64, expected: i64 },
    #[error("parameters out of range: {0}")]
    ParameterOutOfRange(String),
}

impl HypersurfaceError {
    pub fn code(&self) -> &'static str {
        match self {
            HypersurfaceError::EmptyPolynomial => "EmptyPolynomial",
            HypersurfaceError::InvalidWeights(_) => "InvalidWeights",
            HypersurfaceError::ArityMismatch { .. } => "ArityMismatch",
            HypersurfaceError::NotHomogeneous { .. } => "NotHomogeneous",
            HypersurfaceError::ParameterOutOfRange(_) => "ParameterOutOfRange",
        }
    }
}

fn check_weights(weights: &[i64]) -> Result<(), HypersurfaceError> {
    if weights.is_empty() {
        return Err(HypersurfaceError::InvalidWeights("no weights".into()));
    }
    if let Some(w) = weights.iter().find(|&&w| w <= 0) {
        return Err(HypersurfaceError::InvalidWeights(format!("weight {w} is not positive")));
    }
    Ok(())
}

/// `Σ wᵢ·aᵢ` for one exponent vector.
fn monomial_degree(exponents: &[u32], weights: &[i64]) -> i64 {
    exponents.iter().zip(weights).map(|(&a, &w)| a as i64 * w).sum()
}

/// Largest `j` such that every monomial has weighted degree at least `j`,
/// i.e. the minimum of `Σ wᵢ·aᵢ` over the monomials.
pub fn weighted_degree(monomials: &[Vec<u32>], weights: &[i64]) -> Result<i64, HypersurfaceError> {
    check_weights(weights)?;
    if monomials.is_empty() {
        return Err(HypersurfaceError::EmptyPolynomial);
    }
    for (index, m) in monomials.iter().enumerate() {
        if m.len() != weights.len() {
            return Err(HypersurfaceError::ArityMismatch {
                index,
                got: m.len(),
                expected: weights.len(),
            });
        }
    }
    Ok(monomials
        .iter()
        .map(|m| monomial_degree(m, weights))
        .min()
        .expect("nonempty"))
}

/// `f = Σ c_a z^a` with every monomial of the same weighted degree; only the
/// support matters here, so coefficients are implied nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedHypersurface {
    weights: Vec<i64>,
    monomials: Vec<Vec<u32>>,
    degree: i64,
}

impl WeightedHypersurface {
    pub fn new(weights: Vec<i64>, monomials: Vec<Vec<u32>>) -> Result<Self, HypersurfaceError> {
        let degree = weighted_degree(&monomials, &weights)?;
        let g = weights.iter().fold(0i64, |g, w| g.gcd(w));
        if g != 1 {
            return Err(HypersurfaceError::InvalidWeights(format!("weights share the factor {g}")));
        }
        if let Some((index, got)) = monomials
            .iter()
            .map(|m| monomial_degree(m, &weights))
            .enumerate()
            .find(|&(_, d)| d != degree)
        {
            return Err(HypersurfaceError::NotHomogeneous {
                index,
                got,
                expected: degree,
            });
        }
        Ok(Self {
            weights,
            monomials,
            degree,
        })
    }

    /// Brieskorn-Pham polynomial `z₀^{a₀} + … + z_n^{a_n}` with weights `L/aᵢ`,
    /// `L = lcm(aᵢ)`, reduced to coprime form.
    pub fn brieskorn(exponents: &[u32]) -> Result<Self, HypersurfaceError> {
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(HypersurfaceError::InvalidWeights("exponents must be positive".into()));
        }
        let l = exponents.iter().fold(1i64, |l, &a| l.lcm(&(a as i64)));
        let weights: Vec<i64> = exponents.iter().map(|&a| l / a as i64).collect();
        let monomials = (0..exponents.len())
            .map(|i| {
                let mut m = vec![0; exponents.len()];
                m[i] = exponents[i];
                m
            })
            .collect();
        Self::new(weights, monomials)
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `n + 1`, the number of variables.
    pub fn ambient_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn se_property(&self) -> bool {
        se_property(&self.weights, self.degree)
    }

    /// Hypersurfaces are Gorenstein, so the verdict is never inconclusive.
    pub fn ke_obstruction(&self) -> ObstructionReport {
        ke_obstruction(&self.weights, self.degree, true)
    }
}

/// Property S-E for a weighted homogeneous hypersurface: `Σ wᵢ > d`.
pub fn se_property(weights: &[i64], degree: i64) -> bool {
    weights.iter().sum::<i64>() > degree
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObstructionVerdict {
    /// No Kähler-Einstein filling: property S-E and Gorenstein both hold.
    Obstructed,
    /// `Σ wᵢ ≤ d`; the test says nothing.
    UnobstructedByThisTest,
    /// Property S-E holds but the singularity is not Gorenstein.
    Inconclusive,
}

impl ObstructionVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObstructionVerdict::Obstructed => "obstructed",
            ObstructionVerdict::UnobstructedByThisTest => "unobstructed_by_this_test",
            ObstructionVerdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub verdict: ObstructionVerdict,
    pub weight_sum: i64,
    pub degree: i64,
    pub se_property: bool,
    pub gorenstein: bool,
    /// Always true: the singularity being isolated is taken on trust.
    pub isolated_singularity_assumed: bool,
}

pub fn ke_obstruction(weights: &[i64], degree: i64, gorenstein: bool) -> ObstructionReport {
    let weight_sum = weights.iter().sum();
    let se = se_property(weights, degree);
    let verdict = match (se, gorenstein) {
        (false, _) => ObstructionVerdict::UnobstructedByThisTest,
        (true, true) => ObstructionVerdict::Obstructed,
        (true, false) => ObstructionVerdict::Inconclusive,
    };
    ObstructionReport {
        verdict,
        weight_sum,
        degree,
        se_property: se,
        gorenstein,
        isolated_singularity_assumed: true,
    }
}

/// Coefficient `|w| − deg f − 1` of `X′ ∩ E` in `K_{X′} = ϖ*K_X + (…)·(X′ ∩ E)`.
pub fn adjunction_coefficient(weights: &[i64], degree_of_f: i64) -> i64 {
    weights.iter().sum::<i64>() - degree_of_f - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlowupFamily {
    /// `z₀^d + … + z_{n−1}^d + z_n^k`, ordinary blow-ups.
    Ex1,
    /// `z₀^d + z₁^{2d} + … + z_{n−1}^{2d} + z_n^k`, weight `(2,1,…,1)`.
    Ex2,
    /// `z₀^{2d} + z₁^{3d} + z₂^{6d} + … + z_{n−1}^{6d} + z_n^k`, weight `(3,2,1,…,1)`.
    Ex3,
}

impl BlowupFamily {
    /// `c` with each blow-up lowering the `z_n` exponent by `c·d`.
    pub fn multiplier(&self) -> i64 {
        match self {
            BlowupFamily::Ex1 => 1,
            BlowupFamily::Ex2 => 2,
            BlowupFamily::Ex3 => 6,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BlowupFamily::Ex1 => "ex1",
            BlowupFamily::Ex2 => "ex2",
            BlowupFamily::Ex3 => "ex3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Some(BlowupFamily::Ex1),
            "ex2" => Some(BlowupFamily::Ex2),
            "ex3" => Some(BlowupFamily::Ex3),
            _ => None,
        }
    }

    /// Weight vector of every blow-up in the chain, `n + 1` entries.
    pub fn step_weights(&self, n: usize) -> Vec<i64> {
        let mut w = vec![1; n + 1];
        match self {
            BlowupFamily::Ex1 => {}
            BlowupFamily::Ex2 => w[0] = 2,
            BlowupFamily::Ex3 => {
                w[0] = 3;
                w[1] = 2;
            }
        }
        w
    }

    /// Exponent vectors of the family polynomial.
    pub fn monomials(&self, n: usize, d: u32, k: u32) -> Vec<Vec<u32>> {
        let pure = |i: usize, a: u32| {
            let mut m = vec![0; n + 1];
            m[i] = a;
            m
        };
        let mut out: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let a = match (self, i) {
                    (BlowupFamily::Ex1, _) => d,
                    (BlowupFamily::Ex2, 0) => d,
                    (BlowupFamily::Ex2, _) => 2 * d,
                    (BlowupFamily::Ex3, 0) => 2 * d,
                    (BlowupFamily::Ex3, 1) => 3 * d,
                    (BlowupFamily::Ex3, _) => 6 * d,
                };
                pure(i, a)
            })
            .collect();
        out.push(pure(n, k));
        out
    }

    fn check(&self, n: i64, d: i64, k: i64) -> Result<(), HypersurfaceError> {
        let c = self.multiplier();
        let (lower, min_n) = match self {
            BlowupFamily::Ex1 => (n + 1, 1),
            BlowupFamily::Ex2 => (n + 2, 1),
            BlowupFamily::Ex3 => (n + 4, 2),
        };
        if n < min_n {
            return Err(HypersurfaceError::ParameterOutOfRange(format!(
                "{} needs n >= {min_n}, got n = {n}",
                self.as_str()
            )));
        }
        if !(k >= c * d && c * d >= lower) {
            let cd = if c == 1 { "d".to_string() } else { format!("{c}d") };
            return Err(HypersurfaceError::ParameterOutOfRange(format!(
                "{} needs k >= {cd} >= {lower}, got d = {d}, k = {k}",
                self.as_str()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BlowupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupLedger {
    pub family: BlowupFamily,
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub step_weights: Vec<i64>,
    /// Weighted degree of the polynomial at each step, `c·d`.
    pub step_degree: i64,
    /// `|w| − c·d − 1`.
    pub step_coefficient: i64,
    pub steps: u32,
    pub smooth_end: bool,
    /// `aᵢ = i·(|w| − c·d − 1)`, the coefficient of `Eᵢ` in `K`.
    pub discrepancies: Vec<i64>,
}

/// Discrepancies of the chain of `⌊k/(c·d)⌋` weighted blow-ups.
///
/// The coefficients are reported as computed; no positivity claim is drawn
/// from their signs.
pub fn blowup_ledger(family: BlowupFamily, n: u32, d: u32, k: u32) -> Result<BlowupLedger, HypersurfaceError> {
    family.check(n as i64, d as i64, k as i64)?;
    let step_weights = family.step_weights(n as usize);
    let step_degree = weighted_degree(&family.monomials(n as usize, d, k), &step_weights)?;
    let step_coefficient = adjunction_coefficient(&step_weights, step_degree);
    let period = family.multiplier() * d as i64;
    let steps = (k as i64 / period) as u32;
    let rem = k as i64 % period;
    Ok(BlowupLedger {
        family,
        n,
        d,
        k,
        step_weights,
        step_degree,
        step_coefficient,
        steps,
        smooth_end: rem == 0 || rem == 1,
        discrepancies: (1..=steps as i64).map(|i| i * step_coefficient).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_degree_examples() {
        let cubic = vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]];
        assert_eq!(weighted_degree(&cubic, &[1, 1, 1]), Ok(3));
        for k in [3u32, 5, 7, 9] {
            let f = WeightedHypersurface::brieskorn(&[2, 2, 2, k]).unwrap();
            assert_eq!(f.weights(), &[k as i64, k as i64, k as i64, 2]);
            assert_eq!(f.degree(), 2 * k as i64);
        }
        // s = lcm(d, k)
        let f = WeightedHypersurface::brieskorn(&[4, 4, 4, 6]).unwrap();
        assert_eq!(f.weights(), &[3, 3, 3, 2]);
        assert_eq!(f.degree(), 12);
    }

    #[test]
    fn weighted_degree_errors() {
        assert_eq!(weighted_degree(&[], &[1, 1]), Err(HypersurfaceError::EmptyPolynomial));
        assert!(matches!(
            weighted_degree(&[vec![1]], &[1, 1]),
            Err(HypersurfaceError::ArityMismatch { .. })
        ));
        assert_eq!(weighted_degree(&[vec![1, 1]], &[1, 0]).unwrap_err().code(), "InvalidWeights");
        let err = WeightedHypersurface::new(vec![1, 1], vec![vec![2, 0], vec![0, 3]]).unwrap_err();
        assert_eq!(err.code(), "NotHomogeneous");
        let err = WeightedHypersurface::new(vec![2, 2], vec![vec![1, 0]]).unwrap_err();
        assert_eq!(err.code(), "InvalidWeights");
    }

    #[test]
    fn se_property_examples() {
        for k in [3, 5, 101] {
            assert!(se_property(&[k, k, k, 2], 2 * k));
        }
        assert!(!se_property(&[2, 2, 2, 1], 8));
        assert!(!se_property(&[1, 1], 2));
    }

    #[test]
    fn verdict_table() {
        // every (S-E, Gorenstein) combination
        let cases = [
            (&[3i64, 3, 3, 2][..], 6, true, ObstructionVerdict::Obstructed),
            (&[3, 3, 3, 2][..], 6, false, ObstructionVerdict::Inconclusive),
            (&[2, 2, 2, 1][..], 8, true, ObstructionVerdict::UnobstructedByThisTest),
            (&[2, 2, 2, 1][..], 8, false, ObstructionVerdict::UnobstructedByThisTest),
            (&[1, 1][..], 2, true, ObstructionVerdict::UnobstructedByThisTest),
            (&[1, 1][..], 2, false, ObstructionVerdict::UnobstructedByThisTest),
        ];
        for (w, d, gor, want) in cases {
            let r = ke_obstruction(w, d, gor);
            assert_eq!(r.verdict, want, "{w:?} {d} {gor}");
            assert!(r.isolated_singularity_assumed);
            assert_eq!(r.gorenstein, gor);
        }
        let brieskorn = WeightedHypersurface::brieskorn(&[2, 2, 2, 5]).unwrap();
        assert_eq!(brieskorn.ke_obstruction().verdict, ObstructionVerdict::Obstructed);
        assert_eq!(ObstructionVerdict::UnobstructedByThisTest.to_string(), "unobstructed_by_this_test");
    }

    #[test]
    fn adjunction_examples() {
        assert_eq!(adjunction_coefficient(&[1, 1, 1, 1], 4), -1);
        assert_eq!(adjunction_coefficient(&[2, 1, 1, 1], 6), -2);
        for n in 1..6 {
            assert_eq!(adjunction_coefficient(&vec![1; n + 1], 0), n as i64);
        }
    }

    #[test]
    fn ledger_examples() {
        let l = blowup_ledger(BlowupFamily::Ex1, 3, 4, 9).unwrap();
        assert_eq!((l.steps, l.smooth_end), (2, true));
        assert_eq!(l.discrepancies, vec![-1, -2]);
        assert_eq!(l.step_degree, 4);
        let l = blowup_ledger(BlowupFamily::Ex1, 3, 4, 10).unwrap();
        assert!(!l.smooth_end);
        let l = blowup_ledger(BlowupFamily::Ex2, 3, 3, 12).unwrap();
        assert_eq!(l.steps, 2);
        assert_eq!(l.step_weights, vec![2, 1, 1, 1]);
        assert_eq!(l.discrepancies, vec![-2, -4]);
        let l = blowup_ledger(BlowupFamily::Ex3, 2, 1, 13).unwrap();
        assert_eq!(l.step_weights, vec![3, 2, 1]);
        assert_eq!(l.step_degree, 6);
        assert_eq!(l.step_coefficient, 6 - 6 - 1);
        assert_eq!((l.steps, l.smooth_end), (2, true));
    }

    #[test]
    fn ledger_rejects_out_of_range() {
        for (fam, n, d, k) in [
            (BlowupFamily::Ex1, 3, 3, 9),
            (BlowupFamily::Ex1, 3, 4, 3),
            (BlowupFamily::Ex2, 3, 2, 12),
            (BlowupFamily::Ex3, 1, 1, 6),
            (BlowupFamily::Ex3, 3, 1, 5),
        ] {
            let err = blowup_ledger(fam, n, d, k).unwrap_err();
            assert_eq!(err.code(), "ParameterOutOfRange", "{fam} {n} {d} {k}");
        }
    }
}
