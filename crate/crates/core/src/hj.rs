//! Hirzebruch-Jung strings of cyclic quotient singularities `ℂ²/ℤ_p` of type `(p; q)`.
//!
//! Orientation: `entries[i-1]` is the self-intersection `-C_i²` of the i-th
//! compact curve, and `stabilizers[i]` is the stabilizer of `C_i` for
//! `i = 0..=k+1`. `C_0` is the non-compact curve with stabilizer `(1, 0)`,
//! `C_1` carries `(1, 1)` and meets `C_0`, and `C_{k+1}` is the other
//! non-compact curve with stabilizer `(p - q, p)`.

use num::{Integer, Signed, Zero};
use thiserror::Error;

use crate::exact_arith::{int, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HjError {
    #[error("invalid quotient data (p, q) = ({p}, {q}): need p > q > 0 and gcd(p, q) = 1")]
    InvalidQuotient { p: i64, q: i64 },
    #[error("invalid continued-fraction entries: {0}")]
    InvalidEntries(String),
    #[error("entries do not expand (p, q) = ({p}, {q})")]
    EntriesMismatch { p: i64, q: i64 },
    #[error("matrix is not square")]
    NonSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("integer overflow evaluating the continued fraction")]
    Overflow,
}

impl HjError {
    pub fn code(&self) -> &'static str {
        match self {
            HjError::InvalidQuotient { .. } => "InvalidQuotient",
            HjError::InvalidEntries(_) => "InvalidEntries",
            HjError::EntriesMismatch { .. } => "EntriesMismatch",
            HjError::NonSquare => "NonSquare",
            HjError::NotSymmetric => "NotSymmetric",
            HjError::Overflow => "Overflow",
        }
    }
}

/// Type `(p; q)` of the cyclic group generated by `diag(e^{2πiq/p}, e^{2πi/p})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuotientData {
    p: i64,
    q: i64,
}

impl QuotientData {
    pub fn new(p: i64, q: i64) -> Result<Self, HjError> {
        if q <= 0 || p <= q || p.gcd(&q) != 1 {
            return Err(HjError::InvalidQuotient { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

/// Resolution data of a cyclic quotient singularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HjString {
    pub data: QuotientData,
    pub entries: Vec<i64>,
    pub stabilizers: Vec<(i64, i64)>,
}

impl HjString {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ke_admissible(&self) -> bool {
        ke_admissible(&self.entries)
    }

    /// Dense, so quadratic in the string length.
    pub fn intersection(&self) -> Vec<Vec<i64>> {
        intersection_matrix(&self.entries)
    }
}

/// Expand `p/q = e₁ − 1/(e₂ − 1/(… − 1/e_k))` with the ceiling-division
/// recursion `q_{i-1} = e_{i+1} q_i − q_{i+1}`, `0 ≤ q_{i+1} < q_i`.
pub fn hj_expand(data: QuotientData) -> HjString {
    let entries = continued_fraction(data.p, data.q);
    let stabilizers = stabilizers_from_entries(&entries);
    HjString {
        data,
        entries,
        stabilizers,
    }
}

fn continued_fraction(p: i64, q: i64) -> Vec<i64> {
    let (mut prev, mut cur) = (p, q);
    let mut entries = Vec::new();
    while cur > 0 {
        let e = Integer::div_ceil(&prev, &cur);
        let next = e * cur - prev;
        entries.push(e);
        prev = cur;
        cur = next;
    }
    entries
}

/// Inverse of [`hj_expand`]: the reduced `(p, q)` with `p/q` equal to the
/// continued fraction of `entries`.
pub fn hj_evaluate(entries: &[i64]) -> Result<QuotientData, HjError> {
    if entries.is_empty() {
        return Err(HjError::InvalidEntries("empty entry list".into()));
    }
    if let Some(bad) = entries.iter().find(|&&e| e < 2) {
        return Err(HjError::InvalidEntries(format!("entry {bad} < 2")));
    }
    let (p, q) = convergent(entries)?;
    QuotientData::new(p, q)
}

/// `(P, Q)` with `P/Q = e₁ − 1/(e₂ − …)`, by the three-term recurrence
/// `P_j = e_j P_{j-1} − P_{j-2}` seeded with `P_0/Q_0 = 1/0`, `P_{-1}/Q_{-1} = 0/−1`.
fn convergent(entries: &[i64]) -> Result<(i64, i64), HjError> {
    let (mut p_prev, mut p) = (0i64, 1i64);
    let (mut q_prev, mut q) = (-1i64, 0i64);
    for &e in entries {
        let p_next = e
            .checked_mul(p)
            .and_then(|v| v.checked_sub(p_prev))
            .ok_or(HjError::Overflow)?;
        let q_next = e
            .checked_mul(q)
            .and_then(|v| v.checked_sub(q_prev))
            .ok_or(HjError::Overflow)?;
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
    }
    Ok((p, q))
}

fn stabilizers_from_entries(entries: &[i64]) -> Vec<(i64, i64)> {
    let mut chain = Vec::with_capacity(entries.len() + 2);
    chain.push((1, 0));
    // n/(n − m) equals the depth-(i−1) convergent P/Q, so (m, n) = (P − Q, P).
    for depth in 0..=entries.len() {
        let (p, q) = convergent(&entries[..depth]).expect("prefix of a valid string");
        chain.push((p - q, p));
    }
    chain
}

/// Stabilizers `(m_i, n_i)` of `C_0, …, C_{k+1}`.
pub fn stabilizer_chain(data: QuotientData, entries: &[i64]) -> Result<Vec<(i64, i64)>, HjError> {
    let evaluated = hj_evaluate(entries)?;
    if evaluated != data {
        return Err(HjError::EntriesMismatch {
            p: data.p,
            q: data.q,
        });
    }
    Ok(stabilizers_from_entries(entries))
}

/// Tridiagonal matrix with `-e_i` on the diagonal and `1` beside it.
pub fn intersection_matrix(entries: &[i64]) -> Vec<Vec<i64>> {
    let k = entries.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| match i.abs_diff(j) {
                    0 => -entries[i],
                    1 => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Sylvester test: leading principal minors alternate in sign starting
/// negative, evaluated exactly.
///
/// Elimination runs inside the matrix bandwidth; every minor is the product
/// of the pivots so far, so the test reduces to every pivot being negative.
pub fn is_negative_definite(matrix: &[Vec<i64>]) -> Result<bool, HjError> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(HjError::NonSquare);
    }
    for i in 0..n {
        for j in 0..i {
            if matrix[i][j] != matrix[j][i] {
                return Err(HjError::NotSymmetric);
            }
        }
    }
    let band = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| matrix[i][j] != 0)
        .map(|(i, j)| i.abs_diff(j))
        .max()
        .unwrap_or(0);

    // Row i holds columns i - band ..= i + band; elimination without
    // pivoting never fills in outside the band.
    let width = 2 * band + 1;
    let col = |i: usize, off: usize| (i + off).checked_sub(band).filter(|&c| c < n);
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..width)
                .map(|off| col(i, off).map_or_else(BigRational::zero, |c| int(matrix[i][c])))
                .collect()
        })
        .collect();
    for j in 0..n {
        let pivot = a[j][band].clone();
        if !pivot.is_negative() {
            return Ok(false);
        }
        let last = (j + band).min(n - 1);
        for i in j + 1..=last {
            // column j sits at offset band - (i - j) in row i
            let lead = a[i][band - (i - j)].clone();
            if lead.is_zero() {
                continue;
            }
            let factor = &lead / &pivot;
            for c in j..=last {
                let src = &a[j][band + c - j];
                if src.is_zero() {
                    continue;
                }
                let delta = &factor * src;
                a[i][band + c - i] -= delta;
            }
        }
    }
    Ok(true)
}

/// `c₁(X) < 0` criterion: every entry at least 3.
pub fn ke_admissible(entries: &[i64]) -> bool {
    entries.iter().all(|&e| e >= 3)
}
