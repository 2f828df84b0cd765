//! Whether a normal CR 3-manifold bounds a Kähler-Einstein surface, decided
//! from Seifert data or from cyclic-quotient data.
//!
//! In both cases the answer reduces to the Hirzebruch-Jung strings of the
//! singular points: yes exactly when every curve has self-intersection at
//! most −3.

use std::fmt;

use thiserror::Error;

use crate::hj::{hj_expand, HjError, QuotientData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Cr3Error {
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error(transparent)]
    Hj(#[from] HjError),
}

impl Cr3Error {
    pub fn code(&self) -> &'static str {
        match self {
            Cr3Error::OutOfScope(_) => "OutOfScope",
            Cr3Error::Hj(e) => e.code(),
        }
    }
}

/// Base genus and multiple fibers `(m_j; q_j)` of a Seifert bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    genus: u32,
    fibers: Vec<QuotientData>,
}

impl SeifertData {
    /// Each fiber needs `0 < q < m` and `gcd(m, q) = 1`.
    pub fn new(genus: u32, fibers: &[(i64, i64)]) -> Result<Self, Cr3Error> {
        let fibers = fibers
            .iter()
            .map(|&(m, q)| QuotientData::new(m, q))
            .collect::<Result<_, _>>()?;
        Ok(Self { genus, fibers })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn fibers(&self) -> &[QuotientData] {
        &self.fibers
    }

    pub fn with_fiber(&self, fiber: QuotientData) -> Self {
        let mut fibers = self.fibers.clone();
        fibers.push(fiber);
        Self {
            genus: self.genus,
            fibers,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    OutOfScope,
}

impl Answer {
    pub fn as_str(&self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::OutOfScope => "out_of_scope",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// HJ string of one singular point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSummary {
    pub p: i64,
    pub q: i64,
    pub entries: Vec<i64>,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    /// snake_case reason codes.
    pub reasons: Vec<String>,
    pub per_fiber: Vec<FiberSummary>,
    /// Claims carried along without verification.
    pub notes: Vec<String>,
}

pub const REASON_NO_MULTIPLE_FIBERS: &str = "no_multiple_fibers";
pub const REASON_ALL_ENTRIES_AT_LEAST_3: &str = "all_entries_at_least_3";
pub const REASON_ENTRY_BELOW_3: &str = "entry_below_3";
pub const REASON_RULED_OUT: &str = "ruled_out";
pub const REASON_OPEN_FINITE_QUOTIENT: &str = "open_cases_of_finite_quotients";
pub const NOTE_UNIQUENESS: &str = "the Kähler-Einstein filling is unique (reported, not verified)";

fn summarize(data: QuotientData) -> FiberSummary {
    let hj = hj_expand(data);
    FiberSummary {
        p: data.p(),
        q: data.q(),
        admissible: hj.ke_admissible(),
        entries: hj.entries,
    }
}

fn conjoin(per_fiber: Vec<FiberSummary>, mut reasons: Vec<String>) -> Verdict {
    let yes = per_fiber.iter().all(|f| f.admissible);
    reasons.push(if yes { REASON_ALL_ENTRIES_AT_LEAST_3 } else { REASON_ENTRY_BELOW_3 }.into());
    Verdict {
        answer: if yes { Answer::Yes } else { Answer::No },
        reasons,
        per_fiber,
        notes: if yes { vec![NOTE_UNIQUENESS.into()] } else { vec![] },
    }
}

/// Seifert bundles over a base of genus at least 1.
pub fn classify_seifert(data: &SeifertData) -> Result<Verdict, Cr3Error> {
    if data.genus == 0 {
        return Err(Cr3Error::OutOfScope(
            "genus 0 base; classify the sphere quotient instead".into(),
        ));
    }
    let reasons = if data.fibers.is_empty() {
        vec![REASON_NO_MULTIPLE_FIBERS.into()]
    } else {
        vec![]
    };
    Ok(conjoin(data.fibers.iter().map(|&f| summarize(f)).collect(), reasons))
}

/// `S³/ℤ_p` with the action of type `(p; q)`.
pub fn classify_cyclic_quotient(p: i64, q: i64) -> Result<Verdict, Cr3Error> {
    let data = QuotientData::new(p, q)?;
    // q = p − 1 is the SL(2, ℂ) case.
    let reasons = if q == p - 1 {
        vec![REASON_RULED_OUT.into()]
    } else {
        vec![]
    };
    Ok(conjoin(vec![summarize(data)], reasons))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyInput {
    Seifert(SeifertData),
    Quotient(QuotientData),
    /// Non-cyclic finite subgroup of `GL(2, ℂ)`.
    Polyhedral,
}

pub fn classify(input: &ClassifyInput) -> Result<Verdict, Cr3Error> {
    match input {
        ClassifyInput::Seifert(data) => classify_seifert(data),
        ClassifyInput::Quotient(data) => classify_cyclic_quotient(data.p(), data.q()),
        ClassifyInput::Polyhedral => Ok(Verdict {
            answer: Answer::OutOfScope,
            reasons: vec![REASON_OPEN_FINITE_QUOTIENT.into()],
            per_fiber: vec![],
            notes: vec![],
        }),
    }
}
