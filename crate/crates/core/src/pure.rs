//! Semiprimitive ("pure") Gauss sums and the exponential sums they close.
//!
//! An exponent `d >= 3` with `d | q - 1` is (p, r)-admissible when r is the
//! least positive integer with `2r | m` and `d | p^r + 1`. For such d every
//! `G(eta_d^j)`, `1 <= j < d`, is `+-sqrt(q)`, and
//! `S(u, d) = sum over x in F_q* of psi(u x^d)` takes only two values, `C1`
//! on one coset class of d-th powers and `C2` elsewhere. All values in this
//! module are exact integers: m is even, so `sqrt(q) = p^(m/2)`.

use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PureError {
    #[error("exponent d = {0} is below 3")]
    ExponentTooSmall(u64),
    #[error("character index j = {j} is 0 mod d = {d}")]
    TrivialCharacter { d: u64, j: u64 },
    #[error("exponent d = {d} is not admissible: {reason}")]
    NotAdmissible { d: u64, reason: NotAdmissibleReason },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotAdmissibleReason {
    /// d does not divide q - 1.
    DoesNotDivideGroupOrder,
    /// m is odd, so q is not a square.
    OddExtensionDegree,
    /// No r with 2r | m has d | p^r + 1.
    NoAdmissibleLevel,
}

impl std::fmt::Display for NotAdmissibleReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::DoesNotDivideGroupOrder => "d does not divide q - 1",
            Self::OddExtensionDegree => "extension degree m is odd",
            Self::NoAdmissibleLevel => "no r with 2r | m and d | p^r + 1",
        })
    }
}

/// Which branch of the pure Gauss sum evaluation applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityCase {
    /// `2 | d` and `(p^r + 1)/d` is odd.
    #[serde(rename = "EVEN_D_ODD_QUOTIENT")]
    EvenDOddQuotient,
    /// `d` odd or `(p^r + 1)/d` even.
    #[serde(rename = "OTHER")]
    Other,
}

/// Certificate that d is (p, r)-admissible for a given field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    pub d: u64,
    pub r: u32,
    /// `m / (2r)`.
    pub h: u32,
    pub parity_case: ParityCase,
    /// `(-1)^(h (p^r + 1)/d)`: the value of `eta_d(u)` on the class where S = C1.
    pub sign: i8,
    pub p: u64,
    pub m: u32,
    pub q: u64,
    pub sqrt_q: i64,
}

/// Result of [`check_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Admissible(Admissibility),
    NotAdmissible { d: u64, reason: NotAdmissibleReason },
}

impl Classification {
    pub fn admissible(self) -> Option<Admissibility> {
        match self {
            Classification::Admissible(a) => Some(a),
            Classification::NotAdmissible { .. } => None,
        }
    }

    /// The certificate, or a [`PureError::NotAdmissible`].
    pub fn require(self) -> Result<Admissibility, PureError> {
        match self {
            Classification::Admissible(a) => Ok(a),
            Classification::NotAdmissible { d, reason } => Err(PureError::NotAdmissible { d, reason }),
        }
    }
}

pub fn check_admissible(ctx: &FieldCtx, d: u64) -> Result<Classification, PureError> {
    if d < 3 {
        return Err(PureError::ExponentTooSmall(d));
    }
    let not = |reason| Ok(Classification::NotAdmissible { d, reason });
    if ctx.group_order() % d != 0 {
        return not(NotAdmissibleReason::DoesNotDivideGroupOrder);
    }
    let (p, m) = (ctx.p(), ctx.m());
    if m % 2 == 1 {
        return not(NotAdmissibleReason::OddExtensionDegree);
    }
    // p^r <= p^(m/2) = sqrt(q) <= 2^10, so none of this can overflow.
    let Some(r) = (1..=m / 2).find(|&r| m % (2 * r) == 0 && (p.pow(r) + 1) % d == 0) else {
        return not(NotAdmissibleReason::NoAdmissibleLevel);
    };
    let h = m / (2 * r);
    let quotient = (p.pow(r) + 1) / d;
    let parity_case = if d % 2 == 0 && quotient % 2 == 1 {
        ParityCase::EvenDOddQuotient
    } else {
        ParityCase::Other
    };
    let sign = match parity_case {
        ParityCase::EvenDOddQuotient if h % 2 == 1 => -1,
        _ => 1,
    };
    let q = ctx.q();
    // For odd p this makes eta_d(-1) = 1. In characteristic 2, -1 = 1 anyway.
    if p % 2 == 1 {
        assert_eq!((q - 1) % (2 * d), 0, "admissible d must satisfy 2d | q - 1");
    }
    Ok(Classification::Admissible(Admissibility {
        d,
        r,
        h,
        parity_case,
        sign,
        p,
        m,
        q,
        sqrt_q: p.pow(m / 2) as i64,
    }))
}

fn minus_one_pow(e: u64) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Admissibility {
    /// `C1(d) = -1 - (-1)^h (d - 1) sqrt(q)`.
    pub fn c1(&self) -> i64 {
        -1 - minus_one_pow(self.h as u64) * (self.d as i64 - 1) * self.sqrt_q
    }

    /// `C2(d) = -1 + (-1)^h sqrt(q)`.
    pub fn c2(&self) -> i64 {
        -1 + minus_one_pow(self.h as u64) * self.sqrt_q
    }

    /// Whether `eta_d(u)` equals `sign` for a nonzero u, decided on the
    /// discrete log: `eta_d(u) = 1` iff `d | log u`, and `eta_d(u) = -1` iff
    /// d is even and `log u = d/2 (mod d)`.
    pub fn in_c1_class(&self, ctx: &FieldCtx, u: FieldElement) -> Result<bool, PureError> {
        let k = ctx.dlog(u)? % self.d;
        Ok(match self.sign {
            1 => k == 0,
            _ => self.d % 2 == 0 && k == self.d / 2,
        })
    }
}

/// `C1(d)`; see [`Admissibility::c1`].
pub fn c1(adm: &Admissibility) -> i64 {
    adm.c1()
}

/// `C2(d)`; see [`Admissibility::c2`].
pub fn c2(adm: &Admissibility) -> i64 {
    adm.c2()
}

/// `G(eta_d^j)` for admissible d, `j` not divisible by d.
pub fn pure_gauss_sum(adm: &Admissibility, j: u64) -> Result<i64, PureError> {
    if j % adm.d == 0 {
        return Err(PureError::TrivialCharacter { d: adm.d, j });
    }
    let h = adm.h as u64;
    let e = match adm.parity_case {
        ParityCase::EvenDOddQuotient => j * h + h + 1,
        ParityCase::Other => h + 1,
    };
    Ok(adm.sqrt_q * minus_one_pow(e))
}

/// `S(u, d)` for nonzero u and admissible d.
pub fn s_closed_form(ctx: &FieldCtx, adm: &Admissibility, u: FieldElement) -> Result<i64, PureError> {
    Ok(if adm.in_c1_class(ctx, u)? { adm.c1() } else { adm.c2() })
}
