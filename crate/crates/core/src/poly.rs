//! Sparse multivariate polynomials `sum a_j X^(D_j) - b` over a fixed field.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("term {term} has a zero coefficient")]
    ZeroCoefficient { term: usize },
    #[error("term {term} has {got} exponents, expected {expected}")]
    ExponentLength { term: usize, expected: usize, got: usize },
    #[error("cannot embed {from} variables into {to}")]
    ShrinkVariables { from: usize, to: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
}

/// One monomial `a X^D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: FieldElement,
    pub exponents: Vec<u64>,
}

impl Term {
    pub fn new(coeff: FieldElement, exponents: Vec<u64>) -> Self {
        Term { coeff, exponents }
    }

    /// Indices of the variables that occur with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

/// The polynomial `sum_j a_j X^(D_j) - b`, i.e. the equation
/// `sum_j a_j X^(D_j) = b`. The constant b is kept out of the term list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ctx: Arc<FieldCtx>,
    n_vars: usize,
    terms: Vec<Term>,
    constant: FieldElement,
}

impl SparsePoly {
    pub fn new(
        ctx: Arc<FieldCtx>,
        n_vars: usize,
        terms: Vec<Term>,
        constant: FieldElement,
    ) -> Result<Self, PolyError> {
        for (i, t) in terms.iter().enumerate() {
            if t.coeff.is_zero() {
                return Err(PolyError::ZeroCoefficient { term: i });
            }
            if t.exponents.len() != n_vars {
                return Err(PolyError::ExponentLength {
                    term: i,
                    expected: n_vars,
                    got: t.exponents.len(),
                });
            }
        }
        Ok(SparsePoly { ctx, n_vars, terms, constant })
    }

    /// `sum_j coeffs[j] * x_(j+1)^d - b`.
    pub fn diagonal(ctx: Arc<FieldCtx>, coeffs: &[FieldElement], d: u64, b: FieldElement) -> Result<Self, PolyError> {
        let s = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let mut e = vec![0; s];
                e[j] = d;
                Term::new(a, e)
            })
            .collect();
        SparsePoly::new(ctx, s, terms, b)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The right-hand side b.
    pub fn constant(&self) -> FieldElement {
        self.constant
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    /// Same polynomial viewed in `n` variables, `n >= n_vars`.
    pub fn embed(&self, n: usize) -> Result<Self, PolyError> {
        if n < self.n_vars {
            return Err(PolyError::ShrinkVariables { from: self.n_vars, to: n });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = t.exponents.clone();
                e.resize(n, 0);
                Term::new(t.coeff, e)
            })
            .collect();
        Ok(SparsePoly { terms, n_vars: n, ..self.clone() })
    }

    /// Each term is a power of a single variable, and no variable repeats.
    pub fn is_diagonal(&self) -> bool {
        let mut seen = vec![false; self.n_vars];
        self.terms.iter().all(|t| {
            let mut support = t.support();
            match (support.next(), support.next()) {
                (Some(i), None) if !seen[i] => {
                    seen[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    /// Every exponent of every term is positive.
    pub fn is_full(&self) -> bool {
        !self.terms.is_empty() && self.terms.iter().all(|t| t.exponents.iter().all(|&e| e > 0))
    }

    /// For a diagonal polynomial, `(variable, exponent)` of each term.
    pub fn diagonal_terms(&self) -> Option<Vec<(usize, u64)>> {
        if !self.is_diagonal() {
            return None;
        }
        Some(
            self.terms
                .iter()
                .map(|t| {
                    let i = t.support().next().expect("diagonal terms are nonconstant");
                    (i, t.exponents[i])
                })
                .collect(),
        )
    }

    /// `f(point) = sum a_j point^(D_j) - b`.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.n_vars {
            return Err(PolyError::PointLength { expected: self.n_vars, got: point.len() });
        }
        let f = &*self.ctx;
        let sum = self.terms.iter().fold(FieldElement::ZERO, |acc, t| {
            let mono = t
                .exponents
                .iter()
                .zip(point)
                .fold(t.coeff, |m, (&e, &x)| f.mul(m, f.pow(x, e)));
            f.add(acc, mono)
        });
        Ok(f.sub(sum, self.constant))
    }
}

impl fmt::Display for SparsePoly {
    /// Prints in the CLI grammar: coefficients as `g^k`, variables `x1, x2, ...`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &*self.ctx;
        for (j, t) in self.terms.iter().enumerate() {
            if j > 0 {
                out.write_str(" + ")?;
            }
            write!(out, "{}", f.format(t.coeff))?;
            for (i, &e) in t.exponents.iter().enumerate() {
                if e > 0 {
                    write!(out, "*x{}^{}", i + 1, e)?;
                }
            }
            if t.exponents.iter().all(|&e| e == 0) {
                // keep a variable factor so this stays a monomial term
                write!(out, "*x1^0")?;
            }
        }
        if !self.constant.is_zero() || self.terms.is_empty() {
            if self.terms.is_empty() {
                out.write_str("0")?;
            }
            if !self.constant.is_zero() {
                write!(out, " - {}", f.format(self.constant))?;
            }
        }
        Ok(())
    }
}
