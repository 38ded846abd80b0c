//! Root counts of diagonal and full polynomials.
//!
//! `N(f)` counts roots in F_q^n and `N*(f)` roots with every coordinate
//! nonzero. The closed forms cover diagonal `g = a_1 x_1^d + ... + a_s x_s^d - b`
//! with admissible d and all `a_i` in one class of d-th powers, and full
//! polynomials *-equivalent to such a g. Everything else is counted by
//! one of the oracles: additive character sums, multiplicative character sums
//! over the solutions of `D~ v = 0 (mod q - 1)`, or exhaustive evaluation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chars::{gauss_sum_table, psi, root_of_unity};
use crate::gf::{FieldCtx, FieldElement};
use crate::poly::{SparsePoly, Term};
use crate::pure::{check_admissible, Admissibility, Classification, PureError};
use crate::zn_linalg::{augmented_degree_matrix, nullspace_mod, star_equivalent, EquivOptions, LinalgError, NotEquivalentReason};

/// Default cap on points visited by the exhaustive oracles.
pub const DEFAULT_BRUTE_FORCE_BUDGET: u128 = 100_000_000;
/// Default cap on vectors visited by the multiplicative-character oracle.
pub const DEFAULT_GAUSSVEC_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CountError {
    #[error("polynomial has no monomial terms")]
    NoTerms,
    #[error("polynomial is not diagonal")]
    NotDiagonal,
    #[error("polynomial is not full: some term omits a variable")]
    NotFull,
    #[error("setting variables {zeroed:?} to 0 leaves a polynomial with no exact count")]
    RestrictionNotCountable { zeroed: Vec<usize> },
    #[error("diagonal exponents differ: {0:?}")]
    UnequalExponents(Vec<u64>),
    #[error(transparent)]
    Pure(#[from] PureError),
    #[error("coefficients lie in different classes of {d}-th powers (log a_i mod d = {classes:?})")]
    CharacterClassesDiffer { d: u64, classes: Vec<u64> },
    #[error("this formula needs b = 0")]
    ConstantNonzero,
    #[error("this formula needs b != 0")]
    ConstantZero,
    #[error("witness has {s} terms but the polynomial only {n} variables")]
    TooManyWitnessTerms { s: usize, n: usize },
    #[error("witness is not *-equivalent: {0}")]
    NotStarEquivalent(NotEquivalentReason),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("numeric sum {value} is {residual:e} away from an integer (tolerance {tolerance:e})")]
    ResidualExceeded { value: f64, residual: f64, tolerance: f64 },
    #[error("closed form numerator {numerator} is not divisible by {divisor}")]
    Indivisible { numerator: i128, divisor: i128 },
    #[error("count does not fit in 128 bits")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ClosedFormB0,
    ClosedFormBnz,
    FullTheorem,
    BruteForce,
    /// Additive-character expansion over the exponential sums S(u, d).
    #[serde(rename = "CHARSUM_LEMMA26")]
    CharacterSum,
    /// Multiplicative-character expansion over Gauss sums.
    #[serde(rename = "GAUSSVEC_LEMMA27")]
    GaussVector,
}

/// Which case of the closed forms produced the count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// b = 0.
    BZero,
    /// b != 0 and `eta_d(a_1 / b) = 1`.
    EtaOne,
    /// b != 0 and `eta_d(a_1 / b) != 1`.
    EtaNotOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountResult {
    pub count: u128,
    pub method: Method,
    pub branch: Option<Branch>,
    /// True for N*, false for N.
    pub star: bool,
    /// Set when the count was rounded from sums that include numerically
    /// evaluated (not closed-form) exponential sums.
    pub approximate: bool,
}

/// A diagonal polynomial that meets the closed-form hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalShape {
    pub adm: Admissibility,
    /// Number of terms.
    pub s: usize,
    /// `dlog(a_1) mod d`.
    pub class: u64,
}

/// Checks that g is `a_1 x_1^d + ... + a_s x_s^d - b` with admissible d
/// and all `a_i` in the same class of d-th powers. With
/// `require_equal_classes = false` the class check is skipped.
pub fn diagonal_shape(g: &SparsePoly, require_equal_classes: bool) -> Result<DiagonalShape, CountError> {
    let diag = g.diagonal_terms().ok_or(CountError::NotDiagonal)?;
    let Some(&(_, d)) = diag.first() else {
        return Err(CountError::NoTerms);
    };
    if diag.iter().any(|&(_, e)| e != d) {
        return Err(CountError::UnequalExponents(diag.iter().map(|&(_, e)| e).collect()));
    }
    let ctx = g.ctx();
    let adm = check_admissible(ctx, d)?.require()?;
    let classes: Vec<u64> = g
        .terms()
        .iter()
        .map(|t| ctx.dlog(t.coeff).map(|k| k % d))
        .collect::<Result<_, _>>()
        .map_err(PureError::from)?;
    if require_equal_classes && classes.iter().any(|&c| c != classes[0]) {
        return Err(CountError::CharacterClassesDiffer { d, classes });
    }
    Ok(DiagonalShape { adm, s: diag.len(), class: classes[0] })
}

fn ipow(base: i128, exp: usize) -> Result<i128, CountError> {
    base.checked_pow(exp as u32).ok_or(CountError::Overflow)
}

fn exact_div(numerator: i128, divisor: i128) -> Result<i128, CountError> {
    if numerator % divisor != 0 {
        return Err(CountError::Indivisible { numerator, divisor });
    }
    Ok(numerator / divisor)
}

fn to_count(v: i128) -> Result<u128, CountError> {
    u128::try_from(v).map_err(|_| CountError::Overflow)
}

/// N* of the s-variable diagonal g with b = 0.
fn star_formula_b0(adm: &Admissibility, s: usize) -> Result<i128, CountError> {
    let (q, d) = (adm.q as i128, adm.d as i128);
    let (c1, c2) = (adm.c1() as i128, adm.c2() as i128);
    let terms = [
        Some(ipow(q - 1, s)?),
        ((q - 1) / d).checked_mul(ipow(c1, s)?),
        ((q - 1) * (d - 1) / d).checked_mul(ipow(c2, s)?),
    ];
    let numerator = terms
        .into_iter()
        .try_fold(0i128, |acc, t| acc.checked_add(t?))
        .ok_or(CountError::Overflow)?;
    exact_div(numerator, q)
}

/// N* of the s-variable diagonal g with b != 0, on the given branch.
fn star_formula_bnz(adm: &Admissibility, s: usize, eta_one: bool) -> Result<i128, CountError> {
    let (q, d) = (adm.q as i128, adm.d as i128);
    let (c1, c2) = (adm.c1() as i128, adm.c2() as i128);
    let (c1s, c2s) = (ipow(c1, s)?, ipow(c2, s)?);
    let diff = exact_div(c1s.checked_sub(c2s).ok_or(CountError::Overflow)?, d)?;
    let chosen = if eta_one { c1 } else { c2 };
    let numerator = ipow(q - 1, s)?
        .checked_sub(c2s)
        .and_then(|x| x.checked_add(chosen.checked_mul(diff)?))
        .ok_or(CountError::Overflow)?;
    exact_div(numerator, q)
}

/// Branch and exact N* over the first s coordinates.
fn diagonal_star_count(g: &SparsePoly, shape: &DiagonalShape) -> Result<(i128, Branch), CountError> {
    let ctx = g.ctx();
    let b = g.constant();
    if b.is_zero() {
        return Ok((star_formula_b0(&shape.adm, shape.s)?, Branch::BZero));
    }
    let d = shape.adm.d;
    let log_b = ctx.dlog(b).map_err(PureError::from)?;
    // eta_d(a_1 / b) = 1  iff  d | log a_1 - log b
    let eta_one = (shape.class + d - log_b % d) % d == 0;
    let branch = if eta_one { Branch::EtaOne } else { Branch::EtaNotOne };
    Ok((star_formula_bnz(&shape.adm, shape.s, eta_one)?, branch))
}

fn free_factor(ctx: &FieldCtx, free_vars: usize) -> Result<i128, CountError> {
    ipow(ctx.group_order() as i128, free_vars)
}

fn diagonal_result(g: &SparsePoly, shape: &DiagonalShape) -> Result<CountResult, CountError> {
    let (n_star, branch) = diagonal_star_count(g, shape)?;
    let count = n_star
        .checked_mul(free_factor(g.ctx(), g.n_vars() - shape.s)?)
        .ok_or(CountError::Overflow)?;
    Ok(CountResult {
        count: to_count(count)?,
        method: if branch == Branch::BZero { Method::ClosedFormB0 } else { Method::ClosedFormBnz },
        branch: Some(branch),
        star: true,
        approximate: false,
    })
}

/// N*(g) for diagonal g with b = 0. Unused ambient variables contribute a
/// factor q - 1 each.
pub fn count_star_diagonal_b0(g: &SparsePoly) -> Result<CountResult, CountError> {
    if !g.constant().is_zero() {
        return Err(CountError::ConstantNonzero);
    }
    diagonal_result(g, &diagonal_shape(g, true)?)
}

/// N*(g) for diagonal g with b != 0.
pub fn count_star_diagonal_bnz(g: &SparsePoly) -> Result<CountResult, CountError> {
    if g.constant().is_zero() {
        return Err(CountError::ConstantZero);
    }
    diagonal_result(g, &diagonal_shape(g, true)?)
}

/// Dispatches to [`count_star_diagonal_b0`] or [`count_star_diagonal_bnz`].
pub fn count_star_diagonal(g: &SparsePoly) -> Result<CountResult, CountError> {
    diagonal_result(g, &diagonal_shape(g, true)?)
}

/// The closed form with the equal-class hypothesis skipped; the class of
/// `a_1` is used throughout. Still requires an admissible common exponent.
pub fn count_star_diagonal_forced(g: &SparsePoly) -> Result<CountResult, CountError> {
    diagonal_result(g, &diagonal_shape(g, false)?)
}

/// N(f) given a diagonal witness g that is *-equivalent to f.
///
/// Intended for full f. Other f are accepted when every restriction to a
/// coordinate hyperplane is exactly countable (see [`zero_coordinate_count`]).
pub fn count_full(f: &SparsePoly, g: &SparsePoly) -> Result<CountResult, CountError> {
    count_full_impl(f, g, true)
}

/// [`count_full`] without the *-equivalence and equal-class checks.
pub fn count_full_forced(f: &SparsePoly, g: &SparsePoly) -> Result<CountResult, CountError> {
    count_full_impl(f, g, false)
}

fn count_full_impl(f: &SparsePoly, g: &SparsePoly, checked: bool) -> Result<CountResult, CountError> {
    if f.term_count() == 0 {
        return Err(CountError::NoTerms);
    }
    let shape = diagonal_shape(g, checked)?;
    let n = f.n_vars();
    if shape.s > n {
        return Err(CountError::TooManyWitnessTerms { s: shape.s, n });
    }
    if checked {
        let report = star_equivalent(f, g, EquivOptions::default())?;
        if let Some(reason) = report.reason {
            return Err(CountError::NotStarEquivalent(reason));
        }
    }
    let (n_star, branch) = diagonal_star_count(g, &shape)?;
    let with_zero = zero_coordinate_count(f)?;
    let count = n_star
        .checked_mul(free_factor(f.ctx(), n - shape.s)?)
        .and_then(|c| c.checked_add(with_zero))
        .ok_or(CountError::Overflow)?;
    Ok(CountResult {
        count: to_count(count)?,
        method: Method::FullTheorem,
        branch: Some(branch),
        star: false,
        approximate: false,
    })
}

/// Roots of f with at least one zero coordinate.
///
/// For full f every term vanishes there, giving `q^n - (q-1)^n` when b = 0
/// and nothing otherwise. Other f are split by which variables are zero;
/// each restriction must be a bare constant, a single monomial, or a
/// diagonal polynomial with a closed form.
pub fn zero_coordinate_count(f: &SparsePoly) -> Result<i128, CountError> {
    let ctx = f.ctx();
    let n = f.n_vars();
    let q = ctx.q() as i128;
    if f.is_full() {
        return if f.constant().is_zero() { ipow(q, n)?.checked_sub(ipow(q - 1, n)?).ok_or(CountError::Overflow) } else { Ok(0) };
    }
    const MAX_SPLIT_VARS: usize = 20;
    if n > MAX_SPLIT_VARS {
        return Err(CountError::BudgetExceeded { needed: 1 << n.min(127), budget: 1 << MAX_SPLIT_VARS });
    }
    let mut total = 0i128;
    for mask in 1u32..(1u32 << n) {
        let zeroed = |i: usize| mask >> i & 1 == 1;
        let kept: Vec<usize> = (0..n).filter(|&i| !zeroed(i)).collect();
        let terms = f
            .terms()
            .iter()
            .filter(|t| t.support().all(|i| !zeroed(i)))
            .map(|t| Term::new(t.coeff, kept.iter().map(|&i| t.exponents[i]).collect()))
            .collect();
        let sub = SparsePoly::new(f.ctx_arc().clone(), kept.len(), terms, f.constant()).expect("restriction keeps term shape");
        let part = restricted_star_count(&sub).map_err(|e| match e {
            CountError::RestrictionNotCountable { .. } => {
                CountError::RestrictionNotCountable { zeroed: (0..n).filter(|&i| zeroed(i)).map(|i| i + 1).collect() }
            }
            other => other,
        })?;
        total = total.checked_add(part).ok_or(CountError::Overflow)?;
    }
    Ok(total)
}

/// Exact N* of a restriction produced by [`zero_coordinate_count`].
fn restricted_star_count(g: &SparsePoly) -> Result<i128, CountError> {
    let ctx = g.ctx();
    let k = g.n_vars();
    let order = ctx.group_order();
    let b = g.constant();
    match g.terms() {
        [] => Ok(if b.is_zero() { ipow(order as i128, k)? } else { 0 }),
        [_] if b.is_zero() => Ok(0),
        [t] => {
            // a X^E = b  <=>  sum e_i log x_i = log(b / a)  (mod q - 1)
            let ratio = ctx.div(b, t.coeff).expect("coefficients are nonzero");
            let target = ctx.dlog(ratio).expect("ratio is nonzero");
            let g = t.exponents.iter().fold(order, |acc, &e| crate::gf::gcd(acc, e % order));
            if target % g != 0 {
                return Ok(0);
            }
            ipow(order as i128, k)?
                .checked_mul(g as i128)
                .map(|v| v / order as i128)
                .ok_or(CountError::Overflow)
        }
        _ => {
            let shape = diagonal_shape(g, true).map_err(|_| CountError::RestrictionNotCountable { zeroed: Vec::new() })?;
            let (n_star, _) = diagonal_star_count(g, &shape)?;
            n_star.checked_mul(free_factor(ctx, k - shape.s)?).ok_or(CountError::Overflow)
        }
    }
}

fn round_checked(value: Complex64, summands: f64) -> Result<u128, CountError> {
    let tolerance = 1e-3 * summands.max(1.0).sqrt();
    let rounded = value.re.round();
    let residual = (value.re - rounded).abs().max(value.im.abs());
    if residual >= tolerance || rounded < 0.0 {
        return Err(CountError::ResidualExceeded { value: value.re, residual, tolerance });
    }
    Ok(rounded as u128)
}

/// `S(g^k, d)` for each class k mod gcd(d, q - 1).
fn exp_sum_classes(ctx: &FieldCtx, d: u64) -> (Vec<Complex64>, bool) {
    let n = ctx.group_order();
    let classes = crate::gf::gcd(d, n);
    if d >= 3 {
        if let Ok(Classification::Admissible(adm)) = check_admissible(ctx, d) {
            let exact = (0..classes)
                .map(|k| {
                    let s = crate::pure::s_closed_form(ctx, &adm, ctx.antilog(k)).expect("nonzero");
                    Complex64::new(s as f64, 0.0)
                })
                .collect();
            return (exact, false);
        }
    }
    let psi_by_log: Vec<Complex64> = (0..n).map(|e| psi(ctx, ctx.antilog(e))).collect();
    let numeric = (0..classes)
        .map(|k| {
            (0..n)
                .map(|e| psi_by_log[((k as u128 + e as u128 * d as u128) % n as u128) as usize])
                .sum()
        })
        .collect();
    (numeric, true)
}

/// N*(g) for any diagonal g from the additive-character expansion
/// `N* = (q-1)^s / q + (1/q) sum_{c != 0} conj(psi(c b)) prod_j S(c a_j, d_j)`.
/// `S` uses the closed form for admissible exponents and direct summation
/// otherwise.
pub fn count_star_charsum(g: &SparsePoly) -> Result<CountResult, CountError> {
    let diag = g.diagonal_terms().ok_or(CountError::NotDiagonal)?;
    let ctx = g.ctx();
    let n = ctx.group_order();
    let q = ctx.q() as f64;
    let mut approximate = false;
    let factors: Vec<(Vec<Complex64>, u64)> = diag
        .iter()
        .zip(g.terms())
        .map(|(&(_, d), t)| {
            let (table, numeric) = exp_sum_classes(ctx, d);
            approximate |= numeric;
            (table, ctx.raw_log(t.coeff) as u64)
        })
        .collect();
    let b = g.constant();
    let sum: Complex64 = (0..n)
        .map(|t| {
            let c = ctx.antilog(t);
            let phase = psi(ctx, ctx.mul(c, b)).conj();
            factors.iter().fold(phase, |acc, (table, log_a)| {
                let len = table.len() as u64;
                acc * table[((t + log_a) % len) as usize]
            })
        })
        .sum();
    let s = diag.len() as i32;
    let value = ((n as f64).powi(s) + sum) / q * (n as f64).powi((g.n_vars() - diag.len()) as i32);
    Ok(CountResult {
        count: round_checked(value, n as f64)?,
        method: Method::CharacterSum,
        branch: None,
        star: true,
        approximate,
    })
}

/// How [`count_star_gaussvec`] enumerates the solutions of `D~ v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolutionSource {
    /// Combinations of nullspace generators.
    #[default]
    Nullspace,
    /// Every v in `[0, q-2]^s`, filtered.
    DirectScan,
}

/// N*(f) for any f from the multiplicative-character expansion
/// `N* = (q-1)^n / q + ((q-1)^(n+1-s) / q) sum_v prod_j omega(a_j)^(v_j) G(omega^(-v_j))`
/// over `v` with `D~ v = 0 (mod q - 1)`. A nonzero constant enters as the
/// term `-b X^0`.
pub fn count_star_gaussvec(f: &SparsePoly, source: SolutionSource, budget: u128) -> Result<CountResult, CountError> {
    let ctx = f.ctx();
    let n = ctx.group_order();
    let n_vars = f.n_vars();
    let mut terms: Vec<Term> = f.terms().to_vec();
    if !f.constant().is_zero() {
        terms.push(Term::new(ctx.neg(f.constant()), vec![0; n_vars]));
    }
    let s = terms.len();
    let result = |count| CountResult {
        count,
        method: Method::GaussVector,
        branch: None,
        star: true,
        approximate: false,
    };
    if s == 0 {
        // the zero polynomial vanishes everywhere
        return Ok(result(to_count(ipow(n as i128, n_vars)?)?));
    }
    let ext = SparsePoly::new(f.ctx_arc().clone(), n_vars, terms, FieldElement::ZERO)
        .expect("terms come from a valid polynomial");
    let m = augmented_degree_matrix(&ext)?;
    let gauss = gauss_sum_table(ctx);
    let logs: Vec<u64> = ext.terms().iter().map(|t| ctx.raw_log(t.coeff) as u64).collect();
    let term = |v: &[u64]| -> Complex64 {
        v.iter().zip(&logs).fold(Complex64::new(1.0, 0.0), |acc, (&vj, &la)| {
            let omega = root_of_unity((la as u128 * vj as u128 % n as u128) as u64, n);
            acc * omega * gauss[((n - vj % n) % n) as usize]
        })
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let visited = match source {
        SolutionSource::Nullspace => {
            let ns = nullspace_mod(&m);
            let needed = ns.solution_count();
            if needed > budget {
                return Err(CountError::BudgetExceeded { needed, budget });
            }
            ns.for_each_solution(|v| sum += term(v));
            needed
        }
        SolutionSource::DirectScan => {
            let needed = (n as u128).checked_pow(s as u32).ok_or(CountError::Overflow)?;
            if needed > budget {
                return Err(CountError::BudgetExceeded { needed, budget });
            }
            let mut v = vec![0u64; s];
            let mut visited = 0u128;
            'scan: loop {
                if m.annihilates(&v) {
                    sum += term(&v);
                    visited += 1;
                }
                for x in v.iter_mut() {
                    *x += 1;
                    if *x < n {
                        continue 'scan;
                    }
                    *x = 0;
                }
                break;
            }
            visited
        }
    };
    let (nf, q) = (n as f64, ctx.q() as f64);
    let value = nf.powi(n_vars as i32) / q + nf.powi(n_vars as i32 + 1 - s as i32) / q * sum;
    Ok(result(round_checked(value, visited as f64)?))
}

fn lookup_log(ctx: &FieldCtx, a: FieldElement) -> u64 {
    if a.is_zero() {
        ZERO_LOG
    } else {
        ctx.raw_log(a) as u64
    }
}

const ZERO_LOG: u64 = u64::MAX;

#[inline]
fn add_logs(ctx: &FieldCtx, n: u64, x: u64, y: u64) -> u64 {
    if x == ZERO_LOG {
        return y;
    }
    if y == ZERO_LOG {
        return x;
    }
    let t = (y + n - x) % n;
    match ctx.zech(t) {
        Some(z) => (x + z) % n,
        None => ZERO_LOG,
    }
}

/// Exhaustive N (`star = false`) or N* (`star = true`).
///
/// The outermost coordinate is split across threads; the total does not
/// depend on the split.
pub fn brute_force(f: &SparsePoly, star: bool, budget: u128) -> Result<CountResult, CountError> {
    let ctx = f.ctx();
    let n = ctx.group_order();
    let vars = f.n_vars();
    // per coordinate: value index 0..width; for N, index 0 is the zero element
    let width = if star { n } else { ctx.q() };
    let needed = (width as u128).checked_pow(vars as u32).ok_or(CountError::Overflow)?;
    if needed > budget {
        return Err(CountError::BudgetExceeded { needed, budget });
    }
    let terms: Vec<(u64, Vec<(usize, u64)>)> = f
        .terms()
        .iter()
        .map(|t| {
            let support = t.support().map(|i| (i, t.exponents[i] % n)).collect();
            (ctx.raw_log(t.coeff) as u64, support)
        })
        .collect();
    let target = lookup_log(ctx, f.constant());
    let log_of = |idx: u64| -> u64 {
        match (star, idx) {
            (true, k) => k,
            (false, 0) => ZERO_LOG,
            (false, k) => k - 1,
        }
    };
    let is_root = |point: &[u64]| -> bool {
        let mut acc = ZERO_LOG;
        for (log_a, support) in &terms {
            let mut l = *log_a;
            let mut zero = false;
            for &(i, e) in support {
                let x = point[i];
                if x == ZERO_LOG {
                    zero = true;
                    break;
                }
                l = ((l as u128 + x as u128 * e as u128) % n as u128) as u64;
            }
            if !zero {
                acc = add_logs(ctx, n, acc, l);
            }
        }
        acc == target
    };

    let count = if vars == 0 {
        u128::from(is_root(&[]))
    } else {
        (0..width)
            .into_par_iter()
            .map(|first| {
                let mut idx = vec![0u64; vars];
                idx[0] = first;
                let mut point: Vec<u64> = idx.iter().map(|&i| log_of(i)).collect();
                let mut hits = 0u128;
                'odometer: loop {
                    hits += u128::from(is_root(&point));
                    for k in 1..vars {
                        idx[k] += 1;
                        if idx[k] < width {
                            point[k] = log_of(idx[k]);
                            continue 'odometer;
                        }
                        idx[k] = 0;
                        point[k] = log_of(0);
                    }
                    break;
                }
                hits
            })
            .sum()
    };
    Ok(CountResult { count, method: Method::BruteForce, branch: None, star, approximate: false })
}

/// Exhaustive N(f).
pub fn brute_force_total(f: &SparsePoly, budget: u128) -> Result<CountResult, CountError> {
    brute_force(f, false, budget)
}

/// Exhaustive N*(f).
pub fn brute_force_star(f: &SparsePoly, budget: u128) -> Result<CountResult, CountError> {
    brute_force(f, true, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    const BUDGET: u128 = DEFAULT_BRUTE_FORCE_BUDGET;

    fn field(p: u64, m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, m, None).unwrap())
    }

    // Independent of every code path above: evaluates f with plain field
    // arithmetic at each point of (F_q*)^n or F_q^n.
    fn naive_count(f: &SparsePoly, star: bool) -> u128 {
        let ctx = f.ctx();
        let vals: Vec<FieldElement> = if star { ctx.nonzero_elements().collect() } else { ctx.elements().collect() };
        let vars = f.n_vars();
        let mut idx = vec![0usize; vars];
        let mut count = 0;
        loop {
            let point: Vec<_> = idx.iter().map(|&i| vals[i]).collect();
            if f.evaluate(&point).unwrap().is_zero() {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == vars {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < vals.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn quartic_pair_over_f81() {
        let ctx = field(3, 4);
        let g = SparsePoly::diagonal(ctx, &[FieldElement::ONE; 2], 4, FieldElement::ZERO).unwrap();
        let r = count_star_diagonal_b0(&g).unwrap();
        assert_eq!(r.count, 320);
        assert_eq!(r.branch, Some(Branch::BZero));
        assert_eq!(count_star_charsum(&g).unwrap().count, 320);
        assert_eq!(brute_force_star(&g, BUDGET).unwrap().count, 320);
    }

    #[test]
    fn quintic_pair_over_f16() {
        let ctx = field(2, 4);
        let g = SparsePoly::diagonal(ctx, &[FieldElement::ONE; 2], 5, FieldElement::ZERO).unwrap();
        // (15^2 + 3 * 15^2 + 12 * 25) / 16
        assert_eq!(naive_count(&g, true), 75);
        assert_eq!(count_star_diagonal_b0(&g).unwrap().count, 75);
    }

    #[test]
    fn quartic_triple_with_constant_over_f81() {
        let ctx = field(3, 4);
        let g = SparsePoly::diagonal(ctx, &[FieldElement::ONE; 3], 4, FieldElement::ONE).unwrap();
        let r = count_star_diagonal_bnz(&g).unwrap();
        assert_eq!((r.count, r.branch), (8256, Some(Branch::EtaOne)));
        assert_eq!(brute_force_star(&g, BUDGET).unwrap().count, 8256);
    }

    #[test]
    fn degree_17_over_f256() {
        let ctx = field(2, 8);
        let g = SparsePoly::diagonal(ctx.clone(), &[ctx.gen_pow(1), ctx.gen_pow(18)], 17, FieldElement::ONE).unwrap();
        let r = count_star_diagonal_bnz(&g).unwrap();
        assert_eq!((r.count, r.branch), (0, Some(Branch::EtaNotOne)));
        assert_eq!(brute_force_star(&g, BUDGET).unwrap().count, 0);
    }

    #[test]
    fn wrong_constant_branch_is_rejected() {
        let ctx = field(3, 4);
        let g0 = SparsePoly::diagonal(ctx.clone(), &[FieldElement::ONE; 2], 4, FieldElement::ZERO).unwrap();
        let g1 = SparsePoly::diagonal(ctx, &[FieldElement::ONE; 2], 4, FieldElement::ONE).unwrap();
        assert_eq!(count_star_diagonal_bnz(&g0), Err(CountError::ConstantZero));
        assert_eq!(count_star_diagonal_b0(&g1), Err(CountError::ConstantNonzero));
    }

    #[test]
    fn precondition_failures() {
        let ctx = field(3, 4);
        let mixed = SparsePoly::diagonal(ctx.clone(), &[FieldElement::ONE, ctx.generator()], 4, FieldElement::ZERO).unwrap();
        assert!(matches!(count_star_diagonal(&mixed), Err(CountError::CharacterClassesDiffer { d: 4, .. })));
        // forcing uses a_1's class; the answer is then generally wrong
        let forced = count_star_diagonal_forced(&mixed).unwrap().count;
        assert_ne!(forced, brute_force_star(&mixed, BUDGET).unwrap().count);

        let inadmissible = SparsePoly::diagonal(ctx.clone(), &[FieldElement::ONE; 2], 8, FieldElement::ZERO).unwrap();
        assert!(matches!(
            count_star_diagonal(&inadmissible),
            Err(CountError::Pure(PureError::NotAdmissible { d: 8, .. }))
        ));
        let unequal = SparsePoly::new(
            ctx.clone(),
            2,
            vec![Term::new(FieldElement::ONE, vec![4, 0]), Term::new(FieldElement::ONE, vec![0, 5])],
            FieldElement::ZERO,
        )
        .unwrap();
        assert_eq!(count_star_diagonal(&unequal), Err(CountError::UnequalExponents(vec![4, 5])));
    }

    #[test]
    fn charsum_handles_inadmissible_exponents() {
        let ctx = field(3, 4);
        // exponents 2 and 8 are not admissible: numeric S is used
        let g = SparsePoly::new(
            ctx.clone(),
            2,
            vec![Term::new(ctx.gen_pow(3), vec![2, 0]), Term::new(ctx.gen_pow(5), vec![0, 8])],
            ctx.gen_pow(7),
        )
        .unwrap();
        let r = count_star_charsum(&g).unwrap();
        assert!(r.approximate);
        assert_eq!(r.count, naive_count(&g, true));
    }

    #[test]
    fn linear_two_variable_count() {
        // x + y = 1 with x, y != 0 has q - 2 solutions
        for (p, m) in [(2, 4), (3, 2), (7, 1)] {
            let ctx = field(p, m);
            let g = SparsePoly::diagonal(ctx.clone(), &[FieldElement::ONE; 2], 1, FieldElement::ONE).unwrap();
            assert_eq!(count_star_charsum(&g).unwrap().count, ctx.q() as u128 - 2);
        }
    }

    #[test]
    fn gaussvec_small_cases() {
        let ctx = field(5, 1);
        let single = SparsePoly::new(ctx.clone(), 1, vec![Term::new(ctx.from_int(3), vec![1])], FieldElement::ZERO).unwrap();
        assert_eq!(count_star_gaussvec(&single, SolutionSource::Nullspace, BUDGET).unwrap().count, 0);
        let zero = SparsePoly::new(ctx.clone(), 2, vec![], FieldElement::ZERO).unwrap();
        assert_eq!(count_star_gaussvec(&zero, SolutionSource::Nullspace, BUDGET).unwrap().count, 16);
        let f = SparsePoly::new(
            ctx.clone(),
            2,
            vec![Term::new(FieldElement::ONE, vec![2, 3]), Term::new(FieldElement::ONE, vec![1, 2])],
            FieldElement::ZERO,
        )
        .unwrap();
        let expected = naive_count(&f, true);
        for source in [SolutionSource::Nullspace, SolutionSource::DirectScan] {
            assert_eq!(count_star_gaussvec(&f, source, BUDGET).unwrap().count, expected);
        }
    }

    #[test]
    fn gaussvec_with_constant() {
        let ctx = field(7, 1);
        let f = SparsePoly::new(
            ctx.clone(),
            2,
            vec![Term::new(ctx.from_int(2), vec![3, 1]), Term::new(ctx.from_int(5), vec![1, 4])],
            ctx.from_int(3),
        )
        .unwrap();
        let expected = naive_count(&f, true);
        assert_eq!(count_star_gaussvec(&f, SolutionSource::DirectScan, BUDGET).unwrap().count, expected);
        assert_eq!(count_star_gaussvec(&f, SolutionSource::Nullspace, BUDGET).unwrap().count, expected);
    }

    #[test]
    fn budgets_are_enforced() {
        let ctx = field(2, 8);
        let g = SparsePoly::diagonal(ctx, &[FieldElement::ONE; 3], 17, FieldElement::ZERO).unwrap();
        assert!(matches!(brute_force_total(&g, 1000), Err(CountError::BudgetExceeded { .. })));
        assert!(matches!(
            count_star_gaussvec(&g, SolutionSource::DirectScan, 1000),
            Err(CountError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn brute_force_agrees_with_naive_evaluation() {
        let ctx = field(3, 2);
        let f = SparsePoly::new(
            ctx.clone(),
            3,
            vec![
                Term::new(ctx.gen_pow(2), vec![2, 0, 1]),
                Term::new(ctx.gen_pow(5), vec![1, 3, 0]),
                Term::new(FieldElement::ONE, vec![0, 0, 4]),
            ],
            ctx.gen_pow(3),
        )
        .unwrap();
        for star in [true, false] {
            assert_eq!(brute_force(&f, star, BUDGET).unwrap().count, naive_count(&f, star));
        }
    }

    #[test]
    fn zero_polynomial_counts_everything() {
        let ctx = field(5, 1);
        let zero = SparsePoly::new(ctx, 1, vec![], FieldElement::ZERO).unwrap();
        assert_eq!(brute_force_total(&zero, BUDGET).unwrap().count, 5);
    }
}
