//! Linear algebra over Z/nZ for degree matrices.
//!
//! Two polynomials with the same coefficient vector are *-equivalent when
//! `D~_f v = 0` and `D~_g v = 0 (mod q - 1)` have the same solutions, where
//! `D~` is the degree matrix with a row of ones on top. Equal Howell forms
//! (equal row spans) settle this quickly; the exact decision compares the
//! solution modules through their generators.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::poly::SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("polynomial has no monomial terms")]
    EmptyPolynomial,
    #[error("polynomials are defined over different fields")]
    MismatchedFields,
    #[error("polynomials have different term counts ({0} vs {1})")]
    DifferentTermCounts(usize, usize),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
}

/// An integer matrix with entries reduced into `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZnMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ZnMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        if modulus == 0 {
            return Err(LinalgError::ZeroModulus);
        }
        Ok(ZnMatrix { modulus, rows, cols, entries: vec![0; rows * cols] })
    }

    /// Row-major entries, reduced mod n.
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape { expected: rows * cols, got: entries.len() });
        }
        let mut m = Self::zeros(modulus, rows, cols)?;
        for (dst, &e) in m.entries.iter_mut().zip(entries) {
            *dst = e.rem_euclid(modulus as i64) as u64;
        }
        Ok(m)
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(modulus, rows.len(), cols, &flat)
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `self * other (mod n)`.
    pub fn mul(&self, other: &ZnMatrix) -> ZnMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        let n = self.modulus as u128;
        let mut out = ZnMatrix { entries: vec![0; self.rows * other.cols], cols: other.cols, ..self.clone() };
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u128 = (0..self.cols)
                    .map(|k| self.get(i, k) as u128 * other.get(k, j) as u128)
                    .sum();
                out.entries[i * other.cols + j] = (s % n) as u64;
            }
        }
        out
    }

    /// `M v (mod n)`.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let n = self.modulus as u128;
        (0..self.rows)
            .map(|i| {
                let s: u128 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u128 * b as u128).sum();
                (s % n) as u64
            })
            .collect()
    }

    /// Whether `M v = 0 (mod n)`.
    pub fn annihilates(&self, v: &[u64]) -> bool {
        self.apply(v).iter().all(|&x| x == 0)
    }

    /// Appends zero rows up to `rows` total.
    pub fn pad_rows(&self, rows: usize) -> ZnMatrix {
        let mut out = self.clone();
        if rows > self.rows {
            out.entries.resize(rows * self.cols, 0);
            out.rows = rows;
        }
        out
    }

    pub fn push_column(&self, col: &[u64]) -> ZnMatrix {
        assert_eq!(col.len(), self.rows);
        let cols = self.cols + 1;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for (i, &c) in col.iter().enumerate() {
            entries.extend_from_slice(self.row(i));
            entries.push(c % self.modulus);
        }
        ZnMatrix { entries, cols, ..self.clone() }
    }
}

impl fmt::Display for ZnMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Extended gcd on non-negative integers: `(g, s, t)` with `s a + t b = g`.
/// When `a | b` (a > 0) it returns `(a, 1, 0)` so pivots stay untouched.
fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    if a != 0 && b % a == 0 {
        return (a, 1, 0);
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0, s0, t0)
}

fn gcd(a: u64, b: u64) -> u64 {
    crate::gf::gcd(a, b)
}

fn reduce(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Replaces `(x, y)` by `(s x + t y, -w x + u y)`, a determinant-one change.
fn combine(x: &mut [u64], y: &mut [u64], s: i64, t: i64, w: i64, u: i64, n: u64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a as i128, *b as i128);
        *a = reduce(s as i128 * xa + t as i128 * yb, n);
        *b = reduce(-(w as i128) * xa + u as i128 * yb, n);
    }
}

/// A unit u mod n with `u a = gcd(a, n) (mod n)`.
fn normalizing_unit(a: u64, n: u64) -> u64 {
    let g = gcd(a, n);
    let (a1, n1) = (a / g, n / g);
    let base = if n1 == 1 {
        0
    } else {
        let (_, s, _) = xgcd(a1 as i64, n1 as i64);
        s.rem_euclid(n1 as i64) as u64
    };
    (0..)
        .map(|k| base + k * n1)
        .find(|&u| gcd(u, n) == 1)
        .expect("a unit lifting a1^-1 mod n/g always exists")
}

/// Echelon rows indexed by pivot column; row j is zero or starts at column j.
struct Echelon {
    n: u64,
    rows: Vec<Vec<u64>>,
}

impl Echelon {
    fn new(n: u64, cols: usize) -> Self {
        Echelon { n, rows: vec![vec![0; cols]; cols] }
    }

    fn insert(&mut self, mut v: Vec<u64>, from: usize) {
        let n = self.n;
        for j in from..v.len() {
            if v[j] == 0 {
                continue;
            }
            if self.rows[j][j] == 0 {
                self.rows[j] = v;
                return;
            }
            let (a, b) = (self.rows[j][j] as i64, v[j] as i64);
            let (g, s, t) = xgcd(a, b);
            combine(&mut self.rows[j], &mut v, s, t, b / g, a / g, n);
            debug_assert_eq!(v[j], 0);
        }
    }
}

/// The Howell normal form of the row span of `m` over Z/nZ.
///
/// Rows are in echelon order, each pivot divides n, entries above a pivot
/// are reduced below it, and the span is closed under annihilators. Two
/// matrices with the same number of columns have equal row spans exactly
/// when their Howell forms are equal.
pub fn howell_form(m: &ZnMatrix) -> ZnMatrix {
    let (n, cols) = (m.modulus, m.cols);
    let mut ech = Echelon::new(n, cols);
    for i in 0..m.rows {
        ech.insert(m.row(i).to_vec(), 0);
    }
    for j in 0..cols {
        let pivot = ech.rows[j][j];
        if pivot == 0 {
            continue;
        }
        let u = normalizing_unit(pivot, n) as u128;
        for x in ech.rows[j].iter_mut() {
            *x = (*x as u128 * u % n as u128) as u64;
        }
        let pivot = ech.rows[j][j];
        debug_assert_eq!(n % pivot, 0);
        let k = (n / pivot) as u128;
        let ann: Vec<u64> = ech.rows[j].iter().map(|&x| (x as u128 * k % n as u128) as u64).collect();
        ech.insert(ann, j + 1);
    }
    for j in 0..cols {
        let pivot = ech.rows[j][j];
        if pivot == 0 {
            continue;
        }
        let (upper, lower) = ech.rows.split_at_mut(j);
        let pivot_row = &lower[0];
        for row in upper.iter_mut() {
            let k = row[j] / pivot;
            if k == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(pivot_row) {
                *x = reduce(*x as i128 - k as i128 * y as i128, n);
            }
        }
    }
    let kept: Vec<u64> = ech
        .rows
        .into_iter()
        .enumerate()
        .filter(|(j, r)| r[*j] != 0)
        .flat_map(|(_, r)| r)
        .collect();
    ZnMatrix { modulus: n, rows: kept.len() / cols.max(1), cols, entries: kept }
}

/// Generators of `{ v : M v = 0 (mod n) }`. Generator i has additive order
/// `orders[i]`, and every solution is uniquely `sum c_i gen_i` with
/// `0 <= c_i < orders[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullspaceGens {
    pub modulus: u64,
    pub generators: Vec<Vec<u64>>,
    pub orders: Vec<u64>,
    cols: usize,
}

impl NullspaceGens {
    pub fn solution_count(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    /// Calls `visit` on every solution exactly once.
    pub fn for_each_solution(&self, mut visit: impl FnMut(&[u64])) {
        let n = self.modulus;
        let k = self.generators.len();
        let mut digits = vec![0u64; k];
        let mut v = vec![0u64; self.cols];
        loop {
            visit(&v);
            // odometer step: bump the lowest digit that has room, adding gen_i
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                digits[i] += 1;
                for (x, &g) in v.iter_mut().zip(&self.generators[i]) {
                    *x = (*x + g) % n;
                }
                if digits[i] < self.orders[i] {
                    break;
                }
                // wrapped: orders[i] * gen_i = 0, so v is back where it was
                digits[i] = 0;
                i += 1;
            }
        }
    }

    pub fn solutions(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        self.for_each_solution(|v| out.push(v.to_vec()));
        out
    }
}

/// Solutions of `M v = 0 (mod n)` through a diagonalization `U M V = S`
/// with U, V invertible mod n: the solutions are `V w` where `S w = 0`.
pub fn nullspace_mod(m: &ZnMatrix) -> NullspaceGens {
    let n = m.modulus;
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<Vec<u64>> = m.to_rows();
    // V stored by columns, so column operations are row operations here.
    let mut v_cols: Vec<Vec<u64>> = (0..c).map(|j| (0..c).map(|i| u64::from(i == j)).collect()).collect();
    let mut diag = Vec::new();

    let col_of = |a: &Vec<Vec<u64>>, j: usize| -> Vec<u64> { a.iter().map(|row| row[j]).collect() };
    let set_col = |a: &mut Vec<Vec<u64>>, j: usize, col: &[u64]| {
        for (row, &x) in a.iter_mut().zip(col) {
            row[j] = x;
        }
    };

    'outer: for t in 0..r.min(c) {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j]);
            let Some((pi, pj)) = pivot else { break 'outer };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                v_cols.swap(t, pj);
            }
            for i in t + 1..r {
                if a[i][t] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t] as i64, a[i][t] as i64);
                let (g, s, tt) = xgcd(x, y);
                let (head, tail) = a.split_at_mut(i);
                combine(&mut head[t], &mut tail[0], s, tt, y / g, x / g, n);
            }
            for j in t + 1..c {
                if a[t][j] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t] as i64, a[t][j] as i64);
                let (g, s, tt) = xgcd(x, y);
                let (mut ct, mut cj) = (col_of(&a, t), col_of(&a, j));
                combine(&mut ct, &mut cj, s, tt, y / g, x / g, n);
                set_col(&mut a, t, &ct);
                set_col(&mut a, j, &cj);
                let (head, tail) = v_cols.split_at_mut(j);
                combine(&mut head[t], &mut tail[0], s, tt, y / g, x / g, n);
            }
            if (t + 1..r).all(|i| a[i][t] == 0) {
                break;
            }
        }
        diag.push(a[t][t]);
    }

    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (j, col) in v_cols.into_iter().enumerate() {
        let order = match diag.get(j) {
            Some(&d) => gcd(d, n),
            None => n,
        };
        if order <= 1 {
            continue;
        }
        let scale = (n / order) as u128;
        generators.push(col.iter().map(|&x| (x as u128 * scale % n as u128) as u64).collect());
        orders.push(order);
    }
    NullspaceGens { modulus: n, generators, orders, cols: c }
}

/// `D_f`: column j is the exponent vector of term j, reduced mod `q - 1`.
pub fn degree_matrix(f: &SparsePoly) -> Result<ZnMatrix, LinalgError> {
    if f.term_count() == 0 {
        return Err(LinalgError::EmptyPolynomial);
    }
    let n = f.ctx().group_order();
    let (rows, cols) = (f.n_vars(), f.term_count());
    let mut m = ZnMatrix::zeros(n, rows, cols)?;
    for (j, t) in f.terms().iter().enumerate() {
        for (i, &e) in t.exponents.iter().enumerate() {
            m.set(i, j, e % n);
        }
    }
    Ok(m)
}

/// `D~_f`: `D_f` with a row of ones prepended.
pub fn augmented_degree_matrix(f: &SparsePoly) -> Result<ZnMatrix, LinalgError> {
    let d = degree_matrix(f)?;
    let mut m = ZnMatrix::zeros(d.modulus, d.rows + 1, d.cols)?;
    for j in 0..d.cols {
        m.set(0, j, 1);
        for i in 0..d.rows {
            m.set(i + 1, j, d.get(i, j));
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivMethod {
    Howell,
    Nullspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotEquivalentReason {
    CoefficientVectorsDiffer,
    ConstantsDiffer,
    SolutionSetsDiffer,
}

impl fmt::Display for NotEquivalentReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CoefficientVectorsDiffer => "coefficient vectors differ",
            Self::ConstantsDiffer => "constant terms differ",
            Self::SolutionSetsDiffer => "the homogeneous systems have different solution sets",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EquivOptions {
    /// Add the column `(1, 0, ..., 0)` of the constant term to both matrices.
    /// `None` turns it on exactly when both constants are nonzero.
    pub include_constant_column: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub method: EquivMethod,
    pub reason: Option<NotEquivalentReason>,
    pub constant_column: bool,
    /// Howell forms of the two (padded) augmented degree matrices.
    pub howell_f: ZnMatrix,
    pub howell_g: ZnMatrix,
}

/// Matrices actually compared by [`star_equivalent`]: both augmented degree
/// matrices padded to equal height, with the constant column if requested.
pub fn comparison_matrices(
    f: &SparsePoly,
    g: &SparsePoly,
    constant_column: bool,
) -> Result<(ZnMatrix, ZnMatrix), LinalgError> {
    let (a, b) = (augmented_degree_matrix(f)?, augmented_degree_matrix(g)?);
    let height = a.rows.max(b.rows);
    let (mut a, mut b) = (a.pad_rows(height), b.pad_rows(height));
    if constant_column {
        let mut col = vec![0; height];
        col[0] = 1;
        a = a.push_column(&col);
        b = b.push_column(&col);
    }
    Ok((a, b))
}

pub fn star_equivalent(f: &SparsePoly, g: &SparsePoly, opts: EquivOptions) -> Result<EquivalenceReport, LinalgError> {
    if f.ctx() != g.ctx() {
        return Err(LinalgError::MismatchedFields);
    }
    if f.term_count() != g.term_count() {
        return Err(LinalgError::DifferentTermCounts(f.term_count(), g.term_count()));
    }
    let both_constants = !f.constant().is_zero() && !g.constant().is_zero();
    let constant_column = opts.include_constant_column.unwrap_or(both_constants);
    let (a, b) = comparison_matrices(f, g, constant_column)?;
    let (howell_f, howell_g) = (howell_form(&a), howell_form(&b));
    let report = |equivalent, method, reason| EquivalenceReport {
        equivalent,
        method,
        reason,
        constant_column,
        howell_f: howell_f.clone(),
        howell_g: howell_g.clone(),
    };

    if f.coefficients() != g.coefficients() {
        return Ok(report(false, EquivMethod::Howell, Some(NotEquivalentReason::CoefficientVectorsDiffer)));
    }
    if f.constant() != g.constant() {
        return Ok(report(false, EquivMethod::Howell, Some(NotEquivalentReason::ConstantsDiffer)));
    }
    if howell_f == howell_g {
        return Ok(report(true, EquivMethod::Howell, None));
    }
    let same = nullspace_mod(&a).generators.iter().all(|v| b.annihilates(v))
        && nullspace_mod(&b).generators.iter().all(|v| a.annihilates(v));
    let reason = (!same).then_some(NotEquivalentReason::SolutionSetsDiffer);
    Ok(report(same, EquivMethod::Nullspace, reason))
}
