#![allow(dead_code)]

use std::sync::Arc;

use ffcount::gf::{FieldCtx, FieldElement};
use ffcount::poly::{SparsePoly, Term};
use ffcount::zn_linalg::ZnMatrix;
use rand::Rng;

pub fn field(p: u64, m: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(p, m, None).expect("valid field"))
}

/// Counts roots by evaluating f at every point with plain field arithmetic.
pub fn naive_count(f: &SparsePoly, star: bool) -> u128 {
    let ctx = f.ctx();
    let vals: Vec<FieldElement> = if star { ctx.nonzero_elements().collect() } else { ctx.elements().collect() };
    let n = f.n_vars();
    let mut idx = vec![0usize; n];
    let mut point = vec![vals[0]; n];
    let mut count = 0;
    loop {
        for (x, &i) in point.iter_mut().zip(&idx) {
            *x = vals[i];
        }
        let mut sum = FieldElement::ZERO;
        for t in f.terms() {
            let mut mono = t.coeff;
            for (&x, &e) in point.iter().zip(&t.exponents) {
                for _ in 0..e {
                    mono = ctx.mul(mono, x);
                }
            }
            sum = ctx.add(sum, mono);
        }
        if sum == f.constant() {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
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

/// Admissible exponents `d >= 3` of a field.
pub fn admissible_exponents(ctx: &FieldCtx) -> Vec<u64> {
    (3..ctx.q())
        .filter(|&d| matches!(ffcount::pure::check_admissible(ctx, d), Ok(ffcount::pure::Classification::Admissible(_))))
        .collect()
}

/// A random `k x k` matrix invertible mod n, as a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, k: usize, n: u64) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    let units: Vec<i64> = (1..n as i64).filter(|&a| ffcount::gf::gcd(a as u64, n) == 1).collect();
    for _ in 0..3 * k {
        let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
        match rng.gen_range(0..3) {
            0 => u.swap(i, j),
            1 if i != j => {
                let t = rng.gen_range(0..n as i64);
                let src = u[j].clone();
                for (x, y) in u[i].iter_mut().zip(src) {
                    *x = (*x + t * y).rem_euclid(n as i64);
                }
            }
            _ => {
                let c = units[rng.gen_range(0..units.len())];
                for x in u[i].iter_mut() {
                    *x = (*x * c).rem_euclid(n as i64);
                }
            }
        }
    }
    u
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, n: u64) -> ZnMatrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(0..n as i64)).collect();
    ZnMatrix::new(n, rows, cols, &entries).expect("shape matches")
}

/// A polynomial *-equivalent to f in `n_out` variables: same coefficients
/// and constant, with exponent rows `c_i * (1, ..., 1) + sum_k U_ik D_k`
/// for a unimodular row operation on the augmented degree matrix
/// (`c = 0` when b != 0).
/// With `full`, zero exponents are lifted to q - 1, which changes nothing on F_q*.
pub fn star_transform(rng: &mut impl Rng, f: &SparsePoly, n_out: usize, full: bool) -> SparsePoly {
    let ctx = f.ctx_arc().clone();
    let order = ctx.group_order();
    let n = f.n_vars();
    assert!(n_out >= n, "dropping rows would break row equivalence");
    let s = f.term_count();
    let k = 1 + n_out;
    // augmented degree matrix with zero rows for the extra variables
    let mut aug = vec![vec![0i64; s]; k];
    aug[0] = vec![1; s];
    for (j, t) in f.terms().iter().enumerate() {
        for i in 0..n {
            aug[i + 1][j] = t.exponents[i] as i64;
        }
    }
    // operations that keep the first row (1, ..., 1) in place; adding it to
    // other rows multiplies by a monomial, which is only harmless when b = 0
    let inner = random_unimodular(rng, k - 1, order);
    let shift_range = if f.constant().is_zero() { order as i64 } else { 1 };
    let shift: Vec<i64> = (1..k).map(|_| rng.gen_range(0..shift_range)).collect();
    let terms = f
        .terms()
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let exps = (0..n_out)
                .map(|i| {
                    let mut e = shift[i];
                    for l in 0..k - 1 {
                        e += inner[i][l] * aug[l + 1][j];
                    }
                    let e = e.rem_euclid(order as i64) as u64;
                    if full && e == 0 {
                        order
                    } else {
                        e
                    }
                })
                .collect();
            Term::new(t.coeff, exps)
        })
        .collect();
    SparsePoly::new(ctx, n_out, terms, f.constant()).expect("well formed")
}

/// A diagonal polynomial `sum a_i x_i^d - b` with all `a_i` in one class of d-th powers.
pub fn random_diagonal(rng: &mut impl Rng, ctx: &Arc<FieldCtx>, d: u64, s: usize, b_zero: bool) -> SparsePoly {
    let order = ctx.group_order();
    let class = rng.gen_range(0..d);
    let coeffs: Vec<FieldElement> = (0..s)
        .map(|_| ctx.antilog((class + d * rng.gen_range(0..order)) % order))
        .collect();
    let b = if b_zero { FieldElement::ZERO } else { ctx.antilog(rng.gen_range(0..order)) };
    SparsePoly::diagonal(ctx.clone(), &coeffs, d, b).expect("well formed")
}
