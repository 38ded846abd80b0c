//! Additive and multiplicative characters of F_q and sums evaluated straight
//! from their definitions.
//!
//! Everything here is floating point and serves as the numeric reference for
//! the exact closed forms in [`crate::pure`]. Power-class decisions never go
//! through these values; see [`is_dth_power`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement, GfError};

/// A complex number of modulus one (or a sum of such values).
pub type UnitComplex = Complex64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("character order {d} does not divide q - 1 = {order}")]
    OrderDoesNotDivide { d: u64, order: u64 },
    #[error("character order must be positive")]
    ZeroOrder,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `exp(2 pi i k / n)`, with k reduced first so the angle stays small.
pub fn root_of_unity(k: u64, n: u64) -> UnitComplex {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

/// The canonical additive character `exp(2 pi i Tr(x) / p)`.
pub fn psi(ctx: &FieldCtx, x: FieldElement) -> UnitComplex {
    root_of_unity(ctx.trace(x), ctx.p())
}

/// The multiplicative character `eta_d^j`, where `eta_d(g^k) = exp(2 pi i k / d)`
/// for the fixed generator g.
#[derive(Debug, Clone, Copy)]
pub struct MultChar<'a> {
    ctx: &'a FieldCtx,
    order: u64,
    power: u64,
}

impl<'a> MultChar<'a> {
    /// `eta_d^j`. `d` must divide q - 1; `j` is reduced mod d.
    pub fn new(ctx: &'a FieldCtx, d: u64, j: u64) -> Result<Self, CharError> {
        if d == 0 {
            return Err(CharError::ZeroOrder);
        }
        let order = ctx.group_order();
        if order % d != 0 {
            return Err(CharError::OrderDoesNotDivide { d, order });
        }
        Ok(MultChar { ctx, order: d, power: j % d })
    }

    pub fn trivial(ctx: &'a FieldCtx) -> Self {
        MultChar { ctx, order: 1, power: 0 }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// The `d` of `eta_d^j`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn is_trivial(&self) -> bool {
        self.power == 0
    }

    pub fn conj(&self) -> Self {
        MultChar {
            power: (self.order - self.power) % self.order,
            ..*self
        }
    }

    /// Value at x. At zero: 1 for the trivial character, 0 otherwise.
    pub fn eval(&self, x: FieldElement) -> UnitComplex {
        match self.ctx.dlog(x) {
            Ok(k) => {
                let e = (self.power as u128 * k as u128 % self.order as u128) as u64;
                root_of_unity(e, self.order)
            }
            Err(_) if self.is_trivial() => Complex64::new(1.0, 0.0),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

pub fn eta(chr: &MultChar<'_>, x: FieldElement) -> UnitComplex {
    chr.eval(x)
}

/// Whether a nonzero x is a d-th power in F_q*, for `d | q - 1`.
/// Exact: tests `d | dlog(x)`.
pub fn is_dth_power(ctx: &FieldCtx, x: FieldElement, d: u64) -> Result<bool, CharError> {
    if d == 0 {
        return Err(CharError::ZeroOrder);
    }
    let order = ctx.group_order();
    if order % d != 0 {
        return Err(CharError::OrderDoesNotDivide { d, order });
    }
    Ok(ctx.dlog(x)? % d == 0)
}

/// A Gauss sum evaluated by direct summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSum {
    pub value: UnitComplex,
    /// Set for the trivial character, where the sum collapses to -1.
    pub degenerate: bool,
}

/// `G(chr) = sum over c in F_q* of psi(c) chr(c)`.
pub fn gauss_sum_numeric(chr: &MultChar<'_>) -> GaussSum {
    let ctx = chr.ctx();
    let value = ctx
        .nonzero_elements()
        .map(|c| psi(ctx, c) * chr.eval(c))
        .sum();
    GaussSum {
        value,
        degenerate: chr.is_trivial(),
    }
}

/// `S(u, d) = sum over x in F_q* of psi(u x^d)`, by direct summation.
pub fn exp_sum_numeric(ctx: &FieldCtx, u: FieldElement, d: u64) -> UnitComplex {
    ctx.nonzero_elements()
        .map(|x| psi(ctx, ctx.mul(u, ctx.pow(x, d))))
        .sum()
}

/// All Gauss sums `G(omega^t)` for `t = 0, ..., q-2`, where omega is the
/// character of order q - 1 with `omega(g) = exp(2 pi i / (q-1))`.
pub fn gauss_sum_table(ctx: &FieldCtx) -> Vec<UnitComplex> {
    let n = ctx.group_order();
    let psi_by_log: Vec<UnitComplex> = (0..n).map(|e| psi(ctx, ctx.antilog(e))).collect();
    (0..n)
        .map(|t| {
            psi_by_log
                .iter()
                .enumerate()
                .map(|(e, &v)| v * root_of_unity(t * e as u64 % n, n))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: UnitComplex, b: UnitComplex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn psi_basics() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        assert!(close(psi(&f, FieldElement::ZERO), Complex64::new(1.0, 0.0), 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = f.element(rng.gen_range(0..81)).unwrap();
            let b = f.element(rng.gen_range(0..81)).unwrap();
            assert!(close(psi(&f, a) * psi(&f, b), psi(&f, f.add(a, b)), 1e-10));
        }
    }

    #[test]
    fn additive_orthogonality() {
        for (p, m) in [(2, 4), (3, 4), (5, 1)] {
            let f = FieldCtx::new(p, m, None).unwrap();
            let total: UnitComplex = f.elements().map(|a| psi(&f, a)).sum();
            assert!(total.norm() < 1e-9);
            for x in f.nonzero_elements() {
                let s: UnitComplex = f.elements().map(|c| psi(&f, f.mul(c, x))).sum();
                assert!(s.norm() < 1e-8 * f.q() as f64);
            }
        }
    }

    #[test]
    fn eta_at_dth_power_of_generator() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        for d in [2, 4, 5, 8, 10, 16, 20, 40, 80] {
            let chr = MultChar::new(&f, d, 1).unwrap();
            assert!(close(chr.eval(f.gen_pow(d as i64)), Complex64::new(1.0, 0.0), 1e-10));
            assert_eq!(chr.eval(FieldElement::ZERO), Complex64::new(0.0, 0.0));
        }
        assert_eq!(MultChar::trivial(&f).eval(FieldElement::ZERO), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn quadratic_character_is_euler_criterion() {
        let f = FieldCtx::new(3, 3, None).unwrap();
        let chr = MultChar::new(&f, 2, 1).unwrap();
        let half = (f.q() - 1) / 2;
        for x in f.nonzero_elements() {
            let euler = f.pow(x, half);
            let expected = if euler == FieldElement::ONE { 1.0 } else { -1.0 };
            assert_eq!(f.neg(FieldElement::ONE) == euler, expected < 0.0);
            assert!(close(chr.eval(x), Complex64::new(expected, 0.0), 1e-10));
        }
    }

    #[test]
    fn geometric_sum_over_character_powers() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        for d in [4, 5, 10] {
            for x in f.nonzero_elements() {
                let s: UnitComplex = (0..d)
                    .map(|j| MultChar::new(&f, d, j).unwrap().eval(x))
                    .sum();
                let expected = if f.dlog(x).unwrap() % d == 0 { d as f64 } else { 0.0 };
                assert!(close(s, Complex64::new(expected, 0.0), 1e-9));
            }
        }
    }

    #[test]
    fn multiplicativity_and_conjugation() {
        let f = FieldCtx::new(2, 6, None).unwrap();
        let chr = MultChar::new(&f, 9, 2).unwrap();
        let conj = chr.conj();
        for x in f.nonzero_elements() {
            assert!(close(conj.eval(x), chr.eval(x).conj(), 1e-12));
            for y in f.nonzero_elements().step_by(5) {
                assert!(close(chr.eval(f.mul(x, y)), chr.eval(x) * chr.eval(y), 1e-10));
            }
        }
    }

    #[test]
    fn dth_power_test_matches_enumeration() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        assert!(is_dth_power(&f, FieldElement::ONE, 4).unwrap());
        assert!(!is_dth_power(&f, f.generator(), 4).unwrap());
        for d in [2, 4, 5, 8, 10, 16, 20, 40, 80] {
            let powers: std::collections::HashSet<_> =
                f.nonzero_elements().map(|y| f.pow(y, d)).collect();
            for x in f.nonzero_elements() {
                assert_eq!(is_dth_power(&f, x, d).unwrap(), powers.contains(&x));
            }
        }
        assert!(matches!(
            is_dth_power(&f, FieldElement::ZERO, 4),
            Err(CharError::Field(GfError::ZeroHasNoLogarithm))
        ));
        assert!(matches!(
            is_dth_power(&f, FieldElement::ONE, 3),
            Err(CharError::OrderDoesNotDivide { .. })
        ));
    }

    #[test]
    fn gauss_sum_modulus_is_root_q() {
        for (p, m) in [(2, 4), (3, 4)] {
            let f = FieldCtx::new(p, m, None).unwrap();
            let n = f.group_order();
            for d in (2..=n).filter(|d| n % d == 0) {
                for j in 1..d {
                    let g = gauss_sum_numeric(&MultChar::new(&f, d, j).unwrap());
                    assert!(!g.degenerate);
                    assert!((g.value.norm() - (f.q() as f64).sqrt()).abs() < 1e-6);
                    assert!(((g.value * g.value.conj()).re - f.q() as f64).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn quartic_gauss_sum_over_f81() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        let g = gauss_sum_numeric(&MultChar::new(&f, 4, 1).unwrap());
        assert!(close(g.value, Complex64::new(-9.0, 0.0), 1e-6));
    }

    #[test]
    fn trivial_gauss_sum_is_flagged() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        let g = gauss_sum_numeric(&MultChar::trivial(&f));
        assert!(g.degenerate);
        assert!(close(g.value, Complex64::new(-1.0, 0.0), 1e-9));
    }

    #[test]
    fn gauss_table_matches_characters() {
        let f = FieldCtx::new(5, 2, None).unwrap();
        let table = gauss_sum_table(&f);
        let n = f.group_order();
        for t in [0, 1, 3, 12, 23] {
            let chr = MultChar::new(&f, n, t).unwrap();
            assert!(close(table[t as usize], gauss_sum_numeric(&chr).value, 1e-9));
        }
    }
}
