//! Acceptance suite: one PASS/FAIL line per criterion, with pinned
//! tolerances and time limits. Runs without the libtest harness so the
//! lines are always printed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ffcount::chars::{exp_sum_numeric, gauss_sum_numeric, psi, MultChar};
use ffcount::counting::{
    brute_force_star, brute_force_total, count_full, count_star_charsum, count_star_diagonal, count_star_gaussvec,
    SolutionSource, DEFAULT_BRUTE_FORCE_BUDGET, DEFAULT_GAUSSVEC_BUDGET,
};
use ffcount::gf::FieldElement;
use ffcount::pure::{check_admissible, pure_gauss_sum, s_closed_form};
use ffcount::zn_linalg::{howell_form, nullspace_mod, star_equivalent, EquivOptions, ZnMatrix};
use ffcount::cli::parse_poly;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{admissible_exponents, field, random_diagonal, random_matrix, random_unimodular};

const PURE_SUM_TOL: f64 = 1e-5;
const S_SWEEP_TOL: f64 = 1e-5;
const ORTHOGONALITY_TOL: f64 = 1e-8;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(p: u64, m: u32, text: &str) -> ffcount::poly::SparsePoly {
    parse_poly(text, field(p, m)).expect("valid polynomial")
}

fn golden_values() -> Check {
    let star_cases = [
        (3, 4, "x^4 + y^4", 320),
        (3, 4, "x^4 + y^4 + z^4 - 1", 8256),
        (2, 8, "g*x^17 + g^18*y^17 - 1", 0),
    ];
    for (p, m, text, want) in star_cases {
        let got = count_star_diagonal(&poly(p, m, text)).map_err(|e| e.to_string())?.count;
        ensure(got == want, || format!("N*({text}) over F_{p}^{m} = {got}, want {want}"))?;
    }
    let full_cases = [
        (2, 4, "x1^6*x2^2*x3 + x1*x2^7*x3^11", "x^5 + y^5", 1846),
        (3, 6, "x^7 + 2*x^7*y^21 - g", "x^7 + 2*y^7 - g", 588),
    ];
    for (p, m, f, g, want) in full_cases {
        let got = count_full(&poly(p, m, f), &poly(p, m, g)).map_err(|e| e.to_string())?.count;
        ensure(got == want, || format!("N({f}) = {got}, want {want}"))?;
    }
    let f = poly(31, 1, "11*x^13 + 5*x^21*y^19 + 12*x^2*y^3*z^17");
    let g = poly(31, 1, "11*x + 5*y + 12*z");
    for (name, h, total) in [("f", &f, 1861), ("g", &g, 961)] {
        let brute = brute_force_star(h, DEFAULT_BRUTE_FORCE_BUDGET).map_err(|e| e.to_string())?.count;
        let gauss = count_star_gaussvec(h, SolutionSource::Nullspace, DEFAULT_GAUSSVEC_BUDGET)
            .map_err(|e| e.to_string())?
            .count;
        ensure(brute == 870 && gauss == 870, || format!("F_31 {name}: N* brute {brute}, gauss-vector {gauss}, want 870"))?;
        let n = brute_force_total(h, DEFAULT_BRUTE_FORCE_BUDGET).map_err(|e| e.to_string())?.count;
        ensure(n == total, || format!("F_31 {name}: N = {n}, want {total}"))?;
    }
    Ok("320, 8256, 0, 1846, 588, F_31 870/1861/961".into())
}

fn constants_table() -> Check {
    for (p, m, d, c1, c2) in [(2, 4, 5, 15, -5), (3, 4, 4, -28, 8), (2, 8, 17, 255, -17), (3, 6, 7, 161, -28)] {
        let ctx = field(p, m);
        let adm = check_admissible(&ctx, d)
            .map_err(|e| e.to_string())?
            .admissible()
            .ok_or_else(|| format!("d = {d} not admissible over F_{}", ctx.q()))?;
        ensure((adm.c1(), adm.c2()) == (c1, c2), || {
            format!("q = {}, d = {d}: got ({}, {}), want ({c1}, {c2})", ctx.q(), adm.c1(), adm.c2())
        })?;
    }
    Ok("4 exact pairs".into())
}

fn pure_sum_cross_check() -> Check {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (p, m) in [(2, 4), (2, 6), (3, 4), (2, 8), (3, 6)] {
        let ctx = field(p, m);
        for d in admissible_exponents(&ctx) {
            let adm = check_admissible(&ctx, d).unwrap().admissible().unwrap();
            for j in 1..d {
                let closed = pure_gauss_sum(&adm, j).map_err(|e| e.to_string())? as f64;
                let numeric = gauss_sum_numeric(&MultChar::new(&ctx, d, j).unwrap()).value;
                let err = (numeric - Complex64::new(closed, 0.0)).norm();
                worst = worst.max(err);
                ensure(err < PURE_SUM_TOL, || format!("q = {}, d = {d}, j = {j}: error {err:e}", ctx.q()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} sums, worst error {worst:.1e}"))
}

fn oracle_sweep() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let fields = [field(2, 4), field(3, 4), field(2, 8)];
    let exps: Vec<Vec<u64>> = fields.iter().map(|f| admissible_exponents(f)).collect();
    for i in 0..200 {
        let k = rng.gen_range(0..fields.len());
        let ctx = &fields[k];
        let d = exps[k][rng.gen_range(0..exps[k].len())];
        let s = rng.gen_range(1..=3);
        let b_zero = rng.gen_bool(1.0 / 3.0);
        let g = random_diagonal(&mut rng, ctx, d, s, b_zero);
        let closed = count_star_diagonal(&g).map_err(|e| format!("#{i} {g}: {e}"))?.count;
        let charsum = count_star_charsum(&g).map_err(|e| format!("#{i} {g}: {e}"))?;
        let brute = brute_force_star(&g, DEFAULT_BRUTE_FORCE_BUDGET).map_err(|e| format!("#{i} {g}: {e}"))?.count;
        ensure(closed == charsum.count && closed == brute && !charsum.approximate, || {
            format!("#{i} {g} over F_{}: closed {closed}, character sum {}, brute {brute}", ctx.q(), charsum.count)
        })?;
    }
    Ok("200 polynomials agree exactly".into())
}

fn s_sweep() -> Check {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (p, m) in [(2, 4), (3, 4), (2, 8)] {
        let ctx = field(p, m);
        for d in admissible_exponents(&ctx) {
            let adm = check_admissible(&ctx, d).unwrap().admissible().unwrap();
            for u in ctx.nonzero_elements() {
                let closed = s_closed_form(&ctx, &adm, u).map_err(|e| e.to_string())? as f64;
                let err = (exp_sum_numeric(&ctx, u, d) - Complex64::new(closed, 0.0)).norm();
                worst = worst.max(err);
                ensure(err < S_SWEEP_TOL, || format!("q = {}, d = {d}, u = {}: error {err:e}", ctx.q(), ctx.format(u)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} values, worst error {worst:.1e}"))
}

fn to_matrix(n: u64, rows: &[Vec<i64>]) -> ZnMatrix {
    ZnMatrix::from_rows(n, rows).unwrap()
}

fn zn_linalg_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for n in [15u64, 30, 80] {
        for i in 0..100 {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let a = random_matrix(&mut rng, r, c, n);
            let h = howell_form(&a);
            ensure(howell_form(&h) == h, || format!("mod {n} #{i}: Howell form not idempotent for\n{a}"))?;
            let u = to_matrix(n, &random_unimodular(&mut rng, r, n));
            ensure(howell_form(&u.mul(&a)) == h, || format!("mod {n} #{i}: Howell form changed under U for\n{a}"))?;
        }
    }
    let mut systems = 0;
    for n in 2..=30u64 {
        for _ in 0..4 {
            let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = random_matrix(&mut rng, r, c, n);
            let null = nullspace_mod(&a);
            let mut brute = 0u128;
            let mut v = vec![0u64; c];
            'scan: loop {
                if a.annihilates(&v) {
                    brute += 1;
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
            ensure(null.solution_count() == brute, || {
                format!("mod {n}: nullspace claims {} solutions, enumeration finds {brute} for\n{a}", null.solution_count())
            })?;
            systems += 1;
        }
    }
    let pairs = [
        (5, 1, "x^2*y^3 + x*y^2", "x*y + x^3*y^2"),
        (31, 1, "11*x^13 + 5*x^21*y^19 + 12*x^2*y^3*z^17", "11*x + 5*y + 12*z"),
        (2, 4, "x1^6*x2^2*x3 + x1*x2^7*x3^11", "x^5 + y^5"),
        (3, 6, "x^7 + 2*x^7*y^21 - g", "x^7 + 2*y^7 - g"),
    ];
    for (p, m, f, g) in pairs {
        let report = star_equivalent(&poly(p, m, f), &poly(p, m, g), EquivOptions::default()).map_err(|e| e.to_string())?;
        ensure(report.equivalent, || format!("{f} and {g} not *-equivalent: {:?}", report.reason))?;
    }
    let ctx = field(5, 1);
    let two = [ctx.from_int(2), ctx.from_int(2)];
    let f = poly(5, 1, "x^2*y^3 + x*y^2");
    let g = poly(5, 1, "x*y + x^3*y^2");
    ensure(f.evaluate(&two).unwrap() == FieldElement::ZERO, || "(2, 2) is not a root of f".into())?;
    ensure(g.evaluate(&two).unwrap() != FieldElement::ZERO, || "(2, 2) is a root of g".into())?;
    Ok(format!("300 Howell checks, {systems} nullspaces, 4 equivalent pairs, F_5 root sets differ"))
}

fn orthogonality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut worst: f64 = 0.0;
    for (p, m) in [(2, 4), (3, 4)] {
        let ctx = field(p, m);
        for _ in 0..100 {
            let x = ctx.element(rng.gen_range(0..ctx.q())).unwrap();
            let sum: Complex64 = ctx.elements().map(|c| psi(&ctx, ctx.mul(c, x))).sum();
            let want = if x.is_zero() { 1.0 } else { 0.0 };
            let err = (sum / ctx.q() as f64 - want).norm();
            worst = worst.max(err);
            ensure(err < ORTHOGONALITY_TOL, || format!("q = {}, x = {}: error {err:e}", ctx.q(), ctx.format(x)))?;
        }
    }
    Ok(format!("200 points, worst error {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Check); 7] = [
        ("golden values", Some(Duration::from_secs(10)), golden_values),
        ("constants table", None, constants_table),
        ("pure Gauss sums vs direct summation", Some(Duration::from_secs(30)), pure_sum_cross_check),
        ("closed form = character sum = enumeration", Some(Duration::from_secs(120)), oracle_sweep),
        ("S(u, d) sweep", None, s_sweep),
        ("Z/nZ linear algebra and *-equivalence", None, zn_linalg_properties),
        ("additive orthogonality", None, orthogonality),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let elapsed = started.elapsed();
        let late = limit.is_some_and(|l| elapsed > l);
        let limit_note = limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        let (verdict, detail) = match (&result, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; too slow")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {} [{name}]: {verdict} ({detail}; {:.2}s{limit_note})", i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        println!("acceptance: all 7 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 7 criteria fail");
        ExitCode::FAILURE
    }
}
