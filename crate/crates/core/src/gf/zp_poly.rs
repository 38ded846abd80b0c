//! Dense polynomials over Z_p, used only while constructing a field:
//! irreducibility testing of candidate moduli and arithmetic on the
//! polynomial-basis representation before the log tables exist.
//!
//! Coefficients are little-endian (`c[i]` multiplies `x^i`) and always
//! normalized so that the leading coefficient is nonzero. The zero
//! polynomial is the empty vector.

pub(crate) type ZpPoly = Vec<u64>;

pub(crate) fn trim(mut a: ZpPoly) -> ZpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> ZpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `b`.
pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> ZpPoly {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> ZpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, modulus, p)
}

pub(crate) fn pow_poly_mod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> ZpPoly {
    let mut acc = rem(&[1], modulus, p);
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, modulus, p);
        }
        b = mul_mod(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> ZpPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: a monic `f` of degree m is irreducible iff
/// gcd(x^(p^i) - x, f) = 1 for every 1 <= i <= m/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x: ZpPoly = vec![0, 1];
    let mut power = rem(&x, f, p);
    for _ in 1..=m / 2 {
        power = pow_poly_mod(&power, p, f, p);
        let g = gcd(f, &sub(&power, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binary_irreducibles() {
        // x^2 + x + 1 is the only irreducible quadratic over F_2.
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn irreducible_quartic_count_over_f3() {
        // Number of monic irreducible quartics over F_3 is (3^4 - 3^2) / 4 = 18.
        let mut count = 0;
        for enc in 0..81u64 {
            let mut f: Vec<u64> = (0..4).map(|i| enc / 3u64.pow(i) % 3).collect();
            f.push(1);
            if is_irreducible(&f, 3) {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }
}
