//! Exact arithmetic in cyclotomic fields Q(zeta_M).
//!
//! Elements live in the power basis of Z[x]/Phi_M(x) with arbitrary-precision
//! rational coefficients. Every operation is exact; there is no floating
//! point anywhere in this module. The modulus M is part of an element's
//! representation, and mixed-modulus arithmetic lifts both operands to the
//! lcm before reducing mod the cyclotomic polynomial.

mod elem;
mod lattice;
mod minpoly;
mod modl;
mod vecs;

pub use elem::{CycloElem, Rat};
pub use lattice::LLattice;
pub use minpoly::{eval_poly_at, min_poly};
pub use modl::{Ffld, FfldElem, ModlTarget};
pub use vecs::{lattice_member, lattice_saturate, CycloVec, SaturationOutcome};

use num::BigInt;
use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Euler totient, by trial-division factorization (moduli here are small).
pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1u64;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Prime factorization as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// Multiplicative order of a modulo m (requires gcd(a, m) = 1, m >= 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m <= 1 {
        return 1;
    }
    let a = a % m;
    assert_eq!(num::integer::gcd(a, m), 1, "order of a non-unit");
    let mut x = a;
    let mut k = 1u64;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Inverse of a modulo m (gcd(a, m) = 1).
pub fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "inverse of a non-unit");
    (t0.rem_euclid(m as i128)) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mm = m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Context for a fixed cyclotomic modulus: Phi_M and reduction data.
pub(crate) struct CycloCtx {
    pub phi: usize,
    /// Monic Phi_M as integer coefficients, ascending degree, length phi+1.
    pub phi_poly: Vec<BigInt>,
    /// Reduction of x^k mod Phi_M for k = 0..2*phi-1 (enough for products).
    pub monomials: Vec<Vec<Rat>>,
}

static CTX_CACHE: Lazy<Mutex<BTreeMap<u64, Arc<CycloCtx>>>> =
    Lazy::new(|| Mutex::new(BTreeMap::new()));

pub(crate) fn ctx(m: u64) -> Arc<CycloCtx> {
    let mut cache = CTX_CACHE.lock().unwrap();
    if let Some(c) = cache.get(&m) {
        return c.clone();
    }
    let phi_poly = cyclotomic_poly(m);
    let phi = phi_poly.len() - 1;
    let mut monomials: Vec<Vec<Rat>> = Vec::with_capacity(2 * phi);
    for k in 0..phi {
        let mut row = vec![Rat::from(BigInt::from(0)); phi];
        row[k] = Rat::from(BigInt::from(1));
        monomials.push(row);
    }
    // x^k = x * x^(k-1), reduced by the monic relation
    // x^phi = -(phi_poly[0] + ... + phi_poly[phi-1] x^(phi-1)).
    for k in phi..2 * phi {
        let prev = monomials[k - 1].clone();
        let mut row = vec![Rat::from(BigInt::from(0)); phi];
        for (i, c) in prev.iter().enumerate() {
            if i + 1 < phi {
                row[i + 1] += c;
            } else {
                for j in 0..phi {
                    row[j] -= c * Rat::from(phi_poly[j].clone());
                }
            }
        }
        monomials.push(row);
    }
    let c = Arc::new(CycloCtx {
        phi,
        phi_poly,
        monomials,
    });
    cache.insert(m, c.clone());
    c
}

/// The M-th cyclotomic polynomial over Z, ascending coefficients, monic.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    if m == 1 {
        return vec![BigInt::from(-1), BigInt::from(1)];
    }
    // (x^m - 1) / prod_{d | m, d < m} Phi_d
    let mut num = vec![BigInt::from(0); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::from(1);
    let mut den = vec![BigInt::from(1)];
    for d in 1..m {
        if m % d == 0 {
            den = int_poly_mul(&den, &cyclotomic_poly(d));
        }
    }
    int_poly_div_exact(&num, &den)
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials with monic divisor.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], BigInt::from(1), "divisor must be monic");
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::from(0); qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[k + j] -= t;
        }
    }
    assert!(
        rem.iter().all(|c| c == &BigInt::from(0)),
        "non-exact polynomial division"
    );
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(24), 8);
        assert_eq!(euler_phi(288), 96);
    }

    #[test]
    fn cyclotomic_small() {
        let to_i = |v: Vec<i64>| v.into_iter().map(BigInt::from).collect::<Vec<_>>();
        assert_eq!(cyclotomic_poly(1), to_i(vec![-1, 1]));
        assert_eq!(cyclotomic_poly(2), to_i(vec![1, 1]));
        assert_eq!(cyclotomic_poly(3), to_i(vec![1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), to_i(vec![1, 0, 1]));
        assert_eq!(cyclotomic_poly(5), to_i(vec![1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_poly(8), to_i(vec![1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(12), to_i(vec![1, 0, -1, 0, 1]));
    }

    #[test]
    fn orders_and_inverses() {
        assert_eq!(mult_order(3, 8), 2);
        assert_eq!(mult_order(3, 16), 4);
        assert_eq!(mult_order(3, 32), 8);
        assert_eq!(mult_order(5, 16), 4);
        assert_eq!(inv_mod(3, 8) * 3 % 8, 1);
    }
}
