//! Reduction mod l: finite fields F_{l^d} and the reduction target.
//!
//! A `ModlTarget` fixes, once and for all, the meaning of "reduce mod l" for
//! elements of Q(zeta_M): the prime-to-l part M' of M, the minimal degree d
//! with M' | l^d - 1, and the lexicographically least irreducible factor of
//! Phi_{M'} mod l. The designated image of zeta_{M'} is the class of y in
//! F_l[y]/(factor).

use super::{cyclotomic_poly, factorize, inv_mod, mult_order, CycloElem};
use crate::error::{Error, Result};
use num::{BigInt, Zero};
use serde::Serialize;

/// Element of F_{l^d}: coefficient vector of length d over F_l, low degree first.
pub type FfldElem = Vec<u64>;

/// The finite field F_{l^d} presented as F_l[y]/(h).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ffld {
    pub l: u64,
    pub d: usize,
    /// Monic modulus h of degree d, ascending coefficients (length d+1).
    pub h: Vec<u64>,
}

impl Ffld {
    pub fn new(l: u64, h: Vec<u64>) -> Self {
        let d = h.len() - 1;
        assert_eq!(h[d], 1, "modulus must be monic");
        Ffld { l, d, h }
    }

    /// Prime field F_l.
    pub fn prime(l: u64) -> Self {
        Ffld::new(l, vec![0, 1])
    }

    pub fn size(&self) -> u64 {
        self.l.pow(self.d as u32)
    }

    pub fn zero(&self) -> FfldElem {
        vec![0; self.d]
    }

    pub fn one(&self) -> FfldElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn from_u64(&self, n: u64) -> FfldElem {
        let mut e = self.zero();
        e[0] = n % self.l;
        e
    }

    pub fn from_int(&self, n: &BigInt) -> FfldElem {
        let l = BigInt::from(self.l);
        let r = ((n % &l) + &l) % &l;
        self.from_u64(r.try_into().unwrap_or(0u64))
    }

    /// The class of y, the designated root of the modulus.
    pub fn gen(&self) -> FfldElem {
        if self.d == 1 {
            // y = -h[0]
            self.from_u64(self.l - self.h[0] % self.l)
        } else {
            let mut e = self.zero();
            e[1] = 1;
            e
        }
    }

    pub fn is_zero(&self, a: &FfldElem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &FfldElem, b: &FfldElem) -> FfldElem {
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| (x + y) % self.l)
            .collect()
    }

    pub fn neg(&self, a: &FfldElem) -> FfldElem {
        a.iter().map(|&x| (self.l - x % self.l) % self.l).collect()
    }

    pub fn sub(&self, a: &FfldElem, b: &FfldElem) -> FfldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FfldElem, b: &FfldElem) -> FfldElem {
        let mut prod = vec![0u64; 2 * self.d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.l;
            }
        }
        // reduce by monic h
        for k in (self.d..2 * self.d).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..self.d {
                let t = c * self.h[j] % self.l;
                let idx = k - self.d + j;
                prod[idx] = (prod[idx] + self.l - t) % self.l;
            }
        }
        prod.truncate(self.d);
        prod
    }

    pub fn scalar_mul(&self, c: u64, a: &FfldElem) -> FfldElem {
        a.iter().map(|&x| x * (c % self.l) % self.l).collect()
    }

    pub fn pow(&self, a: &FfldElem, mut e: u64) -> FfldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FfldElem) -> Result<FfldElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FfldElem) -> u64 {
        assert!(!self.is_zero(a));
        let n = self.size() - 1;
        let mut ord = n;
        for (p, _) in factorize(n) {
            while ord % p == 0 && self.is_one(&self.pow(a, ord / p)) {
                ord /= p;
            }
        }
        ord
    }

    pub fn is_one(&self, a: &FfldElem) -> bool {
        *a == self.one()
    }

    /// Enumerate all field elements in a fixed order (digit order, base l).
    pub fn elements(&self) -> Vec<FfldElem> {
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.d {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.l {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// The field Frobenius x -> x^l.
    pub fn frobenius(&self, a: &FfldElem) -> FfldElem {
        self.pow(a, self.l)
    }

    /// First multiplicative generator in enumeration order.
    pub fn generator(&self) -> FfldElem {
        let n = self.size() - 1;
        for e in self.elements() {
            if !self.is_zero(&e) && self.order(&e) == n {
                return e;
            }
        }
        unreachable!("finite field has a generator")
    }

    /// Rank of a matrix given by rows.
    pub fn row_rank(&self, mut rows: Vec<Vec<FfldElem>>) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let ncols = rows[0].len();
        let mut rank = 0usize;
        for col in 0..ncols {
            let mut piv = None;
            for (i, r) in rows.iter().enumerate().skip(rank) {
                if !self.is_zero(&r[col]) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            rows.swap(rank, p);
            let inv = self.inv(&rows[rank][col]).expect("pivot nonzero");
            for x in rows[rank].iter_mut() {
                *x = self.mul(x, &inv);
            }
            let pivot_row = rows[rank].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && !self.is_zero(&r[col]) {
                    let f = r[col].clone();
                    for (x, pv) in r.iter_mut().zip(pivot_row.iter()) {
                        let t = self.mul(&f, pv);
                        *x = self.sub(x, &t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Lexicographically least monic irreducible polynomial of degree d over F_l
/// (coefficients ordered low-degree first).
fn least_irreducible(l: u64, d: usize) -> Vec<u64> {
    assert!(d >= 1);
    if d == 1 {
        return vec![0, 1]; // y
    }
    let total = l.pow(d as u32);
    for idx in 0..total {
        let mut h = Vec::with_capacity(d + 1);
        let mut n = idx;
        // idx digits, most significant digit = constant coefficient, so that
        // increasing idx walks the (c_0, c_1, ...) tuples in lex order
        let mut digits = vec![0u64; d];
        for i in (0..d).rev() {
            digits[i] = n % l;
            n /= l;
        }
        // digits[0] = c_0 ... digits[d-1] = c_{d-1}
        h.extend_from_slice(&digits);
        h.push(1);
        if poly_irreducible_mod(&h, l) {
            return h;
        }
    }
    unreachable!("irreducible polynomial of every degree exists")
}

fn poly_mod_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mod_rem(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_mod_trim(&mut r);
    let mut bb = b.to_vec();
    poly_mod_trim(&mut bb);
    let db = bb.len() - 1;
    let lead_inv = inv_mod(bb[db], l);
    while r.len() > db.max(0) && r.len() - 1 >= db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let c = r[dr] * lead_inv % l;
        for j in 0..=db {
            let t = c * bb[j] % l;
            r[dr - db + j] = (r[dr - db + j] + l - t) % l;
        }
        poly_mod_trim(&mut r);
        if r.len() == 1 && r[0] == 0 {
            break;
        }
    }
    r
}

fn poly_mod_gcd(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_mod_trim(&mut x);
    poly_mod_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_mod_rem(&x, &y, l);
        x = y;
        y = r;
    }
    x
}

fn poly_mod_mulmod(a: &[u64], b: &[u64], f: &[u64], l: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % l;
        }
    }
    poly_mod_rem(&prod, f, l)
}

/// x^(l^k) mod f by repeated Frobenius.
fn poly_mod_xpow_lk(f: &[u64], l: u64, k: usize) -> Vec<u64> {
    let mut x = vec![0, 1];
    for _ in 0..k {
        // raise to l-th power
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = l;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mod_mulmod(&acc, &base, f, l);
            }
            base = poly_mod_mulmod(&base, &base, f, l);
            e >>= 1;
        }
        x = acc;
    }
    x
}

fn poly_irreducible_mod(f: &[u64], l: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    // x^(l^d) == x mod f
    let xd = poly_mod_xpow_lk(f, l, d);
    let mut diff = vec![0u64; xd.len().max(2)];
    for (i, &c) in xd.iter().enumerate() {
        diff[i] = c;
    }
    diff[1] = (diff[1] + l - 1) % l;
    poly_mod_trim(&mut diff);
    if !(diff.len() == 1 && diff[0] == 0) {
        return false;
    }
    // gcd(x^(l^(d/p)) - x, f) = 1 for every prime p | d
    for (p, _) in factorize(d as u64) {
        let k = d / p as usize;
        let xk = poly_mod_xpow_lk(f, l, k);
        let mut diff = vec![0u64; xk.len().max(2)];
        for (i, &c) in xk.iter().enumerate() {
            diff[i] = c;
        }
        diff[1] = (diff[1] + l - 1) % l;
        poly_mod_trim(&mut diff);
        let g = poly_mod_gcd(f, &diff, l);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The reduction target: the chosen prime above l in Q(zeta_{M'}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModlTarget {
    pub l: u64,
    /// Prime-to-l part of the modulus this target was built for.
    pub m_prime: u64,
    /// Minimal d with M' | l^d - 1.
    pub d: usize,
    /// The chosen irreducible factor of Phi_{M'} mod l (ascending, monic).
    pub factor: Vec<u64>,
    pub fld: Ffld,
}

impl ModlTarget {
    /// Build the target for modulus m and odd prime l.
    pub fn new(m: u64, l: u64) -> Result<Self> {
        if l < 3 || l % 2 == 0 || !super::is_prime(l) {
            return Err(Error::InvalidParameter(format!(
                "l must be an odd prime, got {l}"
            )));
        }
        let mut m_prime = m.max(1);
        while m_prime % l == 0 {
            m_prime /= l;
        }
        let d = mult_order(l % m_prime.max(2), m_prime) as usize;
        let d = if m_prime <= 2 { 1 } else { d };

        // Find the lexicographically least irreducible factor of Phi_{M'} mod l.
        // All factors have degree d; they are the minimal polynomials of the
        // primitive M'-th roots of unity in F_{l^d}.
        let factor = if m_prime == 1 {
            vec![l - 1, 1] // y - 1
        } else {
            let boot = Ffld::new(l, least_irreducible(l, d));
            let g = boot.generator();
            let omega = boot.pow(&g, (boot.size() - 1) / m_prime);
            debug_assert_eq!(boot.order(&omega), m_prime);
            let mut best: Option<Vec<u64>> = None;
            let mut seen = std::collections::BTreeSet::new();
            for j in 1..m_prime {
                if num::integer::gcd(j, m_prime) != 1 || seen.contains(&j) {
                    continue;
                }
                // Frobenius orbit of exponents
                let mut jj = j;
                loop {
                    seen.insert(jj);
                    jj = jj * (l % m_prime) % m_prime;
                    if jj == j {
                        break;
                    }
                }
                // minimal polynomial of omega^j: prod over orbit of (Y - omega^(j l^i))
                let mut coeffs = vec![boot.one()]; // poly 1
                let mut e = j;
                loop {
                    let root = boot.pow(&omega, e);
                    // multiply by (Y - root)
                    let mut next = vec![boot.zero(); coeffs.len() + 1];
                    for (i, c) in coeffs.iter().enumerate() {
                        next[i + 1] = boot.add(&next[i + 1], c);
                        let t = boot.mul(c, &root);
                        next[i] = boot.sub(&next[i], &t);
                    }
                    coeffs = next;
                    e = e * (l % m_prime) % m_prime;
                    if e == j {
                        break;
                    }
                }
                // coefficients must lie in the prime field
                let mut flat = Vec::with_capacity(coeffs.len());
                for c in &coeffs {
                    debug_assert!(c[1..].iter().all(|&x| x == 0));
                    flat.push(c[0]);
                }
                if best.as_ref().map(|b| flat < *b).unwrap_or(true) {
                    best = Some(flat);
                }
            }
            best.expect("Phi_{M'} has at least one factor")
        };
        let fld = Ffld::new(l, factor.clone());

        // The designated root must indeed kill Phi_{M'}.
        if m_prime > 1 {
            let phi_poly = cyclotomic_poly(m_prime);
            let y = fld.gen();
            let mut acc = fld.zero();
            let mut pw = fld.one();
            for c in &phi_poly {
                let cf = fld.from_int(c);
                acc = fld.add(&acc, &fld.mul(&cf, &pw));
                pw = fld.mul(&pw, &y);
            }
            assert!(fld.is_zero(&acc), "designated root is not a root of Phi");
        }

        Ok(ModlTarget {
            l,
            m_prime,
            d,
            factor,
            fld,
        })
    }

    /// Image of a primitive m0-th root of unity (m0 | M', the designated one).
    pub fn root_of(&self, m0: u64) -> Result<FfldElem> {
        if m0 == 0 || self.m_prime % m0 != 0 {
            return Err(Error::InvalidParameter(format!(
                "{m0} does not divide M' = {}",
                self.m_prime
            )));
        }
        Ok(self.fld.pow(&self.fld.gen(), self.m_prime / m0))
    }

    /// Reduce an l-integral cyclotomic element.
    ///
    /// zeta_{M'} goes to the designated root; l-power-order roots of unity go
    /// to 1. Errors when the element is not l-integral or its prime-to-l
    /// conductor does not divide M'.
    pub fn reduce(&self, a: &CycloElem) -> Result<FfldElem> {
        if !a.is_l_integral(self.l) {
            return Err(Error::NotLIntegral(self.l));
        }
        let m = a.modulus();
        let mut m0 = m;
        let mut s = 0u32;
        while m0 % self.l == 0 {
            m0 /= self.l;
            s += 1;
        }
        if m0 > 1 && self.m_prime % m0 != 0 {
            return Err(Error::InvalidParameter(format!(
                "conductor {m0} not supported by target M' = {}",
                self.m_prime
            )));
        }
        // zeta_m = (prime-to-l part)·(l-part); the image of zeta_m is
        // r^u where r has order m0 and u = (l^s)^{-1} mod m0.
        let img = if m0 == 1 {
            self.fld.one()
        } else {
            let ls = super::pow_mod(self.l, s as u64, m0);
            let u = inv_mod(ls, m0);
            self.fld.pow(&self.root_of(m0)?, u)
        };
        // Horner evaluation of the coefficient vector at img.
        let lb = BigInt::from(self.l);
        let mut acc = self.fld.zero();
        for c in a.coeffs().iter().rev() {
            acc = self.fld.mul(&acc, &img);
            if !c.is_zero() {
                let num = self.fld.from_int(c.numer());
                let den = c.denom() % &lb;
                debug_assert!(!den.is_zero());
                let den_elem = self.fld.from_int(c.denom());
                let c_red = self.fld.mul(&num, &self.fld.inv(&den_elem)?);
                acc = self.fld.add(&acc, &c_red);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::elem::rat_from_parts;

    #[test]
    fn target_8_mod_3() {
        let t = ModlTarget::new(8, 3).unwrap();
        assert_eq!(t.d, 2);
        // Phi_8 = x^4+1 factors mod 3 as (x^2+x+2)(x^2+2x+2); lex-least wins.
        assert_eq!(t.factor, vec![2, 1, 1]);
        // the designated root has order 8 in F_9, by direct exponentiation
        let r = t.root_of(8).unwrap();
        assert_eq!(t.fld.order(&r), 8);
    }

    #[test]
    fn reduce_basics() {
        let t = ModlTarget::new(24, 3).unwrap();
        assert_eq!(t.m_prime, 8);
        // 1 + 3*zeta -> 1
        let a = CycloElem::one(24)
            .add(&CycloElem::root_of_unity(24, 1).scale(&rat_from_parts(3, 1)))
            .unwrap();
        assert_eq!(t.reduce(&a).unwrap(), t.fld.one());
        // l-power-order roots of unity reduce to 1
        let z3 = CycloElem::root_of_unity(3, 1);
        assert_eq!(t.reduce(&z3).unwrap(), t.fld.one());
        let z9 = CycloElem::root_of_unity(9, 1);
        let t9 = ModlTarget::new(9, 3).unwrap();
        assert_eq!(t9.reduce(&z9).unwrap(), t9.fld.one());
        // zeta_8 reduces to the designated order-8 root
        let z8 = CycloElem::root_of_unity(8, 1);
        let img = t.reduce(&z8).unwrap();
        assert_eq!(t.fld.order(&img), 8);
        assert_eq!(img, t.root_of(8).unwrap());
        // non-integral input is rejected
        let bad = CycloElem::from_rational(rat_from_parts(1, 3), 24);
        assert!(t.reduce(&bad).is_err());
    }

    #[test]
    fn reduce_is_ring_hom() {
        let t = ModlTarget::new(24, 3).unwrap();
        // deterministic pseudo-random l-integral pairs
        let mut seed = 1u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        for _ in 0..100 {
            let a = CycloElem::root_of_unity(24, next() % 24)
                .add(&CycloElem::from_int(next() % 5, 24))
                .unwrap();
            let b = CycloElem::root_of_unity(24, next() % 24)
                .sub(&CycloElem::from_int(next() % 5, 24))
                .unwrap();
            let lhs = t.reduce(&a.mul(&b).unwrap()).unwrap();
            let rhs = t.fld.mul(&t.reduce(&a).unwrap(), &t.reduce(&b).unwrap());
            assert_eq!(lhs, rhs);
            let lhs = t.reduce(&a.add(&b).unwrap()).unwrap();
            let rhs = t.fld.add(&t.reduce(&a).unwrap(), &t.reduce(&b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn least_irreducible_degrees() {
        for l in [3u64, 5, 7] {
            for d in 1..=4usize {
                let h = least_irreducible(l, d);
                assert_eq!(h.len(), d + 1);
                assert!(poly_irreducible_mod(&h, l));
            }
        }
    }
}
