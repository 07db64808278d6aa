//! Finite fields F_q and F_{q^2}, the group GL_2(F_q), its conjugacy
//! classes and ordinary character table, and the mod-l classification of
//! its irreducible representations.

mod chars;
mod classes;
pub mod brute;
mod modl_classify;

pub use chars::{char_inner, char_norm, char_table, column_inner, cuspidal_char, prime_to_l_part, CharLabel, CharTheta, IrrChar, ThetaHost, ThetaWorld};
pub use classes::{conj_classes, inverse_class_index, ClassDatum, ClassTag};
pub use modl_classify::{
    brauer_reduce, classification_brauer_rows, congruence_case, lift_set, modl_classify,
    ClassificationReport, CongruenceCase, LiftSet, ModlIrrLabel,
};

use crate::cyclo::{factorize, is_prime};
use crate::error::{Error, Result};
use serde::Serialize;

/// The fixed model of F_q and F_{q^2} = F_q[b]/(g).
///
/// F_q is F_p[a]/(f) with f the lexicographically least monic primitive
/// polynomial of degree r (coefficients ordered low-degree first); F_{q^2}
/// is built over F_q the same way in degree 2. Elements of F_q are coded as
/// integers in [0, q) whose base-p digits are the coefficients; elements of
/// F_{q^2} are coded as c0 + c1 * q.
#[derive(Clone, Debug, Serialize)]
pub struct FqModel {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    /// Defining polynomial of F_q over F_p, ascending, monic, length r+1.
    pub f: Vec<u64>,
    /// Defining polynomial of F_{q^2} over F_q (codes), ascending, length 3.
    pub g: Vec<u64>,
    /// Code of the primitive element g2 of F_{q^2} (the class of b).
    pub g2: u64,
    /// Code in F_q of g = g2^(q+1), the norm of g2; a generator of F_q^x.
    pub g1: u64,
    #[serde(skip)]
    dlog2_table: Vec<u32>,
    #[serde(skip)]
    pow2_table: Vec<u64>,
    #[serde(skip)]
    dlog1_table: Vec<u32>,
}

impl FqModel {
    pub fn new(q: u64) -> Result<Self> {
        let fac = factorize(q);
        if q < 2 || fac.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "{q} is not a prime power"
            )));
        }
        let (p, r) = fac[0];
        let f = least_primitive_poly_fp(p, r as usize);
        let base = BaseField { p, r, f: f.clone() };
        let g = least_primitive_poly_deg2(&base);
        let q2 = q * q;

        // discrete logs for F_{q^2}^x with respect to g2 = class of b
        let g2 = base.q(); // code of b: c0 = 0, c1 = 1 -> 0 + 1*q
        let mut pow2_table = Vec::with_capacity((q2 - 1) as usize);
        let mut dlog2_table = vec![u32::MAX; q2 as usize];
        let mut cur = 1u64; // code of 1
        for k in 0..(q2 - 1) {
            pow2_table.push(cur);
            dlog2_table[cur as usize] = k as u32;
            cur = ext_mul(&base, &g, cur, g2);
        }
        debug_assert_eq!(cur, 1, "g2 does not have order q^2 - 1");

        // g1 = g2^(q+1) lies in F_q and generates F_q^x
        let g1_code2 = pow2_table[(q + 1) as usize % (q2 - 1) as usize];
        debug_assert_eq!(g1_code2 / q, 0, "norm of g2 must lie in F_q");
        let g1 = g1_code2 % q;
        let mut dlog1_table = vec![u32::MAX; q as usize];
        let mut cur = 1u64;
        for k in 0..(q - 1) {
            dlog1_table[cur as usize] = k as u32;
            cur = base.mul(cur, g1);
        }
        debug_assert_eq!(cur, 1);

        Ok(FqModel {
            p,
            r,
            q,
            f,
            g,
            g2,
            g1,
            dlog2_table,
            pow2_table,
            dlog1_table,
        })
    }

    fn base(&self) -> BaseField {
        BaseField {
            p: self.p,
            r: self.r,
            f: self.f.clone(),
        }
    }

    // --- F_q arithmetic on codes ---

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.base().add(a, b)
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.base().neg(a)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.base().add(a, self.base().neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.base().mul(a, b)
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert_ne!(a, 0, "inverse of zero");
        let k = self.dlog1_table[a as usize] as u64;
        self.pow1((self.q - 1 - k) % (self.q - 1))
    }

    /// g1^k as an F_q code.
    pub fn pow1(&self, k: u64) -> u64 {
        let k = k % (self.q - 1);
        let mut acc = 1u64;
        let mut base = self.g1;
        let mut e = k;
        let bf = self.base();
        while e > 0 {
            if e & 1 == 1 {
                acc = bf.mul(acc, base);
            }
            base = bf.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Discrete log of a nonzero F_q code with respect to g1.
    pub fn dlog_fq(&self, a: u64) -> u64 {
        assert_ne!(a, 0);
        self.dlog1_table[a as usize] as u64
    }

    /// g2^k as an F_{q^2} code.
    pub fn pow2(&self, k: u64) -> u64 {
        self.pow2_table[(k % (self.q * self.q - 1)) as usize]
    }

    /// Discrete log of a nonzero F_{q^2} code with respect to g2.
    pub fn dlog_fq2(&self, a: u64) -> u64 {
        assert_ne!(a, 0);
        let d = self.dlog2_table[a as usize];
        assert_ne!(d, u32::MAX);
        d as u64
    }

    /// Absolute trace F_q -> F_p, returned as an integer in [0, p).
    pub fn trace_to_fp(&self, a: u64) -> u64 {
        let bf = self.base();
        let mut acc = 0u64;
        let mut x = a;
        for _ in 0..self.r {
            acc = bf.add(acc, x);
            // x -> x^p
            let mut y = 1u64;
            for _ in 0..self.p {
                y = bf.mul(y, x);
            }
            x = y;
        }
        debug_assert!(acc < self.p, "trace lands in the prime field");
        acc
    }

    /// The matrix of multiplication by g2^k on F_{q^2} in the basis {1, b}.
    /// Entries are F_q codes, row-major [[m00, m01], [m10, m11]].
    pub fn torus_matrix(&self, k: u64) -> [[u64; 2]; 2] {
        let code = self.pow2(k);
        let (c0, c1) = (code % self.q, code / self.q);
        let bf = self.base();
        // b^2 = -g[0] - g[1] b
        let m01 = bf.mul(c1, bf.neg(self.g[0]));
        let m11 = bf.add(c0, bf.mul(c1, bf.neg(self.g[1])));
        [[c0, m01], [c1, m11]]
    }

    /// F_{q^2} code of an embedded F_q element.
    pub fn embed_fq(&self, a: u64) -> u64 {
        a
    }
}

/// Internal F_q arithmetic on integer codes.
struct BaseField {
    p: u64,
    r: u32,
    f: Vec<u64>,
}

impl BaseField {
    fn q(&self) -> u64 {
        self.p.pow(self.r)
    }

    fn digits(&self, a: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.r as usize);
        let mut a = a;
        for _ in 0..self.r {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn code(&self, d: &[u64]) -> u64 {
        let mut a = 0u64;
        for &x in d.iter().rev() {
            a = a * self.p + x % self.p;
        }
        a
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let d: Vec<u64> = da
            .iter()
            .zip(db.iter())
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.code(&d)
    }

    fn neg(&self, a: u64) -> u64 {
        let d: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x % self.p) % self.p)
            .collect();
        self.code(&d)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let n = self.r as usize;
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                let t = c * self.f[j] % self.p;
                prod[k - n + j] = (prod[k - n + j] + self.p - t) % self.p;
            }
        }
        prod.truncate(n);
        self.code(&prod)
    }
}

/// Multiplication in F_{q^2} = F_q[b]/(g) on combined codes.
fn ext_mul(base: &BaseField, g: &[u64], a: u64, b: u64) -> u64 {
    let q = base.q();
    let (a0, a1) = (a % q, a / q);
    let (b0, b1) = (b % q, b / q);
    let mut c0 = base.mul(a0, b0);
    let mut c1 = base.add(base.mul(a0, b1), base.mul(a1, b0));
    let cross = base.mul(a1, b1);
    if cross != 0 {
        // b^2 = -g0 - g1 b
        c0 = base.add(c0, base.mul(cross, base.neg(g[0])));
        c1 = base.add(c1, base.mul(cross, base.neg(g[1])));
    }
    c0 + c1 * q
}

/// Lexicographically least monic primitive polynomial over F_p of degree r.
fn least_primitive_poly_fp(p: u64, r: usize) -> Vec<u64> {
    let q = p.pow(r as u32);
    let pr_factors = factorize(q - 1);
    let total = p.pow(r as u32);
    for idx in 0..total {
        // coefficient tuple (c_0 .. c_{r-1}) in lex order
        let mut digits = vec![0u64; r];
        let mut n = idx;
        for i in (0..r).rev() {
            digits[i] = n % p;
            n /= p;
        }
        if digits[0] == 0 {
            continue; // x is not a unit
        }
        let mut f = digits.clone();
        f.push(1);
        if x_has_order(&f, p, q - 1, &pr_factors) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist for every (p, r)")
}

/// Does the class of x have multiplicative order exactly n in F_p[x]/(f)?
/// (When it does, f is automatically irreducible and primitive.)
fn x_has_order(f: &[u64], p: u64, n: u64, n_factors: &[(u64, u32)]) -> bool {
    let powx = |e: u64| -> Vec<u64> {
        // x^e mod f over F_p
        let r = f.len() - 1;
        let mut acc = vec![0u64; r];
        acc[0] = 1;
        let mut base = vec![0u64; r];
        if r == 1 {
            base[0] = (p - f[0] % p) % p;
        } else {
            base[1] = 1;
        }
        let mut e = e;
        let mulmod = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut prod = vec![0u64; 2 * r];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for k in (r..2 * r).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for j in 0..r {
                    let t = c * f[j] % p;
                    prod[k - r + j] = (prod[k - r + j] + p - t) % p;
                }
            }
            prod.truncate(r);
            prod
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base);
            }
            base = mulmod(&base, &base);
            e >>= 1;
        }
        acc
    };
    let one = {
        let mut v = vec![0u64; f.len() - 1];
        v[0] = 1;
        v
    };
    if powx(n) != one {
        return false;
    }
    for &(s, _) in n_factors {
        if powx(n / s) == one {
            return false;
        }
    }
    true
}

/// Lexicographically least monic primitive degree-2 polynomial over F_q,
/// ordered by the integer codes of (c_0, c_1).
fn least_primitive_poly_deg2(base: &BaseField) -> Vec<u64> {
    let q = base.q();
    let n = q * q - 1;
    let n_factors = factorize(n);
    for c0 in 0..q {
        if c0 == 0 {
            continue;
        }
        for c1 in 0..q {
            let g = vec![c0, c1, 1];
            // order of the class of b in F_q[b]/(g)
            if ext_x_has_order(base, &g, n, &n_factors) {
                return g;
            }
        }
    }
    unreachable!("primitive quadratics exist over every F_q")
}

fn ext_x_has_order(base: &BaseField, g: &[u64], n: u64, n_factors: &[(u64, u32)]) -> bool {
    let q = base.q();
    let b_code = q; // the class of b
    let powb = |e: u64| -> u64 {
        let mut acc = 1u64;
        let mut bb = b_code;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = ext_mul(base, g, acc, bb);
            }
            bb = ext_mul(base, g, bb, bb);
            e >>= 1;
        }
        acc
    };
    if powb(n) != 1 {
        return false;
    }
    for &(s, _) in n_factors {
        if powb(n / s) == 1 {
            return false;
        }
    }
    true
}

/// Shared validation for (q, l) parameters: l an odd prime different from p.
pub fn validate_q_l(q: u64, l: u64) -> Result<(u64, u32)> {
    let fac = factorize(q);
    if q < 2 || fac.len() != 1 {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    let (p, r) = fac[0];
    if l == 2 {
        return Err(Error::InvalidParameter("l = 2 is rejected everywhere".into()));
    }
    if !is_prime(l) || l % 2 == 0 {
        return Err(Error::InvalidParameter(format!("l = {l} is not an odd prime")));
    }
    if l == p {
        return Err(Error::InvalidParameter(format!("l = p = {l} is not allowed")));
    }
    Ok((p, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_model() {
        let m = FqModel::new(4).unwrap();
        assert_eq!((m.p, m.r), (2, 2));
        assert_eq!(m.f, vec![1, 1, 1]); // x^2 + x + 1
        // g2 has order 15, its norm has order 3
        assert_eq!(m.pow2(15), 1);
        assert_ne!(m.pow2(5), 1);
        assert_ne!(m.pow2(3), 1);
        let g1_back = m.pow2(5); // g2^5 has order 3 = q - 1: lies in F_4
        assert!(g1_back < 4);
    }

    #[test]
    fn f5_model() {
        let m = FqModel::new(5).unwrap();
        // norm map sends g2 to g1
        let n = m.pow2(6); // g2^(q+1)
        assert_eq!(n % 5, m.g1);
        assert!(n < 5);
        // g1 generates F_5^x
        let mut seen = std::collections::BTreeSet::new();
        for k in 0..4 {
            seen.insert(m.pow1(k));
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn trace_is_fp_valued() {
        let m = FqModel::new(9).unwrap();
        for a in 0..9u64 {
            let t = m.trace_to_fp(a);
            assert!(t < 3);
        }
        // trace is additive
        let t1 = m.trace_to_fp(4);
        let t2 = m.trace_to_fp(7);
        let ts = m.trace_to_fp(m.add(4, 7));
        assert_eq!((t1 + t2) % 3, ts);
    }

    #[test]
    fn torus_matrix_multiplicative() {
        let m = FqModel::new(3).unwrap();
        let mat_mul = |a: [[u64; 2]; 2], b: [[u64; 2]; 2]| -> [[u64; 2]; 2] {
            let mut c = [[0u64; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = m.add(m.mul(a[i][0], b[0][j]), m.mul(a[i][1], b[1][j]));
                }
            }
            c
        };
        let a = m.torus_matrix(1);
        let b = m.torus_matrix(3);
        assert_eq!(mat_mul(a, b), m.torus_matrix(4));
        assert_eq!(m.torus_matrix(0), [[1, 0], [0, 1]]);
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(FqModel::new(6).is_err());
        assert!(FqModel::new(1).is_err());
        assert!(validate_q_l(5, 2).is_err());
        assert!(validate_q_l(5, 5).is_err());
        assert!(validate_q_l(9, 3).is_err());
        assert!(validate_q_l(5, 9).is_err());
        assert!(validate_q_l(5, 3).is_ok());
    }
}
