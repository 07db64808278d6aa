//! Lattices over Z localized at l, with a canonical echelon basis.
//!
//! A lattice here is a finitely generated Z_(l)-submodule of Q^n, presented
//! by rational vectors whose denominators are prime to l. The canonical
//! basis is in column echelon form with pivot entries equal to powers of l,
//! pivot rows strictly increasing, and every entry of an earlier column in a
//! later pivot row reduced to its canonical integer residue mod that pivot.
//! This form is unique, so lattice equality is basis equality, and the
//! result is independent of generator order or any internal schedule.

use super::elem::{rat_l_valuation, Rat};
use crate::error::{Error, Result};
use num::{BigInt, One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLattice {
    pub l: u64,
    ambient: usize,
    /// Canonical basis columns (rational entries, l-free denominators).
    cols: Vec<Vec<Rat>>,
    /// (pivot row, l-exponent of the pivot) per column.
    pivots: Vec<(usize, u32)>,
}

impl LLattice {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.cols
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// Canonicalize the Z_(l)-span of the given rational vectors.
    pub fn from_generators(l: u64, ambient: usize, gens: &[Vec<Rat>]) -> Result<Self> {
        let lb = BigInt::from(l);
        for g in gens {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch(g.len(), ambient));
            }
            for x in g {
                if (x.denom() % &lb).is_zero() {
                    return Err(Error::NotLIntegral(l));
                }
            }
        }
        let mut cols: Vec<Vec<Rat>> = gens.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
        // Echelonize over Z_(l): at each pivot row choose a column of minimal
        // l-valuation, normalize its pivot to an exact power of l, eliminate.
        let mut done: Vec<(usize, u32, Vec<Rat>)> = Vec::new();
        for row in 0..ambient {
            let mut best: Option<(usize, i64)> = None;
            for (j, c) in cols.iter().enumerate() {
                if let Some(v) = rat_l_valuation(&c[row], l) {
                    debug_assert!(v >= 0, "generators must be l-integral");
                    if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                        best = Some((j, v));
                    }
                }
            }
            let Some((j, v)) = best else { continue };
            let mut piv = cols.swap_remove(j);
            // normalize pivot entry to exactly l^v
            let lv = Rat::from(BigInt::from(l).pow(v as u32));
            let unit = &piv[row] / &lv;
            let unit_inv = unit.recip();
            for x in piv.iter_mut() {
                *x *= &unit_inv;
            }
            // eliminate this row from the remaining columns
            for c in cols.iter_mut() {
                if c[row].is_zero() {
                    continue;
                }
                let coef = &c[row] / &lv;
                for (x, p) in c.iter_mut().zip(piv.iter()) {
                    *x -= &coef * p;
                }
            }
            cols.retain(|c| !is_zero_vec(c));
            done.push((row, v as u32, piv));
        }
        // Reduction pass: entries of earlier columns at later pivot rows go to
        // their canonical residues in [0, l^a).
        let n = done.len();
        let mut columns: Vec<Vec<Rat>> = done.iter().map(|(_, _, c)| c.clone()).collect();
        let meta: Vec<(usize, u32)> = done.iter().map(|(r, a, _)| (*r, *a)).collect();
        for j in 0..n {
            for k in (j + 1)..n {
                let (row_k, a_k) = meta[k];
                let entry = columns[j][row_k].clone();
                if entry.is_zero() {
                    continue;
                }
                let la = BigInt::from(l).pow(a_k);
                let residue = canonical_residue(&entry, &la);
                let lam = (&entry - Rat::from(residue.clone())) / Rat::from(la.clone());
                if !lam.is_zero() {
                    let pivot_col = columns[k].clone();
                    for (x, p) in columns[j].iter_mut().zip(pivot_col.iter()) {
                        *x -= &lam * p;
                    }
                }
            }
        }
        Ok(LLattice {
            l,
            ambient,
            cols: columns,
            pivots: meta,
        })
    }

    /// Exact membership in the Z_(l)-span.
    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(v.len(), self.ambient));
        }
        let lb = BigInt::from(self.l);
        for x in v {
            if (x.denom() % &lb).is_zero() {
                return Ok(false);
            }
        }
        let mut rem: Vec<Rat> = v.to_vec();
        for (j, (row, a)) in self.pivots.iter().enumerate() {
            if rem[*row].is_zero() {
                continue;
            }
            let la = Rat::from(BigInt::from(self.l).pow(*a));
            let coef = &rem[*row] / &la;
            // coefficient must be in Z_(l)
            if (coef.denom() % &lb).is_zero() {
                return Ok(false);
            }
            for (x, p) in rem.iter_mut().zip(self.cols[j].iter()) {
                *x -= &coef * p;
            }
        }
        Ok(rem.iter().all(|x| x.is_zero()))
    }

    /// All basis vectors of `other` lie in `self`.
    pub fn contains_lattice(&self, other: &LLattice) -> Result<bool> {
        for c in other.basis() {
            if !self.contains(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Canonical residue of x mod l^a: the unique integer in [0, l^a) congruent
/// to x (denominator invertible mod l^a).
fn canonical_residue(x: &Rat, la: &BigInt) -> BigInt {
    let num = x.numer();
    let den = x.denom();
    let den_inv = mod_inverse(den, la);
    let mut r = (num * den_inv) % la;
    if r.is_negative() {
        r += la;
    }
    r
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let (mut r0, mut r1) = (m.clone(), ((a % m) + m) % m);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let nr = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, nr);
        let nt = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, nt);
    }
    debug_assert!(r0.is_one(), "denominator not invertible mod l^a");
    ((t0 % m) + m) % m
}

impl Serialize for LLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // {"dim": n, "den": d, "hnf": [[...], ...]} with integer columns
        let mut den = BigInt::one();
        for c in &self.cols {
            for x in c {
                den = num::integer::lcm(den.clone(), x.denom().clone());
            }
        }
        let hnf: Vec<Vec<String>> = self
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| {
                        let v = x * Rat::from(den.clone());
                        debug_assert!(v.is_integer());
                        v.numer().to_string()
                    })
                    .collect()
            })
            .collect();
        let mut st = s.serialize_struct("LLattice", 4)?;
        st.serialize_field("dim", &self.ambient)?;
        st.serialize_field("den", &den.to_string())?;
        st.serialize_field("hnf", &hnf)?;
        st.serialize_field("pivots", &self.pivots)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zero_in_any_lattice() {
        let l = LLattice::from_generators(3, 2, &[vec![r(1), r(0)]]).unwrap();
        assert!(l.contains(&[r(0), r(0)]).unwrap());
    }

    #[test]
    fn index_l_sublattice() {
        // L = span{(3,0),(0,1)}: (3,0) in L, (1,0) not in L
        let l = LLattice::from_generators(3, 2, &[vec![r(3), r(0)], vec![r(0), r(1)]]).unwrap();
        assert!(l.contains(&[r(3), r(0)]).unwrap());
        assert!(!l.contains(&[r(1), r(0)]).unwrap());
        // prime-to-l scaling does not affect membership
        assert!(l.contains(&[r(6), r(0)]).unwrap());
        assert!(l.contains(&[rq(3, 2), r(0)]).unwrap());
        assert!(!l.contains(&[rq(1, 2), r(0)]).unwrap());
    }

    #[test]
    fn canonical_independent_of_order_and_units() {
        let g1 = vec![vec![r(1), r(2), r(0)], vec![r(0), r(3), r(1)]];
        let mut g2 = g1.clone();
        g2.reverse();
        // rescale by units of Z_(3)
        let g3: Vec<Vec<Rat>> = g1
            .iter()
            .map(|v| v.iter().map(|x| x * rq(2, 5)).collect())
            .collect();
        let a = LLattice::from_generators(3, 3, &g1).unwrap();
        let b = LLattice::from_generators(3, 3, &g2).unwrap();
        let c = LLattice::from_generators(3, 3, &g3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn pivot_valuations() {
        let l = LLattice::from_generators(3, 2, &[vec![r(9), r(3)], vec![r(0), r(3)]]).unwrap();
        // lattice = span{(9,3),(0,3)} = span{(9,0),(0,3)}
        assert_eq!(l.pivots(), &[(0, 2), (1, 1)]);
        assert!(l.contains(&[r(9), r(0)]).unwrap());
        assert!(!l.contains(&[r(3), r(0)]).unwrap());
    }

    #[test]
    fn rejects_l_denominator() {
        assert!(LLattice::from_generators(3, 1, &[vec![rq(1, 3)]]).is_err());
    }
}
