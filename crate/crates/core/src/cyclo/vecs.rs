//! Vectors of cyclotomic elements indexed by lift labels, and the saturation
//! of multiplicatively closed l-local lattices they generate.

use super::elem::Rat;
use super::{ctx, euler_phi, CycloElem, LLattice};
use crate::error::{Error, Result};
use serde::Serialize;

/// A vector of elements of Q(zeta_M) with a fixed, ordered index set.
///
/// The index order is set at construction and never reordered; all entries
/// share the common modulus chosen at construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycloVec {
    labels: Vec<String>,
    entries: Vec<CycloElem>,
    modulus: u64,
}

impl CycloVec {
    pub fn new(labels: Vec<String>, entries: Vec<CycloElem>) -> Result<Self> {
        if labels.len() != entries.len() {
            return Err(Error::DimensionMismatch(labels.len(), entries.len()));
        }
        let mut m = 1u64;
        for e in &entries {
            m = num::integer::lcm(m, e.modulus());
        }
        let entries = entries
            .into_iter()
            .map(|e| e.lift_to(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloVec {
            labels,
            entries,
            modulus: m,
        })
    }

    pub fn constant(labels: Vec<String>, value: CycloElem) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[CycloElem] {
        &self.entries
    }

    pub fn lift_to(&self, m: u64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.lift_to(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloVec {
            labels: self.labels.clone(),
            entries,
            modulus: m,
        })
    }

    fn common(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.labels != b.labels {
            return Err(Error::InvalidParameter(
                "index sets differ".to_string(),
            ));
        }
        let m = num::integer::lcm(a.modulus, b.modulus);
        Ok((a.lift_to(m)?, b.lift_to(m)?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::common(self, other)?;
        let entries = a
            .entries
            .iter()
            .zip(b.entries.iter())
            .map(|(x, y)| x.mul(y))
            .collect::<Result<Vec<_>>>()?;
        CycloVec::new(a.labels, entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::common(self, other)?;
        let entries = a
            .entries
            .iter()
            .zip(b.entries.iter())
            .map(|(x, y)| x.add(y))
            .collect::<Result<Vec<_>>>()?;
        CycloVec::new(a.labels, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::common(self, other)?;
        let entries = a
            .entries
            .iter()
            .zip(b.entries.iter())
            .map(|(x, y)| x.sub(y))
            .collect::<Result<Vec<_>>>()?;
        CycloVec::new(a.labels, entries)
    }

    pub fn scale_elem(&self, c: &CycloElem) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.mul(c))
            .collect::<Result<Vec<_>>>()?;
        CycloVec::new(self.labels.clone(), entries)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        CycloVec {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(|x| x.scale(r)).collect(),
            modulus: self.modulus,
        }
    }

    pub fn sub_const(&self, c: &CycloElem) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.sub(c))
            .collect::<Result<Vec<_>>>()?;
        CycloVec::new(self.labels.clone(), entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn eq_value(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(x, y)| x.eq_value(y))
    }

    /// Flatten to rational coordinates in Q^(len * phi(m)).
    pub fn flatten(&self, m: u64) -> Result<Vec<Rat>> {
        let lifted = self.lift_to(m)?;
        let phi = euler_phi(m) as usize;
        let mut out = Vec::with_capacity(lifted.entries.len() * phi);
        for e in &lifted.entries {
            out.extend_from_slice(e.coeffs());
        }
        Ok(out)
    }

    /// Rebuild from flat rational coordinates.
    pub fn unflatten(labels: &[String], m: u64, flat: &[Rat]) -> Result<Self> {
        let phi = euler_phi(m) as usize;
        if flat.len() != labels.len() * phi {
            return Err(Error::DimensionMismatch(flat.len(), labels.len() * phi));
        }
        let _ = ctx(m);
        let entries = flat
            .chunks(phi)
            .map(|ch| CycloElem::from_coeffs(m, ch.to_vec()))
            .collect();
        CycloVec::new(labels.to_vec(), entries)
    }
}

/// Result of a saturation run.
#[derive(Clone, Debug, Serialize)]
pub struct SaturationOutcome {
    pub lattice: LLattice,
    /// First degree at which the lattice stabilized under all generators.
    pub stable_degree: usize,
    /// Common cyclotomic modulus of the ambient coordinates.
    pub modulus: u64,
    /// Number of index labels (the ambient dimension in field units).
    pub index_size: usize,
}

/// Saturate the multiplicative l-local lattice generated by monomials in the
/// generators (and scalar generators, applied diagonally), starting from 1.
///
/// Stops at the first degree where multiplying by every generator stays in
/// the span; errors with `CapExhausted` if the cap is hit first.
pub fn lattice_saturate(
    generators: &[CycloVec],
    scalar_generators: &[CycloElem],
    cap: usize,
    l: u64,
) -> Result<SaturationOutcome> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("no generators".to_string()));
    }
    if cap < 1 {
        return Err(Error::InvalidParameter("cap must be >= 1".to_string()));
    }
    let labels = generators[0].labels().to_vec();
    let mut m = 1u64;
    for g in generators {
        if g.labels() != &labels[..] {
            return Err(Error::InvalidParameter("index sets differ".to_string()));
        }
        m = num::integer::lcm(m, g.modulus());
    }
    for s in scalar_generators {
        m = num::integer::lcm(m, s.modulus());
    }
    let phi = euler_phi(m) as usize;
    let ambient = labels.len() * phi;

    let mut all_gens: Vec<CycloVec> = generators.iter().map(|g| g.lift_to(m)).collect::<Result<_>>()?;
    for s in scalar_generators {
        all_gens.push(CycloVec::constant(labels.clone(), s.lift_to(m)?)?);
    }

    let one = CycloVec::constant(labels.clone(), CycloElem::one(1))?.lift_to(m)?;
    let mut frontier: Vec<CycloVec> = vec![one.clone()];
    let mut flats: Vec<Vec<Rat>> = vec![one.flatten(m)?];
    let mut lat = LLattice::from_generators(l, ambient, &flats)?;

    for degree in 1..=cap {
        // multiply the whole current basis by each generator
        let basis_vecs: Vec<CycloVec> = lat
            .basis()
            .iter()
            .map(|col| CycloVec::unflatten(&labels, m, col))
            .collect::<Result<_>>()?;
        let mut new_flats = flats.clone();
        for b in &basis_vecs {
            for g in &all_gens {
                new_flats.push(b.mul(g)?.flatten(m)?);
            }
        }
        // sort-then-reduce keeps the run deterministic regardless of schedule
        new_flats.sort();
        let next = LLattice::from_generators(l, ambient, &new_flats)?;
        if next == lat {
            return Ok(SaturationOutcome {
                lattice: lat,
                stable_degree: degree - 1,
                modulus: m,
                index_size: labels.len(),
            });
        }
        flats = next.basis().to_vec();
        let _ = &frontier;
        frontier.clear();
        lat = next;
    }
    Err(Error::CapExhausted {
        cap,
        degree: cap,
    })
}

/// Membership of a cyclotomic vector in an l-local lattice produced at
/// modulus `m` over the same index set.
pub fn lattice_member(v: &CycloVec, out: &SaturationOutcome) -> Result<bool> {
    let flat = v.flatten(out.modulus)?;
    out.lattice.contains(&flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, e: i64) -> CycloElem {
        CycloElem::root_of_unity(m, e)
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn rank_one_from_identity() {
        let one = CycloVec::constant(labels(3), CycloElem::one(1)).unwrap();
        let out = lattice_saturate(&[one], &[], 6, 5).unwrap();
        assert_eq!(out.lattice.rank(), 1);
        assert_eq!(out.stable_degree, 0);
    }

    #[test]
    fn vandermonde_cube_roots_full_rank() {
        // v_i = (zeta_3^(0*i), zeta_3^(1*i), zeta_3^(2*i)); the Vandermonde
        // determinant of the cube roots is a unit at l = 5, so the algebra
        // spans all of K^3; the Z_(5)-rank of the span of v_0, v_1, v_2 is 3.
        let lab = labels(3);
        let vs: Vec<CycloVec> = (0..3)
            .map(|i| {
                CycloVec::new(
                    lab.clone(),
                    (0..3).map(|k| z(3, (i * k) as i64)).collect(),
                )
                .unwrap()
            })
            .collect();
        let out = lattice_saturate(&vs, &[], 6, 5).unwrap();
        assert_eq!(out.lattice.rank(), 3);
        // products of any two basis elements stay inside (closure audit)
        let basis: Vec<CycloVec> = out
            .lattice
            .basis()
            .iter()
            .map(|c| CycloVec::unflatten(&lab, out.modulus, c).unwrap())
            .collect();
        for a in &basis {
            for b in &basis {
                assert!(lattice_member(&a.mul(b).unwrap(), &out).unwrap());
            }
        }
    }

    #[test]
    fn membership_prime_to_l_scaling_invariance() {
        let lab = labels(2);
        let g = CycloVec::new(lab.clone(), vec![z(8, 1), z(8, 3)]).unwrap();
        let out = lattice_saturate(&[g.clone()], &[], 8, 3).unwrap();
        let v = g.scale_rat(&Rat::new(num::BigInt::from(14), num::BigInt::from(5)));
        assert!(lattice_member(&v, &out).unwrap());
        let w = g.scale_rat(&Rat::new(num::BigInt::from(1), num::BigInt::from(3)));
        assert!(!lattice_member(&w, &out).unwrap());
    }

    #[test]
    fn cap_exhaustion_reports() {
        // powers of zeta_16 need degree 7 to span Z_(3)[zeta_16]; a cap of 3
        // is exhausted before stabilization
        let lab = labels(1);
        let g = CycloVec::new(lab.clone(), vec![z(16, 1)]).unwrap();
        let err = lattice_saturate(&[g.clone()], &[], 3, 3).unwrap_err();
        assert!(matches!(err, Error::CapExhausted { .. }));
        let ok = lattice_saturate(&[g], &[], 10, 3).unwrap();
        assert_eq!(ok.lattice.rank(), 8);
    }
}
