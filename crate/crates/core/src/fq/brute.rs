//! Brute-force cross-checks for small q: explicit matrix enumeration of
//! GL_2(F_q), conjugation orbits, and induced/virtual characters computed
//! by literal summation over the group.
//!
//! This path is independent of the closed-form table and is what the
//! verify suite runs for q <= 5.

use super::chars::{CharLabel, IrrChar};
use super::classes::ClassDatum;
use super::FqModel;
use crate::cyclo::CycloElem;
use crate::error::{Error, Result};
use num::{BigInt, BigRational};
use std::collections::BTreeMap;

pub type Mat = [[u64; 2]; 2];

/// The whole group, with constant-time lookup of element ids.
pub struct BruteGroup<'a> {
    pub model: &'a FqModel,
    pub elems: Vec<Mat>,
    index: BTreeMap<Mat, usize>,
}

impl<'a> BruteGroup<'a> {
    pub fn new(model: &'a FqModel) -> Result<Self> {
        let q = model.q;
        if q > 7 {
            return Err(Error::InvalidParameter(
                "brute-force enumeration is limited to q <= 7".to_string(),
            ));
        }
        let mut elems = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let det = model.sub(model.mul(a, d), model.mul(b, c));
                        if det != 0 {
                            elems.push([[a, b], [c, d]]);
                        }
                    }
                }
            }
        }
        let index = elems.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(BruteGroup { model, elems, index })
    }

    pub fn mul(&self, x: Mat, y: Mat) -> Mat {
        let m = self.model;
        let mut z = [[0u64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                z[i][j] = m.add(m.mul(x[i][0], y[0][j]), m.mul(x[i][1], y[1][j]));
            }
        }
        z
    }

    pub fn inv(&self, x: Mat) -> Mat {
        let m = self.model;
        let det = m.sub(m.mul(x[0][0], x[1][1]), m.mul(x[0][1], x[1][0]));
        let di = m.inv(det);
        [
            [m.mul(di, x[1][1]), m.mul(di, m.neg(x[0][1]))],
            [m.mul(di, m.neg(x[1][0])), m.mul(di, x[0][0])],
        ]
    }

    pub fn id(&self) -> Mat {
        [[1, 0], [0, 1]]
    }

    /// Conjugation orbits; returns (orbit id per element, orbit reps).
    pub fn orbits(&self) -> (Vec<usize>, Vec<Mat>) {
        let n = self.elems.len();
        let mut orbit = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if orbit[i] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(self.elems[i]);
            for x in &self.elems {
                let y = self.mul(self.mul(*x, self.elems[i]), self.inv(*x));
                let j = self.index[&y];
                orbit[j] = id;
            }
        }
        (orbit, reps)
    }

    /// Induced character from a subgroup: chi(g) = (1/|H|) * sum over x in G
    /// with x g x^-1 in H of the subgroup character value there.
    pub fn induced_char_value(
        &self,
        g: Mat,
        in_h: &dyn Fn(Mat) -> bool,
        value: &dyn Fn(Mat) -> Result<CycloElem>,
        h_order: u64,
    ) -> Result<CycloElem> {
        let mut acc = CycloElem::zero(1);
        for x in &self.elems {
            let y = self.mul(self.mul(*x, g), self.inv(*x));
            if in_h(y) {
                acc = acc.add(&value(y)?)?;
            }
        }
        Ok(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(h_order as i64))))
    }
}

fn is_upper(m: Mat) -> bool {
    m[1][0] == 0
}

fn is_zn(m: Mat) -> bool {
    m[1][0] == 0 && m[0][0] == m[1][1]
}

/// Value of the Borel character (phi1, phi2) extended trivially over N.
fn borel_value(model: &FqModel, m1: u64, m2: u64, g: Mat) -> Result<CycloElem> {
    let qm1 = model.q - 1;
    let (a, d) = (g[0][0], g[1][1]);
    let e = (m1 * model.dlog_fq(a) + m2 * model.dlog_fq(d)) % qm1;
    Ok(CycloElem::root_of_unity(qm1, e as i64))
}

/// theta-psi on ZN: theta(z) psi(u) for g = z u, with psi the fixed
/// nontrivial character u -> zeta_p^(trace of the top-right entry of u).
fn zn_value(model: &FqModel, theta_exp: u64, g: Mat) -> Result<CycloElem> {
    let q = model.q;
    let a = g[0][0];
    // u = z^-1 g has top-right entry b / a
    let b_over_a = model.mul(g[0][1], model.inv(a));
    let t = model.trace_to_fp(b_over_a);
    let psi = CycloElem::root_of_unity(model.p, t as i64);
    let theta_at_z = CycloElem::root_of_unity(
        q * q - 1,
        (theta_exp * ((q + 1) * model.dlog_fq(a) % (q * q - 1)) % (q * q - 1)) as i64,
    );
    theta_at_z.mul(&psi)
}

/// The embedded torus with its discrete logs.
fn torus_table(model: &FqModel) -> BTreeMap<Mat, u64> {
    let q2m1 = model.q * model.q - 1;
    (0..q2m1).map(|k| (model.torus_matrix(k), k)).collect()
}

/// Brute-force character row for a closed-form label, on the given classes.
pub fn brute_char_row(
    group: &BruteGroup<'_>,
    label: &CharLabel,
    classes: &[ClassDatum],
) -> Result<Vec<CycloElem>> {
    let model = group.model;
    let q = model.q;
    let qm1 = q - 1;
    let q2m1 = q * q - 1;
    let torus = torus_table(model);
    let mut row = Vec::with_capacity(classes.len());
    for c in classes {
        let g = c.rep;
        let v = match label {
            CharLabel::DetTwist(m) => {
                let det = model.sub(
                    model.mul(g[0][0], g[1][1]),
                    model.mul(g[0][1], g[1][0]),
                );
                CycloElem::root_of_unity(qm1, (m * model.dlog_fq(det) % qm1) as i64)
            }
            CharLabel::Steinberg(m) => {
                // Ind_B(phi, phi) minus the det twist
                let ind = group.induced_char_value(
                    g,
                    &is_upper,
                    &|h| borel_value(model, *m, *m, h),
                    (q - 1) * (q - 1) * q,
                )?;
                let det = model.sub(
                    model.mul(g[0][0], g[1][1]),
                    model.mul(g[0][1], g[1][0]),
                );
                let tw = CycloElem::root_of_unity(qm1, (m * model.dlog_fq(det) % qm1) as i64);
                ind.sub(&tw)?
            }
            CharLabel::Principal(m1, m2) => group.induced_char_value(
                g,
                &is_upper,
                &|h| borel_value(model, *m1, *m2, h),
                (q - 1) * (q - 1) * q,
            )?,
            CharLabel::Cuspidal(e) => {
                // Ind_{ZN} theta_psi - Ind_E theta
                let a = group.induced_char_value(
                    g,
                    &is_zn,
                    &|h| zn_value(model, *e, h),
                    (q - 1) * q,
                )?;
                let t = &torus;
                let b = group.induced_char_value(
                    g,
                    &|h| t.contains_key(&h),
                    &|h| {
                        let k = t[&h];
                        Ok(CycloElem::root_of_unity(q2m1, (e * k % q2m1) as i64))
                    },
                    q2m1,
                )?;
                a.sub(&b)?
            }
        };
        row.push(v);
    }
    Ok(row)
}

/// Entry-for-entry comparison of the closed-form table against the
/// brute-force computation. Returns the number of entries compared.
pub fn crosscheck_table(
    model: &FqModel,
    classes: &[ClassDatum],
    table: &[IrrChar],
) -> Result<usize> {
    let group = BruteGroup::new(model)?;
    // class sizes against conjugation orbits
    let (orbit, reps) = group.orbits();
    if reps.len() != classes.len() {
        return Err(Error::VerificationFailed(format!(
            "orbit count {} differs from class count {}",
            reps.len(),
            classes.len()
        )));
    }
    for c in classes {
        let rep_orbit = {
            let idx = group
                .elems
                .iter()
                .position(|&m| m == c.rep)
                .expect("class representative is in the group");
            orbit[idx]
        };
        let size = orbit.iter().filter(|&&o| o == rep_orbit).count() as u64;
        if size != c.size {
            return Err(Error::VerificationFailed(format!(
                "class size mismatch at {:?} {:?}: closed form {}, brute {}",
                c.tag, c.params, c.size, size
            )));
        }
    }
    // values entry for entry
    let mut compared = 0usize;
    for chi in table {
        let brute = brute_char_row(&group, &chi.label, classes)?;
        for (i, (a, b)) in chi.values.iter().zip(brute.iter()).enumerate() {
            if !a.eq_value(b) {
                return Err(Error::VerificationFailed(format!(
                    "character {:?} disagrees with brute force at class {i}",
                    chi.label
                )));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

#[cfg(test)]
mod tests {
    use super::super::{char_table, conj_classes};
    use super::*;

    #[test]
    fn orbit_counts() {
        for q in [2u64, 3, 5] {
            let m = FqModel::new(q).unwrap();
            let g = BruteGroup::new(&m).unwrap();
            assert_eq!(g.elems.len() as u64, (q * q - 1) * (q * q - q));
            let (_, reps) = g.orbits();
            assert_eq!(reps.len() as u64, q * q - 1);
        }
    }

    #[test]
    fn closed_form_matches_brute_q2_q3() {
        for q in [2u64, 3] {
            let m = FqModel::new(q).unwrap();
            let cs = conj_classes(&m).unwrap();
            let t = char_table(&m, &cs).unwrap();
            let n = crosscheck_table(&m, &cs, &t).unwrap();
            assert_eq!(n, ((q * q - 1) * (q * q - 1)) as usize);
        }
    }
}
