//! Characters of GL_2(F_q): the complete ordinary character table.
//!
//! All values are exact cyclotomic numbers. Characters of F_q^x and
//! F_{q^2}^x are addressed by their exponent against the fixed generators
//! g1 and g2 of the field model, so labels are reproducible.

use super::classes::{ClassDatum, ClassTag};
use super::FqModel;
use crate::cyclo::{CycloElem, ModlTarget};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThetaHost {
    /// F_q^x, order q - 1, generator g1.
    Fq,
    /// F_{q^2}^x, order q^2 - 1, generator g2.
    Fq2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThetaWorld {
    /// Values are roots of unity in characteristic zero.
    Char0,
    /// Values lie in F_l-bar; the order of the character is prime to l.
    ModL { l: u64 },
}

/// A character of F_q^x or F_{q^2}^x as finite data: the exponent against
/// the canonical generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharTheta {
    pub q: u64,
    pub host: ThetaHost,
    pub exponent: u64,
    pub world: ThetaWorld,
}

impl CharTheta {
    pub fn new_char0(q: u64, host: ThetaHost, exponent: u64) -> Self {
        let n = match host {
            ThetaHost::Fq => q - 1,
            ThetaHost::Fq2 => q * q - 1,
        };
        CharTheta {
            q,
            host,
            exponent: exponent % n,
            world: ThetaWorld::Char0,
        }
    }

    pub fn new_modl(q: u64, host: ThetaHost, exponent: u64, l: u64) -> Self {
        let n = match host {
            ThetaHost::Fq => q - 1,
            ThetaHost::Fq2 => q * q - 1,
        };
        let m_prime = prime_to_l_part(n, l);
        CharTheta {
            q,
            host,
            exponent: exponent % m_prime,
            world: ThetaWorld::ModL { l },
        }
    }

    pub fn host_order(&self) -> u64 {
        match self.host {
            ThetaHost::Fq => self.q - 1,
            ThetaHost::Fq2 => self.q * self.q - 1,
        }
    }

    /// The modulus of the exponent: the full group order in characteristic
    /// zero, its prime-to-l part mod l.
    pub fn exponent_modulus(&self) -> u64 {
        match self.world {
            ThetaWorld::Char0 => self.host_order(),
            ThetaWorld::ModL { l } => prime_to_l_part(self.host_order(), l),
        }
    }

    /// Characteristic-zero value at generator^k.
    pub fn value_at(&self, k: u64) -> CycloElem {
        match self.world {
            ThetaWorld::Char0 => {
                let n = self.host_order();
                CycloElem::root_of_unity(n, (self.exponent * (k % n) % n) as i64)
            }
            ThetaWorld::ModL { .. } => panic!("mod-l character evaluated in characteristic zero"),
        }
    }

    /// Mod-l value at generator^k, in the target's field.
    pub fn value_at_modl(&self, k: u64, target: &ModlTarget) -> Result<crate::cyclo::FfldElem> {
        let ThetaWorld::ModL { l } = self.world else {
            return Err(Error::InvalidParameter(
                "characteristic-zero character evaluated mod l".to_string(),
            ));
        };
        let m_prime = prime_to_l_part(self.host_order(), l);
        // the canonical reduction of zeta_{host order}: tau of order m'
        let tau = {
            let zeta = CycloElem::root_of_unity(self.host_order(), 1);
            target.reduce(&zeta)?
        };
        Ok(target
            .fld
            .pow(&tau, self.exponent * (k % self.host_order()) % m_prime))
    }

    /// theta^q = theta?
    pub fn is_q_fixed(&self) -> bool {
        match self.host {
            ThetaHost::Fq => true,
            ThetaHost::Fq2 => {
                let n = self.exponent_modulus();
                self.exponent * self.q % n == self.exponent % n
            }
        }
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        let n = self.exponent_modulus();
        n / num::integer::gcd(self.exponent, n)
    }
}

pub fn prime_to_l_part(mut n: u64, l: u64) -> u64 {
    while n % l == 0 {
        n /= l;
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CharLabel {
    /// phi1 o det, phi1 = exponent m against g1.
    DetTwist(u64),
    /// Steinberg twisted by phi1 o det.
    Steinberg(u64),
    /// Ind_B^G (phi1, phi2), exponents m1 < m2.
    Principal(u64, u64),
    /// The cuspidal character attached to theta-tilde of exponent e
    /// (e the minimum of its {e, eq} orbit), theta-tilde^q != theta-tilde.
    Cuspidal(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrChar {
    pub label: CharLabel,
    pub dim: u64,
    /// One value per conjugacy class, in class order.
    pub values: Vec<CycloElem>,
}

/// The cuspidal character of theta-tilde on the given classes:
/// (q-1) theta(z) at central z; -theta(z) on the nontrivial unipotent
/// fiber over z; 0 on split noncentral; -theta(y) - theta^q(y) elliptic.
pub fn cuspidal_char(
    model: &FqModel,
    theta: &CharTheta,
    classes: &[ClassDatum],
) -> Result<IrrChar> {
    if theta.host != ThetaHost::Fq2 || theta.world != ThetaWorld::Char0 {
        return Err(Error::InvalidParameter(
            "cuspidal parameter must be a characteristic-zero character of F_{q^2}^x".to_string(),
        ));
    }
    if theta.is_q_fixed() {
        return Err(Error::InvalidParameter(
            "theta^q = theta is not a valid cuspidal parameter in characteristic zero".to_string(),
        ));
    }
    let q = model.q;
    let e = theta.exponent;
    let values = classes
        .iter()
        .map(|c| -> Result<CycloElem> {
            Ok(match c.tag {
                ClassTag::Central => {
                    let z = theta.value_at((q + 1) * c.params[0]);
                    z.scale(&num::BigRational::from(num::BigInt::from(q as i64 - 1)))
                }
                ClassTag::UnipotentScalar => theta.value_at((q + 1) * c.params[0]).neg(),
                ClassTag::Split => CycloElem::zero(1),
                ClassTag::Elliptic => {
                    let k = c.params[0];
                    theta
                        .value_at(k)
                        .add(&theta.value_at(k * q % (q * q - 1)))?
                        .neg()
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let orbit_min = e.min(e * q % (q * q - 1));
    Ok(IrrChar {
        label: CharLabel::Cuspidal(orbit_min),
        dim: q - 1,
        values,
    })
}

/// The complete ordinary character table: q^2 - 1 pairwise distinct
/// irreducible characters in a fixed label order.
pub fn char_table(model: &FqModel, classes: &[ClassDatum]) -> Result<Vec<IrrChar>> {
    let q = model.q;
    let qm1 = q - 1;
    let q2m1 = q * q - 1;
    let mut out: Vec<IrrChar> = Vec::with_capacity((q * q - 1) as usize);

    // determinant exponent (against g1) per class
    let det_exp: Vec<u64> = classes
        .iter()
        .map(|c| match c.tag {
            ClassTag::Central | ClassTag::UnipotentScalar => 2 * c.params[0] % qm1,
            ClassTag::Split => (c.params[0] + c.params[1]) % qm1,
            ClassTag::Elliptic => c.params[0] % qm1,
        })
        .collect();
    let zeta1 = |e: u64| CycloElem::root_of_unity(qm1, e as i64);

    for m in 0..qm1 {
        let values = det_exp.iter().map(|&d| zeta1(m * d % qm1)).collect();
        out.push(IrrChar {
            label: CharLabel::DetTwist(m),
            dim: 1,
            values,
        });
    }
    for m in 0..qm1 {
        let values = classes
            .iter()
            .zip(det_exp.iter())
            .map(|(c, &d)| match c.tag {
                ClassTag::Central => {
                    zeta1(m * d % qm1).scale(&num::BigRational::from(num::BigInt::from(q as i64)))
                }
                ClassTag::UnipotentScalar => CycloElem::zero(1),
                ClassTag::Split => zeta1(m * d % qm1),
                ClassTag::Elliptic => zeta1(m * d % qm1).neg(),
            })
            .collect();
        out.push(IrrChar {
            label: CharLabel::Steinberg(m),
            dim: q,
            values,
        });
    }
    for m1 in 0..qm1 {
        for m2 in (m1 + 1)..qm1 {
            let values = classes
                .iter()
                .map(|c| -> Result<CycloElem> {
                    Ok(match c.tag {
                        ClassTag::Central => {
                            let i = c.params[0];
                            zeta1((m1 + m2) * i % qm1)
                                .scale(&num::BigRational::from(num::BigInt::from(q as i64 + 1)))
                        }
                        ClassTag::UnipotentScalar => {
                            let i = c.params[0];
                            zeta1((m1 + m2) * i % qm1)
                        }
                        ClassTag::Split => {
                            let (i, j) = (c.params[0], c.params[1]);
                            zeta1((m1 * i + m2 * j) % qm1).add(&zeta1((m1 * j + m2 * i) % qm1))?
                        }
                        ClassTag::Elliptic => CycloElem::zero(1),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(IrrChar {
                label: CharLabel::Principal(m1, m2),
                dim: q + 1,
                values,
            });
        }
    }
    for e in 1..q2m1 {
        if e % (q + 1) == 0 {
            // theta^q = theta exactly when (q+1) | e
            continue;
        }
        if e * q % q2m1 < e {
            continue;
        }
        let theta = CharTheta::new_char0(q, ThetaHost::Fq2, e);
        out.push(cuspidal_char(model, &theta, classes)?);
    }
    debug_assert_eq!(out.len(), (q * q - 1) as usize);
    Ok(out)
}

/// Exact first-orthogonality norm: sum over classes of size * |chi|^2,
/// with complex conjugation realized as the Galois action k -> -1.
pub fn char_norm(chi: &IrrChar, classes: &[ClassDatum]) -> Result<CycloElem> {
    let mut acc = CycloElem::zero(1);
    for (v, c) in chi.values.iter().zip(classes.iter()) {
        let term = v
            .mul(&v.conj())?
            .scale(&num::BigRational::from(num::BigInt::from(c.size as i64)));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Exact inner product of two characters (unnormalized: sum size * a * conj(b)).
pub fn char_inner(a: &IrrChar, b: &IrrChar, classes: &[ClassDatum]) -> Result<CycloElem> {
    let mut acc = CycloElem::zero(1);
    for ((x, y), c) in a.values.iter().zip(b.values.iter()).zip(classes.iter()) {
        let term = x
            .mul(&y.conj())?
            .scale(&num::BigRational::from(num::BigInt::from(c.size as i64)));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Second orthogonality for a pair of class indices: sum over characters of
/// chi(g) * conj(chi(h)); equals |C_G(g)| when g ~ h and 0 otherwise.
pub fn column_inner(table: &[IrrChar], i: usize, j: usize) -> Result<CycloElem> {
    let mut acc = CycloElem::zero(1);
    for chi in table {
        acc = acc.add(&chi.values[i].mul(&chi.values[j].conj())?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::conj_classes;
    use super::*;

    #[test]
    fn q3_dimensions() {
        let m = FqModel::new(3).unwrap();
        let cs = conj_classes(&m).unwrap();
        let t = char_table(&m, &cs).unwrap();
        let mut dims: Vec<u64> = t.iter().map(|c| c.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 3, 3, 4]);
        let sum_sq: u64 = t.iter().map(|c| c.dim * c.dim).sum();
        assert_eq!(sum_sq, 48);
    }

    #[test]
    fn cuspidal_display_values() {
        let m = FqModel::new(3).unwrap();
        let cs = conj_classes(&m).unwrap();
        let theta = CharTheta::new_char0(3, ThetaHost::Fq2, 1); // order 8
        let chi = cuspidal_char(&m, &theta, &cs).unwrap();
        // value at the identity class is q - 1
        let id_idx = cs
            .iter()
            .position(|c| c.tag == ClassTag::Central && c.params == vec![0])
            .unwrap();
        assert_eq!(
            chi.values[id_idx].as_rational().unwrap(),
            num::BigRational::from(num::BigInt::from(2))
        );
        // value at the unipotent fiber over z = 1 is -1
        let zu_idx = cs
            .iter()
            .position(|c| c.tag == ClassTag::UnipotentScalar && c.params == vec![0])
            .unwrap();
        assert_eq!(
            chi.values[zu_idx].as_rational().unwrap(),
            num::BigRational::from(num::BigInt::from(-1))
        );
        // at the elliptic class of g2: -(zeta_8 + zeta_8^3)
        let ell_idx = cs
            .iter()
            .position(|c| c.tag == ClassTag::Elliptic && c.params == vec![1])
            .unwrap();
        let expect = CycloElem::root_of_unity(8, 1)
            .add(&CycloElem::root_of_unity(8, 3))
            .unwrap()
            .neg();
        assert!(chi.values[ell_idx].eq_value(&expect));
        // theta and theta^q give the same row
        let theta_q = CharTheta::new_char0(3, ThetaHost::Fq2, 3);
        let chi_q = cuspidal_char(&m, &theta_q, &cs).unwrap();
        for (a, b) in chi.values.iter().zip(chi_q.values.iter()) {
            assert!(a.eq_value(b));
        }
    }

    #[test]
    fn q_fixed_theta_rejected() {
        let m = FqModel::new(3).unwrap();
        let cs = conj_classes(&m).unwrap();
        let theta = CharTheta::new_char0(3, ThetaHost::Fq2, 4); // 4 = q+1 multiple
        assert!(cuspidal_char(&m, &theta, &cs).is_err());
    }

    #[test]
    fn row_orthogonality_small() {
        for q in [2u64, 3, 4] {
            let m = FqModel::new(q).unwrap();
            let cs = conj_classes(&m).unwrap();
            let t = char_table(&m, &cs).unwrap();
            let g = num::BigRational::from(num::BigInt::from(((q * q - 1) * (q * q - q)) as i64));
            for chi in &t {
                let n = char_norm(chi, &cs).unwrap();
                assert_eq!(n.as_rational().unwrap(), g, "q={q} {:?}", chi.label);
            }
            // distinct rows are orthogonal
            let z = char_inner(&t[0], &t[1], &cs).unwrap();
            assert!(z.is_zero());
        }
    }
}
