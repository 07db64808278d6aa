//! Componentwise minimal polynomials of cyclotomic vectors.

use super::{CycloElem, CycloVec};
use crate::error::Result;

/// The least-degree monic polynomial annihilating the vector componentwise:
/// the product of (t - e) over the distinct entries e. Coefficients are
/// returned ascending, the leading 1 included.
pub fn min_poly(v: &CycloVec) -> Result<Vec<CycloElem>> {
    let m = v.modulus();
    let mut distinct: Vec<CycloElem> = Vec::new();
    for e in v.entries() {
        if !distinct.iter().any(|d| d.eq_value(e)) {
            distinct.push(e.clone());
        }
    }
    // expand prod (t - e_i)
    let mut coeffs = vec![CycloElem::one(m)];
    for e in &distinct {
        let mut next = vec![CycloElem::zero(m); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c)?;
            next[i] = next[i].sub(&c.mul(e)?)?;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// Evaluate a monic polynomial (ascending coefficients) at each entry.
pub fn eval_poly_at(coeffs: &[CycloElem], v: &CycloVec) -> Result<CycloVec> {
    let mut acc = CycloVec::constant(v.labels().to_vec(), CycloElem::zero(1))?;
    for c in coeffs.iter().rev() {
        acc = acc.mul(v)?;
        acc = acc.add(&CycloVec::constant(v.labels().to_vec(), c.clone())?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, e: i64) -> CycloElem {
        CycloElem::root_of_unity(m, e)
    }

    #[test]
    fn constant_vector() {
        let c = z(8, 3);
        let v = CycloVec::constant(vec!["a".into(), "b".into()], c.clone()).unwrap();
        let p = min_poly(&v).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p[1].eq_value(&CycloElem::one(1)));
        assert!(p[0].eq_value(&c.neg()));
    }

    #[test]
    fn cube_root_sum_gives_t_plus_3() {
        // zeta_3 + zeta_3^2 - 2 = -3, so the minimal polynomial is t + 3
        let e = z(3, 1)
            .add(&z(3, 2))
            .unwrap()
            .sub(&CycloElem::from_int(2, 3))
            .unwrap();
        let v = CycloVec::new(vec!["x".into()], vec![e]).unwrap();
        let p = min_poly(&v).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].as_rational().unwrap(), num::BigRational::from(num::BigInt::from(3)));
    }

    #[test]
    fn two_distinct_entries() {
        let a = z(5, 1);
        let b = z(5, 2);
        let v = CycloVec::new(vec!["a".into(), "b".into()], vec![a.clone(), b.clone()]).unwrap();
        let p = min_poly(&v).unwrap();
        assert_eq!(p.len(), 3);
        // evaluates to zero componentwise, exactly
        let ev = eval_poly_at(&p, &v).unwrap();
        assert!(ev.is_zero());
        // and indeed equals (t-a)(t-b)
        assert!(p[0].eq_value(&a.mul(&b).unwrap()));
        assert!(p[1].eq_value(&a.add(&b).unwrap().neg()));
    }
}
