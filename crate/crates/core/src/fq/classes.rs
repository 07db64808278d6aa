//! Conjugacy classes of GL_2(F_q).
//!
//! The q^2 - 1 classes fall into four families: central diag(a, a);
//! non-semisimple [[a, 1], [0, a]]; split diag(a, b) with a != b up to swap;
//! and elliptic classes with eigenvalues y, y^q in F_{q^2} \ F_q, with y
//! and y^q giving the same class. Classes are listed sorted by
//! (tag, parameters), which fixes the output order everywhere downstream.

use super::FqModel;
use crate::error::Result;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ClassTag {
    /// diag(g1^i, g1^i)
    Central,
    /// [[g1^i, 1], [0, g1^i]]
    UnipotentScalar,
    /// diag(g1^i, g1^j), i < j
    Split,
    /// multiplication by g2^k on F_{q^2}, k the minimum of {k, kq mod q^2-1}
    Elliptic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassDatum {
    pub tag: ClassTag,
    /// Exponent data identifying the class (see the tag docs).
    pub params: Vec<u64>,
    pub size: u64,
    /// Representative matrix, row-major F_q codes.
    pub rep: [[u64; 2]; 2],
    /// Multiplicative order of the representative.
    pub order: u64,
}

impl ClassDatum {
    pub fn is_l_regular(&self, l: u64) -> bool {
        self.order % l != 0
    }
}

/// All conjugacy classes of GL_2(F_q), sorted by (tag, params).
pub fn conj_classes(model: &FqModel) -> Result<Vec<ClassDatum>> {
    let q = model.q;
    let qm1 = q - 1;
    let q2m1 = q * q - 1;
    let mut out = Vec::with_capacity((q * q - 1) as usize);

    let ord_fq = |i: u64| -> u64 { qm1 / num::integer::gcd(i % qm1, qm1) };

    for i in 0..qm1 {
        let a = model.pow1(i);
        out.push(ClassDatum {
            tag: ClassTag::Central,
            params: vec![i],
            size: 1,
            rep: [[a, 0], [0, a]],
            order: ord_fq(i),
        });
    }
    for i in 0..qm1 {
        let a = model.pow1(i);
        out.push(ClassDatum {
            tag: ClassTag::UnipotentScalar,
            params: vec![i],
            size: q * q - 1,
            rep: [[a, 1], [0, a]],
            order: model.p * ord_fq(i),
        });
    }
    for i in 0..qm1 {
        for j in (i + 1)..qm1 {
            let a = model.pow1(i);
            let b = model.pow1(j);
            out.push(ClassDatum {
                tag: ClassTag::Split,
                params: vec![i, j],
                size: q * (q + 1),
                rep: [[a, 0], [0, b]],
                order: num::integer::lcm(ord_fq(i), ord_fq(j)),
            });
        }
    }
    for k in 1..q2m1 {
        if k % (q + 1) == 0 {
            continue; // g2^k lies in F_q
        }
        let partner = k * q % q2m1;
        if partner < k {
            continue; // one representative per {k, kq} orbit
        }
        out.push(ClassDatum {
            tag: ClassTag::Elliptic,
            params: vec![k],
            size: q * q - q,
            rep: model.torus_matrix(k),
            order: q2m1 / num::integer::gcd(k, q2m1),
        });
    }
    out.sort_by(|a, b| (a.tag, &a.params).cmp(&(b.tag, &b.params)));
    debug_assert_eq!(out.len(), (q * q - 1) as usize);
    Ok(out)
}

/// Index of the class containing the inverse of the representative of class i.
pub fn inverse_class_index(classes: &[ClassDatum], i: usize, model: &FqModel) -> usize {
    let q = model.q;
    let qm1 = q - 1;
    let q2m1 = q * q - 1;
    let c = &classes[i];
    let want: (ClassTag, Vec<u64>) = match c.tag {
        ClassTag::Central => (ClassTag::Central, vec![(qm1 - c.params[0] % qm1) % qm1]),
        ClassTag::UnipotentScalar => (
            ClassTag::UnipotentScalar,
            vec![(qm1 - c.params[0] % qm1) % qm1],
        ),
        ClassTag::Split => {
            let i1 = (qm1 - c.params[0] % qm1) % qm1;
            let j1 = (qm1 - c.params[1] % qm1) % qm1;
            (ClassTag::Split, vec![i1.min(j1), i1.max(j1)])
        }
        ClassTag::Elliptic => {
            let k1 = (q2m1 - c.params[0] % q2m1) % q2m1;
            let k2 = k1 * q % q2m1;
            (ClassTag::Elliptic, vec![k1.min(k2)])
        }
    };
    classes
        .iter()
        .position(|c| c.tag == want.0 && c.params == want.1)
        .expect("inverse class exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_small() {
        for q in [2u64, 3, 4, 5, 7] {
            let m = FqModel::new(q).unwrap();
            let cs = conj_classes(&m).unwrap();
            assert_eq!(cs.len(), (q * q - 1) as usize, "q = {q}");
            let total: u64 = cs.iter().map(|c| c.size).sum();
            assert_eq!(total, (q * q - 1) * (q * q - q), "class equation, q = {q}");
        }
    }

    #[test]
    fn class_equation_up_to_17() {
        for q in [8u64, 9, 11, 13, 16, 17] {
            let m = FqModel::new(q).unwrap();
            let cs = conj_classes(&m).unwrap();
            assert_eq!(cs.len(), (q * q - 1) as usize);
            let total: u64 = cs.iter().map(|c| c.size).sum();
            assert_eq!(total, (q * q - 1) * (q * q - q));
        }
    }

    #[test]
    fn inverse_classes_are_involutive() {
        let m = FqModel::new(5).unwrap();
        let cs = conj_classes(&m).unwrap();
        for i in 0..cs.len() {
            let j = inverse_class_index(&cs, i, &m);
            assert_eq!(inverse_class_index(&cs, j, &m), i);
            assert_eq!(cs[i].order, cs[j].order);
            assert_eq!(cs[i].size, cs[j].size);
        }
    }
}
