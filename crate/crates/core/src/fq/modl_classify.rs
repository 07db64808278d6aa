//! Mod-l classification of the irreducible representations of GL_2(F_q)
//! and the characteristic-zero lift sets of mod-l characters of F_{q^2}^x.

use super::chars::{prime_to_l_part, CharLabel, CharTheta, IrrChar, ThetaHost, ThetaWorld};
use super::classes::ClassDatum;
use super::{validate_q_l, FqModel};
use crate::cyclo::{inv_mod, FfldElem, ModlTarget};
use crate::error::{Error, Result};
use serde::Serialize;

/// Congruence position of q relative to l.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CongruenceCase {
    /// l does not divide q^2 - 1: reduction is a bijection.
    Generic,
    /// l | q - 1.
    QOne,
    /// l | q + 1.
    QMinusOne,
}

pub fn congruence_case(q: u64, l: u64) -> CongruenceCase {
    if (q - 1) % l == 0 {
        CongruenceCase::QOne
    } else if (q + 1) % l == 0 {
        CongruenceCase::QMinusOne
    } else {
        CongruenceCase::Generic
    }
}

/// The set S_theta of characteristic-zero lifts of a mod-l character theta
/// of F_{q^2}^x with a free q-power orbit, grouped into {lift, lift^q}
/// classes.
#[derive(Clone, Debug, Serialize)]
pub struct LiftSet {
    pub q: u64,
    pub l: u64,
    /// Exponent of theta mod m' = (q^2 - 1) with the l-part removed.
    pub theta_exponent: u64,
    /// Exponent of the Teichmueller lift (order prime to l) mod q^2 - 1.
    pub teich_exponent: u64,
    /// ord_l(q^2 - 1).
    pub n: u32,
    /// All valid lift exponents mod q^2 - 1 (ascending).
    pub lifts: Vec<u64>,
    /// Orbit classes [lift] = {lift, lift * q}; each sorted, reps ascending.
    pub classes: Vec<Vec<u64>>,
    /// Whether theta^q = theta.
    pub q_fixed: bool,
}

impl LiftSet {
    pub fn class_labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| format!("[{}]", c[0])).collect()
    }
}

/// All lifts theta~ of theta with theta~^q != theta~, modulo theta~ ~ theta~^q.
///
/// Fails with `NoValidLift` exactly when theta^q = theta and l does not
/// divide q + 1.
pub fn lift_set(theta: &CharTheta, l: u64) -> Result<LiftSet> {
    let ThetaWorld::ModL { l: tl } = theta.world else {
        return Err(Error::InvalidParameter(
            "lift_set takes a mod-l character".to_string(),
        ));
    };
    if tl != l {
        return Err(Error::InvalidParameter("mismatched l".to_string()));
    }
    if theta.host != ThetaHost::Fq2 {
        return Err(Error::InvalidParameter(
            "lift_set takes a character of F_{q^2}^x".to_string(),
        ));
    }
    let q = theta.q;
    validate_q_l(q, l)?;
    let n_grp = q * q - 1;
    let m_prime = prime_to_l_part(n_grp, l);
    let l_part = n_grp / m_prime;
    let n = {
        let mut n = 0u32;
        let mut t = l_part;
        while t % l == 0 {
            t /= l;
            n += 1;
        }
        n
    };
    let a = theta.exponent % m_prime;
    let q_fixed = a * q % m_prime == a;

    // Teichmueller exponent: e == a mod m', e == 0 mod l^n
    let teich = if m_prime == 1 {
        0
    } else {
        // e = a * l_part * inv(l_part mod m') mod n_grp
        let inv = inv_mod(l_part % m_prime, m_prime);
        a * l_part % n_grp * inv % n_grp
    };

    let mut lifts = Vec::new();
    for j in 0..l_part {
        let e = (teich + j * m_prime) % n_grp;
        // valid lift: theta~^q != theta~
        if e * q % n_grp != e {
            lifts.push(e);
        }
    }
    lifts.sort_unstable();
    if lifts.is_empty() {
        return Err(Error::NoValidLift);
    }
    // orbit classes under e -> eq (staying inside the lift set when q-fixed)
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for &e in &lifts {
        if used.contains(&e) {
            continue;
        }
        let partner = e * q % n_grp;
        if lifts.contains(&partner) && partner != e {
            used.insert(e);
            used.insert(partner);
            classes.push(vec![e.min(partner), e.max(partner)]);
        } else {
            used.insert(e);
            classes.push(vec![e]);
        }
    }
    classes.sort();
    Ok(LiftSet {
        q,
        l,
        theta_exponent: a,
        teich_exponent: teich,
        n,
        lifts,
        classes,
        q_fixed,
    })
}

/// A mod-l irreducible, by parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModlIrrLabel {
    /// phi1 o det: exponent mod (q-1) with l-part removed.
    DetTwist(u64),
    /// Steinberg twist (absent when l | q + 1).
    SteinbergTwist(u64),
    /// Irreducible principal series, exponents m1 < m2 of mod-l characters.
    Principal(u64, u64),
    /// pi_theta: theta exponent is the minimum of its {a, aq} orbit mod m'.
    Cuspidal {
        theta: u64,
        supercuspidal: bool,
        /// Lift exponents per S_theta class (class representatives).
        lift_classes: Vec<Vec<u64>>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub q: u64,
    pub l: u64,
    pub case: CongruenceCase,
    pub labels: Vec<ModlIrrLabel>,
    /// The Jordan-Hoelder statement for Ind_B phi with phi1 = phi2, when it
    /// degenerates.
    pub principal_degeneration: Option<String>,
    pub l_regular_class_count: usize,
}

/// The mod-l irreducibles of GL_2(F_q), with lift data for the cuspidals.
pub fn modl_classify(q: u64, l: u64) -> Result<ClassificationReport> {
    validate_q_l(q, l)?;
    let model = FqModel::new(q)?;
    let classes = super::conj_classes(&model)?;
    let case = congruence_case(q, l);
    let m1 = prime_to_l_part(q - 1, l); // mod-l characters of F_q^x
    let m2 = prime_to_l_part(q * q - 1, l); // of F_{q^2}^x
    let mut labels = Vec::new();
    for m in 0..m1 {
        labels.push(ModlIrrLabel::DetTwist(m));
    }
    if case != CongruenceCase::QMinusOne {
        for m in 0..m1 {
            labels.push(ModlIrrLabel::SteinbergTwist(m));
        }
    }
    for a in 0..m1 {
        for b in (a + 1)..m1 {
            labels.push(ModlIrrLabel::Principal(a, b));
        }
    }
    // cuspidals pi_theta: theta^q != theta always; theta^q = theta only in
    // the q = -1 case (cuspidal but not supercuspidal)
    let mut seen = std::collections::BTreeSet::new();
    for a in 0..m2 {
        if seen.contains(&a) {
            continue;
        }
        let partner = a * q % m2;
        seen.insert(a);
        seen.insert(partner);
        let theta = CharTheta::new_modl(q, ThetaHost::Fq2, a, l);
        let q_fixed = partner == a;
        if q_fixed && case != CongruenceCase::QMinusOne {
            continue; // no valid lift; these theta give nothing new
        }
        let lifts = lift_set(&theta, l)?;
        labels.push(ModlIrrLabel::Cuspidal {
            theta: a.min(partner),
            supercuspidal: !q_fixed,
            lift_classes: lifts.classes,
        });
    }
    let principal_degeneration = match case {
        CongruenceCase::QOne => Some(
            "phi1 = phi2: Ind splits as a direct sum of the character phi1 o det and a Steinberg twist"
                .to_string(),
        ),
        CongruenceCase::QMinusOne => Some(
            "phi1 = phi2: the constituents of Ind are two copies of phi1 o det and the cuspidal pi_theta, theta = phi1 o norm"
                .to_string(),
        ),
        CongruenceCase::Generic => None,
    };
    let l_regular_class_count = classes.iter().filter(|c| c.is_l_regular(l)).count();
    Ok(ClassificationReport {
        q,
        l,
        case,
        labels,
        principal_degeneration,
        l_regular_class_count,
    })
}

/// Reduce a characteristic-zero character row on the l-regular classes.
/// For cuspidal rows the answer is independent of the chosen lift in
/// S_theta; callers verify this where it matters.
pub fn brauer_reduce(
    chi: &IrrChar,
    classes: &[ClassDatum],
    target: &ModlTarget,
) -> Result<Vec<FfldElem>> {
    let l = target.l;
    let mut out = Vec::new();
    for (v, c) in chi.values.iter().zip(classes.iter()) {
        if !c.is_l_regular(l) {
            continue;
        }
        if !v.is_l_integral(l) {
            return Err(Error::NotLIntegral(l));
        }
        out.push(target.reduce(v)?);
    }
    Ok(out)
}

/// Helper for tests and the verify suite: the mod-l Brauer character rows
/// of the classification, as reductions of chosen characteristic-zero rows.
pub fn classification_brauer_rows(
    model: &FqModel,
    classes: &[ClassDatum],
    report: &ClassificationReport,
    target: &ModlTarget,
) -> Result<Vec<Vec<FfldElem>>> {
    let q = model.q;
    let l = report.l;
    let table = super::char_table(model, classes)?;
    let find = |label: &CharLabel| -> &IrrChar {
        table
            .iter()
            .find(|c| &c.label == label)
            .expect("label present in characteristic zero")
    };
    let m1 = prime_to_l_part(q - 1, l);
    let lift1 = |m: u64| -> u64 {
        // Teichmueller lift exponent of a mod-l character of F_q^x
        if m1 == 1 {
            return 0;
        }
        let lp = (q - 1) / m1;
        let inv = inv_mod(lp % m1, m1);
        m % m1 * lp % (q - 1) * inv % (q - 1)
    };
    let mut rows = Vec::new();
    for lab in &report.labels {
        let row = match lab {
            ModlIrrLabel::DetTwist(m) => {
                brauer_reduce(find(&CharLabel::DetTwist(lift1(*m))), classes, target)?
            }
            ModlIrrLabel::SteinbergTwist(m) => {
                brauer_reduce(find(&CharLabel::Steinberg(lift1(*m))), classes, target)?
            }
            ModlIrrLabel::Principal(a, b) => {
                let (ea, eb) = (lift1(*a), lift1(*b));
                let (ea, eb) = (ea.min(eb), ea.max(eb));
                brauer_reduce(find(&CharLabel::Principal(ea, eb)), classes, target)?
            }
            ModlIrrLabel::Cuspidal { theta, .. } => {
                let th = CharTheta::new_modl(q, ThetaHost::Fq2, *theta, l);
                let lifts = lift_set(&th, l)?;
                let e = lifts.lifts[0];
                let orbit = e.min(e * q % (q * q - 1));
                brauer_reduce(find(&CharLabel::Cuspidal(orbit)), classes, target)?
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_counts_5_3() {
        // theta != theta^q: 3 lifts, 3 classes
        let th = CharTheta::new_modl(5, ThetaHost::Fq2, 1, 3);
        let s = lift_set(&th, 3).unwrap();
        assert!(!s.q_fixed);
        assert_eq!(s.lifts.len(), 3);
        assert_eq!(s.classes.len(), 3);
        assert_eq!(s.n, 1);
        // theta = theta^q: 2 lifts, 1 class
        let th = CharTheta::new_modl(5, ThetaHost::Fq2, 2, 3);
        let s = lift_set(&th, 3).unwrap();
        assert!(s.q_fixed);
        assert_eq!(s.lifts.len(), 2);
        assert_eq!(s.classes.len(), 1);
    }

    #[test]
    fn lift_counts_17_3() {
        let th = CharTheta::new_modl(17, ThetaHost::Fq2, 2, 3);
        let s = lift_set(&th, 3).unwrap();
        assert!(s.q_fixed);
        assert_eq!(s.n, 2);
        assert_eq!(s.lifts.len(), 8);
        assert_eq!(s.classes.len(), 4);
    }

    #[test]
    fn no_valid_lift() {
        // (q, l) = (7, 3): q = 1 mod 3, theta^q = theta has no valid lift
        let th = CharTheta::new_modl(7, ThetaHost::Fq2, 0, 3);
        assert!(matches!(lift_set(&th, 3), Err(Error::NoValidLift)));
    }

    #[test]
    fn classification_counts_match_brauer() {
        for (q, l) in [(5u64, 3u64), (7, 3), (3, 7), (4, 3), (2, 3), (5, 7)] {
            let r = modl_classify(q, l).unwrap();
            assert_eq!(
                r.labels.len(),
                r.l_regular_class_count,
                "(q, l) = ({q}, {l})"
            );
        }
    }

    #[test]
    fn q_minus_one_flags() {
        let r = modl_classify(5, 3).unwrap();
        assert_eq!(r.case, CongruenceCase::QMinusOne);
        // no Steinberg twists survive as irreducibles
        assert!(r
            .labels
            .iter()
            .all(|l| !matches!(l, ModlIrrLabel::SteinbergTwist(_))));
        // theta = theta^q cuspidals are flagged non-supercuspidal
        let non_sc: Vec<_> = r
            .labels
            .iter()
            .filter(|l| matches!(l, ModlIrrLabel::Cuspidal { supercuspidal: false, .. }))
            .collect();
        assert_eq!(non_sc.len(), 4);
        let sc: Vec<_> = r
            .labels
            .iter()
            .filter(|l| matches!(l, ModlIrrLabel::Cuspidal { supercuspidal: true, .. }))
            .collect();
        assert_eq!(sc.len(), 2);
    }

    #[test]
    fn q_one_split_statement() {
        let r = modl_classify(7, 3).unwrap();
        assert_eq!(r.case, CongruenceCase::QOne);
        assert!(r.principal_degeneration.as_deref().unwrap().contains("direct sum"));
        assert!(r
            .labels
            .iter()
            .any(|l| matches!(l, ModlIrrLabel::SteinbergTwist(_))));
    }
}
