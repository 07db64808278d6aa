//! Finitely presented commutative rings over the Witt-vector base, the
//! output form of every universal deformation ring computed here.
//!
//! A presentation is a list of named variables (each either a power-series
//! variable, sent into the maximal ideal, or a torsion unit variable, sent
//! to a root of unity congruent to 1) together with polynomial relations.
//! Presentations are compared through a declared normal form, never by
//! string equality of the inputs.

use crate::coeff::LocalRing;
use crate::cyclo::{CycloElem, FfldElem, ModlTarget};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// How a variable maps under points and tangent computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum VarKind {
    /// Sent to the maximal ideal (residue 0); free unless a relation cuts it.
    PowerSeries,
    /// A torsion unit congruent to 1 (residue 1).
    UnitGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarSpec {
    pub name: String,
    pub kind: VarKind,
}

/// A polynomial in the presentation variables with cyclotomic coefficients.
/// Terms are keyed by exponent vectors, kept sorted for determinism.
#[derive(Clone, Debug, Serialize)]
pub struct MultiPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, CycloElem>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: CycloElem) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exps) {
            None => {
                self.terms.insert(exps, c);
            }
            Some(old) => {
                let s = old.add(&c).expect("coefficient addition");
                if !s.is_zero() {
                    self.terms.insert(exps, s);
                }
            }
        }
    }

    /// Univariate polynomial in variable `var` from ascending coefficients.
    pub fn from_univariate(nvars: usize, var: usize, coeffs: &[CycloElem]) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0u32; nvars];
            e[var] = i as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    /// The variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for exps in self.terms.keys() {
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter_map(|(i, &u)| if u { Some(i) } else { None })
            .collect()
    }

    /// Evaluate over a finite local ring, with coefficients reduced there.
    pub fn eval_in<R: LocalRing>(&self, ring: &R, point: &[R::El]) -> Result<R::El> {
        let mut acc = ring.zero();
        for (exps, c) in &self.terms {
            let mut t = ring.reduce_cyclo(c)?;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t = ring.mul(&t, &ring.pow(&point[i], e as u64));
                }
            }
            acc = ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (exps, c) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut ne = exps.clone();
            ne[var] = e - 1;
            let factor = CycloElem::from_int(e as i64, 1);
            out.add_term(ne, c.mul(&factor).expect("scalar multiply"));
        }
        out
    }

    fn normal_string(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (exps, c) in &self.terms {
            parts.push(format!("{exps:?}:{c:?}"));
        }
        parts.join("+")
    }
}

/// Structural classification of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PresKind {
    TraceSubalgebra,
    CharacterGroupRing,
    PowerSeriesModQ,
    Mixed,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingPresentation {
    /// The Witt base W(F_{l^d}), carried as the reduction target.
    pub base: ModlTarget,
    pub kind: PresKind,
    pub vars: Vec<VarSpec>,
    pub relations: Vec<MultiPoly>,
}

impl RingPresentation {
    pub fn new(base: ModlTarget, kind: PresKind, vars: Vec<VarSpec>, relations: Vec<MultiPoly>) -> Self {
        for r in &relations {
            assert_eq!(r.nvars, vars.len());
        }
        RingPresentation {
            base,
            kind,
            vars,
            relations,
        }
    }

    /// The residue of each variable at the closed point.
    fn residue_point(&self) -> Vec<FfldElem> {
        self.vars
            .iter()
            .map(|v| match v.kind {
                VarKind::PowerSeries => self.base.fld.zero(),
                VarKind::UnitGroup => self.base.fld.one(),
            })
            .collect()
    }

    /// Dimension over the residue field of the dual-number points fixing the
    /// closed point: #vars - rank of the Jacobian at the residue point.
    pub fn tangent_dim(&self) -> Result<usize> {
        let fld = &self.base.fld;
        let pt = self.residue_point();
        // relations must vanish at the closed point
        for r in &self.relations {
            let v = eval_mod_l(r, &self.base, &pt)?;
            if !fld.is_zero(&v) {
                return Err(Error::VerificationFailed(
                    "relation does not vanish at the closed point".to_string(),
                ));
            }
        }
        // Jacobian rows = relations, columns = variables
        let mut rows: Vec<Vec<FfldElem>> = Vec::new();
        for r in &self.relations {
            let mut row = Vec::with_capacity(self.vars.len());
            for j in 0..self.vars.len() {
                row.push(eval_mod_l(&r.derivative(j), &self.base, &pt)?);
            }
            rows.push(row);
        }
        let rank = ffld_rank(fld, rows);
        Ok(self.vars.len() - rank)
    }

    /// Enumerate the A-points over a finite local coefficient ring that
    /// reduce to the closed point. Returns assignments in variable order.
    pub fn points<R: LocalRing>(&self, ring: &R) -> Result<Vec<Vec<R::El>>> {
        // per-variable candidates
        let mut cands: Vec<Vec<R::El>> = Vec::new();
        for v in &self.vars {
            match v.kind {
                VarKind::PowerSeries => cands.push(ring.maximal_ideal()),
                VarKind::UnitGroup => cands.push(ring.principal_units()),
            }
        }
        // relations touching a single variable filter that variable directly
        let mut multi_rel: Vec<&MultiPoly> = Vec::new();
        for r in &self.relations {
            let sup = r.support();
            if sup.len() == 1 {
                let j = sup[0];
                let kept: Vec<R::El> = cands[j]
                    .iter()
                    .filter(|x| {
                        let mut pt: Vec<R::El> = self
                            .vars
                            .iter()
                            .map(|_| ring.zero())
                            .collect();
                        pt[j] = (*x).clone();
                        match r.eval_in(ring, &pt) {
                            Ok(v) => v == ring.zero(),
                            Err(_) => false,
                        }
                    })
                    .cloned()
                    .collect();
                cands[j] = kept;
            } else if !sup.is_empty() {
                multi_rel.push(r);
            } else {
                // constant relation: must be zero
                let v = r.eval_in(ring, &vec![ring.zero(); self.vars.len()])?;
                if v != ring.zero() {
                    return Ok(vec![]);
                }
            }
        }
        // cross product, filtering any genuinely multivariate relations
        let mut points: Vec<Vec<R::El>> = vec![vec![]];
        for c in &cands {
            let mut next = Vec::with_capacity(points.len() * c.len());
            for p in &points {
                for x in c {
                    let mut q = p.clone();
                    q.push(x.clone());
                    next.push(q);
                }
            }
            points = next;
        }
        if !multi_rel.is_empty() {
            points.retain(|p| {
                multi_rel
                    .iter()
                    .all(|r| matches!(r.eval_in(ring, p), Ok(v) if v == ring.zero()))
            });
        }
        Ok(points)
    }

    /// Count of characteristic-zero points in the torsion directions, with
    /// the number of free (unconstrained) power-series variables alongside.
    pub fn char0_points(&self) -> Result<(u64, usize)> {
        let mut torsion = 1u64;
        let mut free = 0usize;
        let mut constrained: BTreeMap<usize, u64> = BTreeMap::new();
        for r in &self.relations {
            let sup = r.support();
            if sup.len() == 1 {
                // number of roots = degree (certified elsewhere: the relations
                // arising here are separable with integral roots)
                let j = sup[0];
                let deg = r
                    .terms
                    .keys()
                    .map(|e| e[j])
                    .max()
                    .unwrap_or(0) as u64;
                let entry = constrained.entry(j).or_insert(u64::MAX);
                *entry = (*entry).min(deg);
            }
        }
        for (j, v) in self.vars.iter().enumerate() {
            match constrained.get(&j) {
                Some(&deg) => torsion = torsion.saturating_mul(deg),
                None => match v.kind {
                    VarKind::PowerSeries => free += 1,
                    VarKind::UnitGroup => {
                        return Err(Error::VerificationFailed(format!(
                            "unit variable {} has no torsion relation",
                            v.name
                        )))
                    }
                },
            }
        }
        Ok((torsion, free))
    }

    /// The declared normal form: canonical textual form of sorted variable
    /// specs and monic-sorted relations.
    pub fn normal_form(&self) -> String {
        let mut vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{}:{:?}", v.name, v.kind))
            .collect();
        vars.sort();
        let mut rels: Vec<String> = self.relations.iter().map(|r| r.normal_string()).collect();
        rels.sort();
        format!("base=W(F_{}^{});vars=[{}];rels=[{}]", self.base.l, self.base.d, vars.join(","), rels.join(";"))
    }
}

fn eval_mod_l(p: &MultiPoly, target: &ModlTarget, pt: &[FfldElem]) -> Result<FfldElem> {
    let fld = &target.fld;
    let mut acc = fld.zero();
    for (exps, c) in &p.terms {
        let mut t = target.reduce(c)?;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                t = fld.mul(&t, &fld.pow(&pt[i], e as u64));
            }
        }
        acc = fld.add(&acc, &t);
    }
    Ok(acc)
}

fn ffld_rank(fld: &crate::cyclo::Ffld, mut rows: Vec<Vec<FfldElem>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0usize;
    for col in 0..ncols {
        let mut piv = None;
        for (i, r) in rows.iter().enumerate().skip(rank) {
            if !fld.is_zero(&r[col]) {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        rows.swap(rank, p);
        let inv = fld.inv(&rows[rank][col]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = fld.mul(x, &inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && !fld.is_zero(&r[col]) {
                let f = r[col].clone();
                for (x, pv) in r.iter_mut().zip(pivot_row.iter()) {
                    let t = fld.mul(&f, pv);
                    *x = fld.sub(x, &t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Convenience: the presentation W[[t]][zeta]/(zeta^(l^n) - 1) of the
/// universal deformation ring of a character, with the unramified direction
/// t and the l-part torsion direction zeta.
pub fn char_group_presentation(base: ModlTarget, n: u32) -> RingPresentation {
    let l = base.l;
    let mut vars = vec![VarSpec {
        name: "t".to_string(),
        kind: VarKind::PowerSeries,
    }];
    let mut relations = Vec::new();
    if n > 0 {
        vars.push(VarSpec {
            name: "zeta".to_string(),
            kind: VarKind::UnitGroup,
        });
        let ln = l.pow(n);
        let mut coeffs = vec![CycloElem::zero(1); ln as usize + 1];
        coeffs[0] = CycloElem::from_int(-1, 1);
        coeffs[ln as usize] = CycloElem::one(1);
        relations.push(MultiPoly::from_univariate(2, 1, &coeffs));
    }
    RingPresentation::new(base, PresKind::CharacterGroupRing, vars, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{DualNumbers, GaloisRing};

    fn target3() -> ModlTarget {
        ModlTarget::new(8, 3).unwrap()
    }

    fn t_plus_3(base: &ModlTarget) -> RingPresentation {
        let coeffs = vec![CycloElem::from_int(3, 1), CycloElem::one(1)];
        RingPresentation::new(
            base.clone(),
            PresKind::PowerSeriesModQ,
            vec![VarSpec {
                name: "t".into(),
                kind: VarKind::PowerSeries,
            }],
            vec![MultiPoly::from_univariate(1, 0, &coeffs)],
        )
    }

    #[test]
    fn tangent_dims_of_reference_rings() {
        let base = target3();
        // W[z]/(z^3 - 1) at l = 3: tangent dimension 1
        let zr = {
            let mut c = vec![CycloElem::zero(1); 4];
            c[0] = CycloElem::from_int(-1, 1);
            c[3] = CycloElem::one(1);
            RingPresentation::new(
                base.clone(),
                PresKind::CharacterGroupRing,
                vec![VarSpec {
                    name: "z".into(),
                    kind: VarKind::UnitGroup,
                }],
                vec![MultiPoly::from_univariate(1, 0, &c)],
            )
        };
        assert_eq!(zr.tangent_dim().unwrap(), 1);
        // W[[t]]/(t+3): the only dual-number point is t = 0, tangent dim 0
        assert_eq!(t_plus_3(&base).tangent_dim().unwrap(), 0);
        // W[[x,t]]/(t+3): the free x direction survives
        let mixed = {
            let coeffs = vec![CycloElem::from_int(3, 1), CycloElem::one(1)];
            RingPresentation::new(
                base.clone(),
                PresKind::Mixed,
                vec![
                    VarSpec {
                        name: "x".into(),
                        kind: VarKind::PowerSeries,
                    },
                    VarSpec {
                        name: "t".into(),
                        kind: VarKind::PowerSeries,
                    },
                ],
                vec![MultiPoly::from_univariate(2, 1, &coeffs)],
            )
        };
        assert_eq!(mixed.tangent_dim().unwrap(), 1);
    }

    #[test]
    fn point_counts_match_direct_enumeration() {
        let base = target3();
        let pres = char_group_presentation(base.clone(), 1);
        // over the dual numbers: t ranges over the eps-line (9 elements of k),
        // zeta over 1 + eps*k since (1 + eps c)^3 = 1 always; 9 * 9 points,
        // consistent with tangent dimension 2
        let dn = DualNumbers::new(base.fld.clone());
        let pts = pres.points(&dn).unwrap();
        assert_eq!(pts.len(), 81);
        assert_eq!(pres.tangent_dim().unwrap(), 2);
        // over W/l^2 = GR(9,2): |m| = 81 for t, zeta^3 = 1 has 81 solutions
        let gr = GaloisRing::new(&base, 2).unwrap();
        let pts = pres.points(&gr).unwrap();
        let torsion = gr.roots_of_unity(3).len();
        let mi = gr.maximal_ideal().len();
        assert_eq!(pts.len(), torsion * mi);
        // characteristic zero: 3 torsion points and one free direction
        assert_eq!(pres.char0_points().unwrap(), (3, 1));
    }

    #[test]
    fn normal_form_distinguishes() {
        let base = target3();
        let a = char_group_presentation(base.clone(), 1);
        let b = char_group_presentation(base.clone(), 0);
        assert_ne!(a.normal_form(), b.normal_form());
        assert_eq!(a.normal_form(), char_group_presentation(base, 1).normal_form());
    }
}
