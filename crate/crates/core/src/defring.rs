//! Universal deformation rings of mod-l cuspidal representations pi_theta
//! of GL_2(F_q): the trace-generated subalgebra, its integrality and
//! center-image conditions, the level-0 equivalence with the deformation
//! ring of theta, and the power-series presentation in the norm-inflated
//! (theta^q = theta) case.
//!
//! The Witt coefficients W(k), k = F_{l^d}, are realized inside Q(zeta_M)
//! as the subring generated by the Teichmueller roots of unity of order
//! M' = prime-to-l part of q^2 - 1; reduction of zeta_{M'} generates k, so
//! Z_(l)[zeta_{M'}] is a global model of W(k) and membership in its spans
//! is checked exactly by l-local lattice algebra.

use crate::cyclo::{
    euler_phi, lattice_member, lattice_saturate, min_poly, CycloElem, CycloVec, LLattice,
    ModlTarget, SaturationOutcome,
};
use crate::error::{Error, Result};
use crate::fq::{
    conj_classes, lift_set, validate_q_l, CharTheta, ClassDatum, ClassTag, FqModel, LiftSet,
    ThetaHost,
};
use crate::presentation::{MultiPoly, PresKind, RingPresentation, VarKind, VarSpec};
use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

/// Result of a single verification step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TriState {
    Verified,
    Failed { witness: String },
    Skipped { reason: String },
}

impl TriState {
    pub fn is_verified(&self) -> bool {
        matches!(self, TriState::Verified)
    }
}

/// Which congruence shape the cuspidal parameter has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CuspCase {
    /// theta^q != theta.
    Regular,
    /// theta^q = theta (forces q = -1 mod l).
    NormInflated,
}

/// The trace vectors of the family of characteristic-zero lifts of
/// pi_theta, indexed by the classes of S_theta.
pub struct TraceFamily {
    pub q: u64,
    pub l: u64,
    pub model: FqModel,
    pub theta: CharTheta,
    pub lifts: LiftSet,
    pub labels: Vec<String>,
    pub classes: Vec<ClassDatum>,
    /// x vector per conjugacy class, aligned with `classes`.
    pub x_by_class: Vec<CycloVec>,
    /// y vector per torus exponent k = 0 .. q^2 - 2.
    pub y_by_exponent: Vec<CycloVec>,
}

impl TraceFamily {
    pub fn case(&self) -> CuspCase {
        if self.lifts.q_fixed {
            CuspCase::NormInflated
        } else {
            CuspCase::Regular
        }
    }

    /// The scalar generators realizing the Witt coefficients: the
    /// Teichmueller root of order M'.
    pub fn witt_scalars(&self) -> Vec<CycloElem> {
        let m_prime = crate::fq::prime_to_l_part(self.q * self.q - 1, self.l);
        if m_prime <= 1 {
            vec![]
        } else {
            vec![CycloElem::root_of_unity(m_prime, 1)]
        }
    }

    /// Z-rank of the scalar subring's lattice, for Witt-rank reporting.
    pub fn scalar_rank(&self) -> usize {
        let m_prime = crate::fq::prime_to_l_part(self.q * self.q - 1, self.l);
        euler_phi(m_prime) as usize
    }

    /// The designated generator of the pro-l part of the torus:
    /// sigma = g2^((q^2-1)/l^n).
    pub fn pro_l_generator_exponent(&self) -> u64 {
        let n_grp = self.q * self.q - 1;
        let l_part = n_grp / crate::fq::prime_to_l_part(n_grp, self.l);
        n_grp / l_part
    }

    /// The trace value vector at an arbitrary torus exponent, expressed in
    /// terms of x vectors: -x at elliptic classes, (2/(q-1)) x at central.
    fn theta_pair_vector(&self, k: u64) -> Result<CycloVec> {
        let q = self.q;
        let n = q * q - 1;
        let k = k % n;
        if k % (q + 1) == 0 {
            // central: g2^k = g1^(k/(q+1))
            let i = (k / (q + 1)) % (q - 1);
            let idx = self
                .classes
                .iter()
                .position(|c| c.tag == ClassTag::Central && c.params == vec![i])
                .expect("central class");
            Ok(self.x_by_class[idx]
                .scale_rat(&BigRational::new(BigInt::from(2), BigInt::from(q as i64 - 1))))
        } else {
            let rep = k.min(k * q % n);
            let idx = self
                .classes
                .iter()
                .position(|c| c.tag == ClassTag::Elliptic && c.params == vec![rep])
                .expect("elliptic class");
            Ok(self.x_by_class[idx].scale_rat(&BigRational::from(BigInt::from(-1))))
        }
    }
}

/// Build the x and y vectors of the lift family of pi_theta.
pub fn trace_family(q: u64, l: u64, theta_exponent: u64) -> Result<TraceFamily> {
    validate_q_l(q, l)?;
    let model = FqModel::new(q)?;
    let theta = CharTheta::new_modl(q, ThetaHost::Fq2, theta_exponent, l);
    let lifts = lift_set(&theta, l)?;
    let classes = conj_classes(&model)?;
    let labels = lifts.class_labels();
    let n = q * q - 1;
    let zeta = |e: u64| CycloElem::root_of_unity(n, (e % n) as i64);

    let x_of = |class: &ClassDatum, e: u64| -> Result<CycloElem> {
        Ok(match class.tag {
            ClassTag::Central => zeta(e * ((q + 1) * class.params[0] % n))
                .scale(&BigRational::from(BigInt::from(q as i64 - 1))),
            ClassTag::UnipotentScalar => zeta(e * ((q + 1) * class.params[0] % n)).neg(),
            ClassTag::Split => CycloElem::zero(1),
            ClassTag::Elliptic => {
                let k = class.params[0];
                zeta(e * k % n).add(&zeta(e * (k * q % n) % n))?.neg()
            }
        })
    };

    let mut x_by_class = Vec::with_capacity(classes.len());
    for c in &classes {
        let entries = lifts
            .classes
            .iter()
            .map(|cl| x_of(c, cl[0]))
            .collect::<Result<Vec<_>>>()?;
        // well-definedness on orbit classes: both members give the same row
        for (j, cl) in lifts.classes.iter().enumerate() {
            if cl.len() == 2 {
                let other = x_of(c, cl[1])?;
                if !entries[j].eq_value(&other) {
                    return Err(Error::VerificationFailed(
                        "x value differs across a lift orbit".to_string(),
                    ));
                }
            }
        }
        x_by_class.push(CycloVec::new(labels.clone(), entries)?);
    }

    let y_of = |k: u64, e: u64| -> Result<CycloElem> {
        if lifts.q_fixed {
            zeta(e * k % n).add(&zeta(e * (k * q % n) % n))
        } else {
            Ok(zeta(e * k % n))
        }
    };
    let mut y_by_exponent = Vec::with_capacity(n as usize);
    for k in 0..n {
        let entries = lifts
            .classes
            .iter()
            .map(|cl| y_of(k, cl[0]))
            .collect::<Result<Vec<_>>>()?;
        y_by_exponent.push(CycloVec::new(labels.clone(), entries)?);
    }

    Ok(TraceFamily {
        q,
        l,
        model,
        theta,
        lifts,
        labels,
        classes,
        x_by_class,
        y_by_exponent,
    })
}

/// Integrality of the projector onto the lift family: every coefficient of
/// e_pi = sum over S_theta classes of (dim/|G|) sum_g tr(g^-1) g must be
/// l-integral. Returns the witness class on failure.
pub fn idempotent_check(family: &TraceFamily) -> Result<TriState> {
    let q = family.q;
    let l = family.l;
    let g_order = BigInt::from(((q * q - 1) * (q * q - q)) as i64);
    let dim = BigInt::from(q as i64 - 1);
    let scale = BigRational::new(dim, g_order);
    for (i, c) in family.classes.iter().enumerate() {
        let inv_idx = crate::fq::inverse_class_index(&family.classes, i, &family.model);
        // sum over S_theta classes of the trace at the inverse class
        let mut acc = CycloElem::zero(1);
        for v in family.x_by_class[inv_idx].entries() {
            acc = acc.add(v)?;
        }
        let coeff = acc.scale(&scale);
        if !coeff.is_l_integral(l) {
            return Ok(TriState::Failed {
                witness: format!(
                    "coefficient at class {:?} {:?} is not {l}-integral: {:?}",
                    c.tag, c.params, coeff
                ),
            });
        }
    }
    Ok(TriState::Verified)
}

/// The default saturation cap: twice the index-set size, floored to allow
/// the scalar subring to close up at small index sizes.
pub fn default_cap(family: &TraceFamily) -> usize {
    (2 * family.labels.len()).max(euler_phi(family.q * family.q - 1) as usize)
}

/// Saturate the Witt-span of the class-sum action vectors
/// z_c = |C| tr(c) / (q - 1) and check that every x vector lies inside.
pub fn center_image_check(family: &TraceFamily, cap: usize) -> Result<TriState> {
    let q = family.q;
    let z_vectors: Vec<CycloVec> = family
        .classes
        .iter()
        .zip(family.x_by_class.iter())
        .map(|(c, x)| {
            x.scale_rat(&BigRational::new(
                BigInt::from(c.size as i64),
                BigInt::from(q as i64 - 1),
            ))
        })
        .collect();
    let sat = lattice_saturate(&z_vectors, &family.witt_scalars(), cap, family.l)?;
    for (c, x) in family.classes.iter().zip(family.x_by_class.iter()) {
        if !lattice_member(x, &sat)? {
            return Ok(TriState::Failed {
                witness: format!(
                    "x at class {:?} {:?} is outside the center-image span",
                    c.tag, c.params
                ),
            });
        }
    }
    Ok(TriState::Verified)
}

/// The stabilized Witt-algebra lattice generated by the x vectors, with the
/// ring presentation extracted from the designated generator.
pub struct TraceSubalgebra {
    pub saturation: SaturationOutcome,
    pub presentation: RingPresentation,
    pub scalar_rank: usize,
    /// rank over the Witt coefficients, when the lattice is free.
    pub witt_rank: Option<usize>,
    /// ascending coefficients of the minimal polynomial of the designated
    /// generator (rationals; integrality is part of the contract).
    pub generator_min_poly: Vec<CycloElem>,
}

pub fn trace_subalgebra(family: &TraceFamily, cap: usize) -> Result<TraceSubalgebra> {
    let sat = lattice_saturate(&family.x_by_class, &family.witt_scalars(), cap, family.l)?;
    let scalar_rank = family.scalar_rank();
    let witt_rank = if sat.lattice.rank() % scalar_rank == 0 {
        Some(sat.lattice.rank() / scalar_rank)
    } else {
        None
    };
    let base = ModlTarget::new(family.q * family.q - 1, family.l)?;
    let sigma = family.pro_l_generator_exponent();
    let (presentation, gen_poly) = match family.case() {
        CuspCase::NormInflated => {
            let v = family.y_by_exponent[sigma as usize]
                .sub_const(&CycloElem::from_int(2, 1))?;
            let p = min_poly(&v)?;
            let rel = MultiPoly::from_univariate(1, 0, &p);
            (
                RingPresentation::new(
                    base,
                    PresKind::PowerSeriesModQ,
                    vec![VarSpec {
                        name: "t".to_string(),
                        kind: VarKind::PowerSeries,
                    }],
                    vec![rel],
                ),
                p,
            )
        }
        CuspCase::Regular => {
            let ln = (family.q * family.q - 1)
                / crate::fq::prime_to_l_part(family.q * family.q - 1, family.l);
            if ln == 1 {
                // generic case: the ring is W(k) itself
                (
                    RingPresentation::new(base, PresKind::TraceSubalgebra, vec![], vec![]),
                    vec![],
                )
            } else {
                // normalized torus coordinate: entries are the l-power-order
                // deviations, so the minimal polynomial is z^(l^n) - 1
                let v = &family.y_by_exponent[sigma as usize];
                let p = min_poly(v)?;
                let rel = MultiPoly::from_univariate(1, 0, &p);
                (
                    RingPresentation::new(
                        base,
                        PresKind::CharacterGroupRing,
                        vec![VarSpec {
                            name: "z".to_string(),
                            kind: VarKind::UnitGroup,
                        }],
                        vec![rel],
                    ),
                    p,
                )
            }
        }
    };
    Ok(TraceSubalgebra {
        saturation: sat,
        presentation,
        scalar_rank,
        witt_rank,
        generator_min_poly: gen_poly,
    })
}

/// Report of the level-0 equivalence checks (theta^q != theta).
#[derive(Clone, Debug, Serialize)]
pub struct Level0Report {
    pub x_in_y_span: TriState,
    pub y_in_x_span: TriState,
    pub lattices_equal: TriState,
    /// The averaging identity in its corrected, signed form, with the
    /// central-coset terms weighted 2/(q-1) instead of -1.
    pub averaging_identity: TriState,
    /// The plain form -(1/#E^l) sum theta_l^{-1}(tau) x_{sigma tau},
    /// checked at every sigma whose translates all stay elliptic.
    pub averaging_plain_form: TriState,
    /// Exponents sigma where a translate sigma*tau landed in the center,
    /// requiring the corrected weighting.
    pub central_hit_exponents: Vec<u64>,
}

impl Level0Report {
    pub fn all_verified(&self) -> bool {
        self.x_in_y_span.is_verified()
            && self.y_in_x_span.is_verified()
            && self.lattices_equal.is_verified()
            && self.averaging_identity.is_verified()
            && self.averaging_plain_form.is_verified()
    }
}

/// Mutual generation of the x- and y-spans, and the exact averaging
/// identity over the prime-to-l subgroup of the torus.
pub fn verify_level0(family: &TraceFamily, cap: usize) -> Result<Level0Report> {
    if family.case() != CuspCase::Regular {
        return Err(Error::CaseMismatch(
            "level-0 equivalence requires theta^q != theta".to_string(),
        ));
    }
    let q = family.q;
    let l = family.l;
    let n = q * q - 1;
    let scalars = family.witt_scalars();
    let x_sat = lattice_saturate(&family.x_by_class, &scalars, cap, l)?;
    let y_sat = lattice_saturate(&family.y_by_exponent, &scalars, cap, l)?;

    let mut x_in_y = TriState::Verified;
    for (c, x) in family.classes.iter().zip(family.x_by_class.iter()) {
        if !lattice_member(x, &y_sat)? {
            x_in_y = TriState::Failed {
                witness: format!("x at {:?} {:?} outside the y-span", c.tag, c.params),
            };
            break;
        }
    }
    let mut y_in_x = TriState::Verified;
    for (k, y) in family.y_by_exponent.iter().enumerate() {
        if !lattice_member(y, &x_sat)? {
            y_in_x = TriState::Failed {
                witness: format!("y at exponent {k} outside the x-span"),
            };
            break;
        }
    }
    let lattices_equal = if x_sat.lattice == y_sat.lattice {
        TriState::Verified
    } else {
        TriState::Failed {
            witness: "canonical bases differ".to_string(),
        }
    };

    // Averaging identity. #E^l = M', tau ranges over g2^(t * l^s).
    let m_prime = crate::fq::prime_to_l_part(n, l);
    let l_part = n / m_prime;
    let teich = family.lifts.teich_exponent;
    let mut averaging = TriState::Verified;
    let mut plain = TriState::Verified;
    let mut central_hits = Vec::new();
    'outer: for s in 0..n {
        if s % (q + 1) == 0 {
            continue; // sigma must lie outside the center
        }
        let mut corrected = CycloVec::constant(family.labels.clone(), CycloElem::zero(1))?;
        let mut plain_sum = corrected.clone();
        let mut hit_center = false;
        for t in 0..m_prime {
            let tau_exp = t * l_part % n;
            // theta_l^{-1}(tau)
            let coeff = CycloElem::root_of_unity(
                n,
                ((n - teich * tau_exp % n) % n) as i64,
            );
            let k = (s + tau_exp) % n;
            let w = family.theta_pair_vector(k)?; // [theta + theta^q](g2^k) through x
            corrected = corrected.add(&w.scale_elem(&coeff)?)?;
            // plain form: always -x_{sigma tau}
            let x_vec = if k % (q + 1) == 0 {
                hit_center = true;
                let i = (k / (q + 1)) % (q - 1);
                let idx = family
                    .classes
                    .iter()
                    .position(|c| c.tag == ClassTag::Central && c.params == vec![i])
                    .unwrap();
                family.x_by_class[idx].clone()
            } else {
                let rep = k.min(k * q % n);
                let idx = family
                    .classes
                    .iter()
                    .position(|c| c.tag == ClassTag::Elliptic && c.params == vec![rep])
                    .unwrap();
                family.x_by_class[idx].clone()
            };
            plain_sum = plain_sum.add(&x_vec.scale_elem(&coeff)?.scale_rat(
                &BigRational::from(BigInt::from(-1)),
            ))?;
        }
        let inv_count = BigRational::new(BigInt::one(), BigInt::from(m_prime as i64));
        let corrected = corrected.scale_rat(&inv_count);
        let plain_sum = plain_sum.scale_rat(&inv_count);
        let y = &family.y_by_exponent[s as usize];
        if !corrected.eq_value(y) {
            averaging = TriState::Failed {
                witness: format!("corrected averaging identity fails at exponent {s}"),
            };
            break 'outer;
        }
        if hit_center {
            central_hits.push(s);
        } else if !plain_sum.eq_value(y) {
            plain = TriState::Failed {
                witness: format!("plain averaging identity fails at exponent {s}"),
            };
            break 'outer;
        }
    }

    Ok(Level0Report {
        x_in_y_span: x_in_y,
        y_in_x_span: y_in_x,
        lattices_equal,
        averaging_identity: averaging,
        averaging_plain_form: plain,
        central_hit_exponents: central_hits,
    })
}

/// The monic integer polynomial Q with
/// Q(t)^2 = prod over nontrivial l^n-th roots zeta of (t - zeta - zeta^(-1) + 2),
/// n = ord_l(q^2 - 1). Coefficients ascend; the expansion is exact.
pub fn cuspidal_relation_poly(q: u64, l: u64) -> Result<Vec<BigInt>> {
    validate_q_l(q, l)?;
    if (q + 1) % l != 0 {
        return Err(Error::InvalidParameter(format!(
            "l = {l} does not divide q + 1 = {}",
            q + 1
        )));
    }
    let n_grp = q * q - 1;
    let mut ln = 1u64;
    {
        let mut t = n_grp;
        while t % l == 0 {
            t /= l;
            ln *= l;
        }
    }
    // Q = prod over pair representatives j = 1..(l^n - 1)/2 of
    // (t - (zeta^j + zeta^-j - 2))
    let mut coeffs: Vec<CycloElem> = vec![CycloElem::one(ln)];
    for j in 1..=(ln - 1) / 2 {
        let root = CycloElem::root_of_unity(ln, j as i64)
            .add(&CycloElem::root_of_unity(ln, -(j as i64)))?
            .sub(&CycloElem::from_int(2, 1))?;
        let mut next = vec![CycloElem::zero(ln); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c)?;
            next[i] = next[i].sub(&c.mul(&root)?)?;
        }
        coeffs = next;
    }
    // integer coefficients
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let r = c.as_rational().ok_or_else(|| {
            Error::VerificationFailed("relation polynomial has irrational coefficient".into())
        })?;
        if !r.is_integer() {
            return Err(Error::VerificationFailed(
                "relation polynomial has non-integer coefficient".into(),
            ));
        }
        out.push(r.numer().clone());
    }
    // verify Q^2 equals the full product over all nontrivial l^n-th roots
    let mut full: Vec<CycloElem> = vec![CycloElem::one(ln)];
    for j in 1..ln {
        let root = CycloElem::root_of_unity(ln, j as i64)
            .add(&CycloElem::root_of_unity(ln, -(j as i64)))?
            .sub(&CycloElem::from_int(2, 1))?;
        let mut next = vec![CycloElem::zero(ln); full.len() + 1];
        for (i, c) in full.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c)?;
            next[i] = next[i].sub(&c.mul(&root)?)?;
        }
        full = next;
    }
    let sq = poly_sq(&out);
    if sq.len() != full.len() {
        return Err(Error::VerificationFailed("Q^2 degree mismatch".into()));
    }
    for (a, b) in sq.iter().zip(full.iter()) {
        if !CycloElem::from_rational(BigRational::from(a.clone()), 1).eq_value(b) {
            return Err(Error::VerificationFailed(
                "Q^2 does not match the displayed product".into(),
            ));
        }
    }
    Ok(out)
}

fn poly_sq(p: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); 2 * p.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Structural facts about Q checked exactly: integer coefficients (by
/// construction), degree (l^n - 1)/2, Q(0) != 0, Q = t^deg mod l.
pub fn relation_poly_facts(q: u64, l: u64) -> Result<(Vec<BigInt>, u32)> {
    let poly = cuspidal_relation_poly(q, l)?;
    let n_grp = q * q - 1;
    let mut ln = 1u64;
    let mut ord = 0u32;
    {
        let mut t = n_grp;
        while t % l == 0 {
            t /= l;
            ln *= l;
            ord += 1;
        }
    }
    let deg = poly.len() - 1;
    if deg as u64 != (ln - 1) / 2 {
        return Err(Error::VerificationFailed(format!(
            "deg Q = {deg} but (l^n - 1)/2 = {}",
            (ln - 1) / 2
        )));
    }
    if poly[0].is_zero() {
        return Err(Error::VerificationFailed("Q(0) = 0".into()));
    }
    let lb = BigInt::from(l);
    for c in poly.iter().take(deg) {
        if !(c % &lb).is_zero() {
            return Err(Error::VerificationFailed(
                "Q is not congruent to t^deg mod l".into(),
            ));
        }
    }
    Ok((poly, ord))
}

/// Report for the norm-inflated case checks.
#[derive(Clone, Debug, Serialize)]
pub struct NormInflatedReport {
    pub relation_poly: Vec<String>,
    pub q_annihilates: TriState,
    pub entries_distinct: TriState,
    pub powers_span_traces: TriState,
    pub trace_identity: TriState,
    pub degree_matches_classes: TriState,
}

impl NormInflatedReport {
    pub fn all_verified(&self) -> bool {
        self.q_annihilates.is_verified()
            && self.entries_distinct.is_verified()
            && self.powers_span_traces.is_verified()
            && self.trace_identity.is_verified()
            && self.degree_matches_classes.is_verified()
    }
}

/// Verify the power-series presentation of the deformation ring in the
/// theta^q = theta case: Q(y_sigma - 2) = 0 componentwise, the entries of
/// y_sigma - 2 are pairwise distinct, the powers of y_sigma - 2 span the
/// trace lattice over the Witt scalars, and the trace of sigma is -t - 2.
pub fn verify_norm_inflated(family: &TraceFamily, cap: usize) -> Result<NormInflatedReport> {
    if family.case() != CuspCase::NormInflated {
        return Err(Error::CaseMismatch(
            "power-series presentation requires theta^q = theta".to_string(),
        ));
    }
    let q = family.q;
    let l = family.l;
    let n = q * q - 1;
    let (poly, _) = relation_poly_facts(q, l)?;
    let sigma = family.pro_l_generator_exponent();
    let v = family.y_by_exponent[sigma as usize].sub_const(&CycloElem::from_int(2, 1))?;

    // (a) Q(v) = 0 componentwise
    let coeffs: Vec<CycloElem> = poly
        .iter()
        .map(|c| CycloElem::from_rational(BigRational::from(c.clone()), 1))
        .collect();
    let ev = crate::cyclo::eval_poly_at(&coeffs, &v)?;
    let q_annihilates = if ev.is_zero() {
        TriState::Verified
    } else {
        TriState::Failed {
            witness: "Q(y_sigma - 2) != 0".to_string(),
        }
    };

    // (b) pairwise distinct entries
    let mut entries_distinct = TriState::Verified;
    'dist: for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v.entries()[i].eq_value(&v.entries()[j]) {
                entries_distinct = TriState::Failed {
                    witness: format!("entries {i} and {j} coincide"),
                };
                break 'dist;
            }
        }
    }

    // (c) powers of v span the trace lattice over the Witt scalars
    let sat = lattice_saturate(&[v.clone()], &family.witt_scalars(), cap, l)?;
    let mut powers_span = TriState::Verified;
    for (c, x) in family.classes.iter().zip(family.x_by_class.iter()) {
        if !lattice_member(x, &sat)? {
            powers_span = TriState::Failed {
                witness: format!(
                    "x at class {:?} {:?} outside the span of powers",
                    c.tag, c.params
                ),
            };
            break;
        }
    }

    // (d) trace identity: x_sigma = -(y_sigma - 2) - 2
    let sigma_rep = sigma.min(sigma * q % n);
    let idx = family
        .classes
        .iter()
        .position(|c| c.tag == ClassTag::Elliptic && c.params == vec![sigma_rep])
        .expect("sigma is elliptic");
    let rhs = v
        .scale_rat(&BigRational::from(BigInt::from(-1)))
        .sub_const(&CycloElem::from_int(2, 1))?;
    let trace_identity = if family.x_by_class[idx].eq_value(&rhs) {
        TriState::Verified
    } else {
        TriState::Failed {
            witness: "x_sigma != -(y_sigma - 2) - 2".to_string(),
        }
    };

    // degree = number of S_theta classes
    let degree_matches_classes = if poly.len() - 1 == family.lifts.classes.len() {
        TriState::Verified
    } else {
        TriState::Failed {
            witness: format!(
                "deg Q = {} but #classes = {}",
                poly.len() - 1,
                family.lifts.classes.len()
            ),
        }
    };

    Ok(NormInflatedReport {
        relation_poly: poly.iter().map(|c| c.to_string()).collect(),
        q_annihilates,
        entries_distinct,
        powers_span_traces: powers_span,
        trace_identity,
        degree_matches_classes,
    })
}

/// The deformation ring W[[x, t]]/Q(t) of the twist family of the cuspidal
/// representation attached to the trivial character, with its descriptor.
#[derive(Clone, Debug, Serialize)]
pub struct WeilRepRing {
    pub presentation: RingPresentation,
    /// The unramified central direction: a uniformizer acts by 1 + x.
    pub central_character: String,
    /// The finite-level direction: the group acts on the depth-zero
    /// invariants through the deformation parameterized by t.
    pub invariants_action: String,
    pub tangent_dim: usize,
}

pub fn weil_rep_ring(q: u64, l: u64) -> Result<WeilRepRing> {
    if (q + 1) % l != 0 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not -1 mod l = {l}"
        )));
    }
    let (poly, _) = relation_poly_facts(q, l)?;
    let base = ModlTarget::new(q * q - 1, l)?;
    let coeffs: Vec<CycloElem> = poly
        .iter()
        .map(|c| CycloElem::from_rational(BigRational::from(c.clone()), 1))
        .collect();
    let rel = MultiPoly::from_univariate(2, 1, &coeffs);
    let presentation = RingPresentation::new(
        base,
        PresKind::Mixed,
        vec![
            VarSpec {
                name: "x".to_string(),
                kind: VarKind::PowerSeries,
            },
            VarSpec {
                name: "t".to_string(),
                kind: VarKind::PowerSeries,
            },
        ],
        vec![rel],
    );
    let tangent = presentation.tangent_dim()?;
    Ok(WeilRepRing {
        presentation,
        central_character: "unramified, uniformizer -> 1 + x".to_string(),
        invariants_action: "depth-zero invariants carry the t-parameterized deformation"
            .to_string(),
        tangent_dim: tangent,
    })
}

/// Full per-theta report.
#[derive(Clone, Debug, Serialize)]
pub struct DefRingReport {
    pub q: u64,
    pub l: u64,
    pub theta_exponent: u64,
    pub case: CuspCase,
    pub lift_count: usize,
    pub class_count: usize,
    pub lattice: LLattice,
    pub stable_degree: usize,
    pub scalar_rank: usize,
    pub witt_rank: Option<usize>,
    pub presentation: RingPresentation,
    pub tangent_dim: usize,
    pub idempotent: TriState,
    pub center_image: TriState,
    pub level0: TriState,
    pub norm_inflated: TriState,
}

/// Compute the full report, running the verification passes when `verify`.
pub fn defring_report(q: u64, l: u64, theta_exponent: u64, verify: bool) -> Result<DefRingReport> {
    let family = trace_family(q, l, theta_exponent)?;
    let cap = default_cap(&family);
    let sub = trace_subalgebra(&family, cap)?;
    let tangent = sub.presentation.tangent_dim()?;
    let (idem, center, lvl0, norm) = if verify {
        let idem = idempotent_check(&family)?;
        let center = center_image_check(&family, cap)?;
        let (lvl0, norm) = match family.case() {
            CuspCase::Regular => {
                let r = verify_level0(&family, cap)?;
                let s = if r.all_verified() {
                    TriState::Verified
                } else {
                    TriState::Failed {
                        witness: format!("{r:?}"),
                    }
                };
                (
                    s,
                    TriState::Skipped {
                        reason: "theta^q != theta".to_string(),
                    },
                )
            }
            CuspCase::NormInflated => {
                let r = verify_norm_inflated(&family, cap)?;
                let s = if r.all_verified() {
                    TriState::Verified
                } else {
                    TriState::Failed {
                        witness: format!("{r:?}"),
                    }
                };
                (
                    TriState::Skipped {
                        reason: "theta^q = theta".to_string(),
                    },
                    s,
                )
            }
        };
        (idem, center, lvl0, norm)
    } else {
        let sk = TriState::Skipped {
            reason: "verification not requested".to_string(),
        };
        (sk.clone(), sk.clone(), sk.clone(), sk)
    };
    Ok(DefRingReport {
        q,
        l,
        theta_exponent: family.lifts.theta_exponent,
        case: family.case(),
        lift_count: family.lifts.lifts.len(),
        class_count: family.lifts.classes.len(),
        lattice: sub.saturation.lattice.clone(),
        stable_degree: sub.saturation.stable_degree,
        scalar_rank: sub.scalar_rank,
        witt_rank: sub.witt_rank,
        presentation: sub.presentation,
        tangent_dim: tangent,
        idempotent: idem,
        center_image: center,
        level0: lvl0,
        norm_inflated: norm,
    })
}

/// All theta orbit representatives for (q, l): exponents mod m' up to the
/// identification a ~ aq, restricted to those with a valid lift set.
pub fn theta_orbit_reps(q: u64, l: u64) -> Result<Vec<u64>> {
    validate_q_l(q, l)?;
    let m_prime = crate::fq::prime_to_l_part(q * q - 1, l);
    let mut reps = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for a in 0..m_prime {
        if seen.contains(&a) {
            continue;
        }
        let b = a * q % m_prime;
        seen.insert(a);
        seen.insert(b);
        let theta = CharTheta::new_modl(q, ThetaHost::Fq2, a, l);
        if lift_set(&theta, l).is_ok() {
            reps.push(a.min(b));
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_vector_display_values_5_3() {
        let fam = trace_family(5, 3, 2).unwrap(); // theta = theta^q
        assert_eq!(fam.case(), CuspCase::NormInflated);
        // x at the identity class is the constant q - 1
        let id = fam
            .classes
            .iter()
            .position(|c| c.tag == ClassTag::Central && c.params == vec![0])
            .unwrap();
        for e in fam.x_by_class[id].entries() {
            assert_eq!(
                e.as_rational().unwrap(),
                BigRational::from(BigInt::from(4))
            );
        }
        // x at split noncentral classes vanishes
        let sp = fam
            .classes
            .iter()
            .position(|c| c.tag == ClassTag::Split)
            .unwrap();
        assert!(fam.x_by_class[sp].is_zero());
        // at the order-3 elliptic generator, x = -(zeta_3 + zeta_3^2) = 1
        let sigma = fam.pro_l_generator_exponent(); // 8
        assert_eq!(sigma, 8);
        let rep = sigma.min(sigma * 5 % 24);
        let idx = fam
            .classes
            .iter()
            .position(|c| c.tag == ClassTag::Elliptic && c.params == vec![rep])
            .unwrap();
        for e in fam.x_by_class[idx].entries() {
            assert_eq!(e.as_rational().unwrap(), BigRational::from(BigInt::one()));
        }
    }

    #[test]
    fn relation_poly_5_3_and_17_3() {
        // (5,3): n = 1, Q = t + 3
        let p = cuspidal_relation_poly(5, 3).unwrap();
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(1)]);
        // (17,3): n = 2, Q = (t+3)((t+2)^3 - 3(t+2) + 1) = (t+3)(t^3+6t^2+9t+3)
        let p = cuspidal_relation_poly(17, 3).unwrap();
        let a = [BigInt::from(3), BigInt::from(1)];
        let b = [
            BigInt::from(3),
            BigInt::from(9),
            BigInt::from(6),
            BigInt::from(1),
        ];
        let mut expect = vec![BigInt::zero(); 5];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                expect[i + j] += x * y;
            }
        }
        assert_eq!(p, expect);
        relation_poly_facts(17, 3).unwrap();
        assert!(cuspidal_relation_poly(7, 3).is_err()); // 3 divides q - 1, not q + 1
    }

    #[test]
    fn norm_inflated_5_3() {
        let fam = trace_family(5, 3, 2).unwrap();
        let r = verify_norm_inflated(&fam, default_cap(&fam)).unwrap();
        assert!(r.all_verified(), "{r:?}");
        // y_sigma - 2 = -3 here
        let sigma = fam.pro_l_generator_exponent();
        let v = fam.y_by_exponent[sigma as usize]
            .sub_const(&CycloElem::from_int(2, 1))
            .unwrap();
        assert_eq!(
            v.entries()[0].as_rational().unwrap(),
            BigRational::from(BigInt::from(-3))
        );
    }

    #[test]
    fn trace_subalgebra_5_3_both_cases() {
        // theta = theta^q: rank 1 over the Witt scalars, presentation t + 3
        let fam = trace_family(5, 3, 2).unwrap();
        let sub = trace_subalgebra(&fam, default_cap(&fam)).unwrap();
        assert_eq!(sub.witt_rank, Some(1));
        assert_eq!(sub.presentation.kind, PresKind::PowerSeriesModQ);
        assert_eq!(sub.generator_min_poly.len(), 2);
        assert_eq!(sub.presentation.tangent_dim().unwrap(), 0);
        // theta != theta^q: rank 3, presentation W[z]/(z^3 - 1)
        let fam = trace_family(5, 3, 1).unwrap();
        let sub = trace_subalgebra(&fam, default_cap(&fam)).unwrap();
        assert_eq!(sub.witt_rank, Some(3));
        assert_eq!(sub.presentation.kind, PresKind::CharacterGroupRing);
        assert_eq!(sub.generator_min_poly.len(), 4);
        assert_eq!(sub.presentation.tangent_dim().unwrap(), 1);
        // characteristic-zero points match the class count
        let (torsion, free) = sub.presentation.char0_points().unwrap();
        assert_eq!((torsion, free), (3, 0));
    }

    #[test]
    fn idempotent_5_3_and_7_5() {
        // Integrality of the lift-family projector holds exactly when the
        // family is a union of l-blocks: always for theta^q != theta (the
        // full twist cycle), never for theta^q = theta (the cycle minus the
        // slot occupied by the det twist and Steinberg constituents).
        for (q, l) in [(5u64, 3u64), (7, 5)] {
            for a in theta_orbit_reps(q, l).unwrap() {
                let fam = trace_family(q, l, a).unwrap();
                let r = idempotent_check(&fam).unwrap();
                match fam.case() {
                    CuspCase::Regular => {
                        assert!(r.is_verified(), "(q,l,a) = ({q},{l},{a})")
                    }
                    CuspCase::NormInflated => {
                        assert!(
                            matches!(r, TriState::Failed { .. }),
                            "(q,l,a) = ({q},{l},{a})"
                        )
                    }
                }
            }
        }
        // the defect at (5,3), theta trivial, is exactly the identity-class
        // coefficient 16/480 = 1/30 with 3-valuation -1
        let fam = trace_family(5, 3, 0).unwrap();
        let id = fam
            .classes
            .iter()
            .position(|c| c.tag == ClassTag::Central && c.params == vec![0])
            .unwrap();
        let mut acc = CycloElem::zero(1);
        for v in fam.x_by_class[id].entries() {
            acc = acc.add(v).unwrap();
        }
        let coeff = acc.scale(&BigRational::new(BigInt::from(4), BigInt::from(480)));
        assert_eq!(
            coeff.as_rational().unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(30))
        );
        assert!(!coeff.is_l_integral(3));
    }

    #[test]
    fn level0_5_3() {
        let fam = trace_family(5, 3, 1).unwrap();
        let r = verify_level0(&fam, default_cap(&fam)).unwrap();
        assert!(r.all_verified(), "{r:?}");
        // sigma = g2 itself never hits the center at (5,3)
        assert!(!r.central_hit_exponents.contains(&1));
    }

    #[test]
    fn weil_ring_5_3() {
        let r = weil_rep_ring(5, 3).unwrap();
        // Q = t + 3 is linear: the ring is W[[x]], tangent dimension 1
        assert_eq!(r.tangent_dim, 1);
        let r17 = weil_rep_ring(17, 3).unwrap();
        assert_eq!(r17.tangent_dim, 2); // 1 + tangent(W[[t]]/Q), deg Q = 4
        assert!(weil_rep_ring(7, 3).is_err());
    }
}
