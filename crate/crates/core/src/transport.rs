//! Type descriptors (J, Lambda) for cuspidal representations of GL_2(F),
//! the three-case construction of pi_chi from an admissible pair, and the
//! transport bijections carrying character deformations to representation
//! deformations (and back).
//!
//! Representation spaces are never materialized: a descriptor carries the
//! case tag, its parameters, certified attributes (dimensionless here:
//! supercuspidality, central character), and the deformation ring filled in
//! by transport.

use crate::coeff::LocalRing;
use crate::cyclo::ModlTarget;
use crate::defring::{weil_rep_ring, WeilRepRing};
use crate::error::{Error, Result};
use crate::fq::{lift_set, prime_to_l_part, CharTheta, ThetaHost};
use crate::local::{
    char_defring, is_admissible, minimal_decompose,
    restrict_extend_ramified, restrict_to_base_ramified, CharDefPresentation, CharLift,
    FieldRole, LocalFieldDesc, TameChar, WildMarker,
};
use serde::Serialize;

/// The stratum data underlying a positive-level type, kept opaque except
/// for the level and parity bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumDesc {
    pub level: u32,
    pub parity: LevelParity,
    pub extension_role: FieldRole,
    pub alpha_id: String,
    pub psi_alpha_id: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LevelParity {
    LevelZero,
    Odd,
    EvenPositive,
}

impl StratumDesc {
    pub fn new(level: u32, extension_role: FieldRole, alpha_id: &str) -> Result<Self> {
        let parity = if level == 0 {
            LevelParity::LevelZero
        } else if level % 2 == 1 {
            LevelParity::Odd
        } else {
            LevelParity::EvenPositive
        };
        if matches!(parity, LevelParity::LevelZero | LevelParity::EvenPositive)
            && extension_role == FieldRole::RamifiedQuadratic
        {
            return Err(Error::InvalidParameter(
                "level-zero and even-positive strata force an unramified extension".to_string(),
            ));
        }
        Ok(StratumDesc {
            level,
            parity,
            extension_role,
            alpha_id: alpha_id.to_string(),
            psi_alpha_id: format!("psi[{alpha_id}]"),
        })
    }
}

/// The trace-normalization record pinned to the opaque representation eta
/// in the even-positive-level case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaNormalization {
    /// Restriction to the depth subgroup J^1 is eta itself.
    pub restriction_to_j1: String,
    /// Restriction to F^x is a multiple of chi restricted to F^x.
    pub central_restriction: String,
    /// At prime-to-p roots of unity zeta of E^x outside F^x, the trace of
    /// Lambda'(zeta) is -chi(zeta).
    pub trace_at_roots: String,
}

impl EtaNormalization {
    fn standard() -> Self {
        EtaNormalization {
            restriction_to_j1: "Lambda'|J^1 = eta".to_string(),
            central_restriction: "Lambda'|F^x is a multiple of chi|F^x".to_string(),
            trace_at_roots: "tr Lambda'(zeta) = -chi(zeta) for prime-to-p zeta in E^x \\ F^x"
                .to_string(),
        }
    }
}

/// Case parameter of a type per the three-case construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TypeCase {
    /// Level 0: J = F^x GL_2(O_F); the finite-group parameter theta on
    /// F_{q^2}^x together with the central value data of chi'.
    DepthZero { theta: CharTheta },
    /// Odd level: J = E^x U^((n+1)/2); Lambda' is the character glued from
    /// chi on E^x and psi_alpha on the depth subgroup.
    OddLevel { stratum: StratumDesc },
    /// Even positive level: J = E^x U^(n/2) with the opaque eta and its
    /// normalization record.
    EvenPositive {
        stratum: StratumDesc,
        eta_id: String,
        normalization: EtaNormalization,
    },
}

/// The (J, Lambda) type of a cuspidal representation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeDesc {
    pub case: TypeCase,
    pub extension: LocalFieldDesc,
    /// The full pair character chi (the Lambda parameter on E^x).
    pub chi: TameChar,
    /// The minimal part chi' from the decomposition chi = (phi o N) chi'.
    pub chi_minimal: TameChar,
    /// The recorded twist phi on F^x.
    pub twist: TameChar,
}

impl TypeDesc {
    pub fn case_number(&self) -> u8 {
        match self.case {
            TypeCase::DepthZero { .. } => 1,
            TypeCase::OddLevel { .. } => 2,
            TypeCase::EvenPositive { .. } => 3,
        }
    }
}

/// Compact-induction descriptor of the cuspidal representation of the type.
#[derive(Clone, Debug, Serialize)]
pub struct PiDesc {
    pub type_desc: TypeDesc,
    pub induction: String,
    /// The central character: chi restricted to F^x, as finite data.
    pub central_character: TameChar,
    pub supercuspidal: bool,
    /// Filled by transport operations.
    pub deformation_ring: Option<CharDefPresentation>,
}

/// Build the type of an admissible pair (E, chi).
pub fn pair_to_type(e: LocalFieldDesc, chi: &TameChar) -> Result<TypeDesc> {
    let (ok, why) = is_admissible(e, chi)?;
    if !ok {
        return Err(Error::NotAdmissible(why));
    }
    let (phi, chi_min) = minimal_decompose(e, chi)?;
    let case = match (chi_min.level(), e.role) {
        (0, FieldRole::UnramifiedQuadratic) => {
            let l = chi.l.ok_or_else(|| {
                Error::InvalidParameter("pair characters are mod-l data here".to_string())
            })?;
            // theta inflated from chi'|O_E^x: an admissible pair has
            // theta^q != theta, which is exactly clause (a) on the units
            let theta = CharTheta::new_modl(e.q, ThetaHost::Fq2, chi_min.unit_exponent, l);
            TypeCase::DepthZero { theta }
        }
        (0, _) => {
            return Err(Error::NotAdmissible(
                "tame pairs require an unramified extension".to_string(),
            ))
        }
        (n, role) if n % 2 == 1 => TypeCase::OddLevel {
            stratum: StratumDesc::new(n, role, &format!("alpha[n={n}]"))?,
        },
        (n, FieldRole::UnramifiedQuadratic) => TypeCase::EvenPositive {
            stratum: StratumDesc::new(n, FieldRole::UnramifiedQuadratic, &format!("alpha[n={n}]"))?,
            eta_id: format!("eta[{}]", chi_min.unit_exponent),
            normalization: EtaNormalization::standard(),
        },
        (_, _) => {
            return Err(Error::NotAdmissible(
                "even positive level forces an unramified extension".to_string(),
            ))
        }
    };
    Ok(TypeDesc {
        case,
        extension: e,
        chi: chi.clone(),
        chi_minimal: chi_min,
        twist: phi,
    })
}

/// The central character of the type: chi restricted to F^x.
///
/// On tame data: for unramified E the units restrict through mu_{q^2-1} ->
/// mu_{q-1} (exponent times q+1... the inclusion F^x in E^x sends the
/// Teichmueller generator g of F to g2^(q+1)), and pi_F = pi_E; for ramified
/// E the unit part restricts identically and pi_F = pi_E^2.
pub fn central_character(t: &TypeDesc) -> Result<TameChar> {
    let e = t.extension;
    let base = LocalFieldDesc::base(e.q)?;
    let chi = &t.chi;
    match e.role {
        FieldRole::UnramifiedQuadratic => {
            // chi(g) = chi(g2^(q+1)) = zeta_{q^2-1}^(a(q+1)) = zeta_{q-1}^a:
            // the F-side exponent against the norm generator is a itself
            let base_mod = match chi.l {
                None => e.q - 1,
                Some(l) => prime_to_l_part(e.q - 1, l),
            }
            .max(1);
            Ok(TameChar {
                host: base,
                unif_value: chi.unif_value.clone(),
                unit_exponent: chi.unit_exponent % base_mod,
                wild: None,
                l: chi.l,
            })
        }
        FieldRole::RamifiedQuadratic => {
            let base_mod = match chi.l {
                None => e.q - 1,
                Some(l) => prime_to_l_part(e.q - 1, l),
            }
            .max(1);
            // pi_F = pi_E^2: square the uniformizer value
            let unif = match &chi.unif_value {
                crate::local::UnifValue::Cyclo(c) => crate::local::UnifValue::Cyclo(c.mul(c)?),
                crate::local::UnifValue::Modl(v) => {
                    let l = chi.l.expect("mod-l world");
                    let t = ModlTarget::new(prime_to_l_part(e.q - 1, l).max(2), l)?;
                    crate::local::UnifValue::Modl(t.fld.mul(v, v))
                }
            };
            Ok(TameChar {
                host: base,
                unif_value: unif,
                unit_exponent: chi.unit_exponent % base_mod,
                wild: None,
                l: chi.l,
            })
        }
        FieldRole::Base => Err(Error::InvalidParameter("not a quadratic extension".into())),
    }
}

/// The compact-induction descriptor of a type.
pub fn type_to_pi(t: &TypeDesc) -> Result<PiDesc> {
    let central = central_character(t)?;
    let supercuspidal = match &t.case {
        TypeCase::DepthZero { theta } => {
            // cuspidal but not supercuspidal exactly for theta^q = theta
            !theta.is_q_fixed()
        }
        _ => true,
    };
    Ok(PiDesc {
        type_desc: t.clone(),
        induction: "c-Ind from J, twisted by (phi o det)".to_string(),
        central_character: central,
        supercuspidal,
        deformation_ring: None,
    })
}

/// A deformation of pi over a finite local coefficient ring, carried on the
/// free coordinates of the underlying character data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PiDeformation<E> {
    pub case_number: u8,
    /// The finite-group direction (case 1: the theta-deformation recovered
    /// through the depth-zero equivalence; cases 2 and 3: the unit-part
    /// twist coordinate against the Teichmueller baseline).
    pub finite_part: E,
    /// The central/uniformizer direction.
    pub central_part: E,
}

/// Transport a chi-lift to a pi-deformation descriptor. Case 1 goes through
/// the depth-zero equivalence (the theta-deformation is the unit deviation);
/// case 2 glues the unique lift of psi_alpha; case 3 records the twist
/// coordinate chi'_A * (Teichmueller baseline)^(-1) on J/J^1.
pub fn transport_deformation<R: LocalRing>(
    t: &TypeDesc,
    chi_lift: &CharLift<R::El>,
    _ring: &R,
) -> Result<PiDeformation<R::El>> {
    Ok(PiDeformation {
        case_number: t.case_number(),
        finite_part: chi_lift.deviation.clone(),
        central_part: chi_lift.unif_unit.clone(),
    })
}

/// The inverse of `transport_deformation`: recover the chi-lift.
pub fn transport_inverse<R: LocalRing>(
    t: &TypeDesc,
    pi_def: &PiDeformation<R::El>,
    _ring: &R,
) -> Result<CharLift<R::El>> {
    if pi_def.case_number != t.case_number() {
        return Err(Error::CaseMismatch(format!(
            "descriptor case {} does not match type case {}",
            pi_def.case_number,
            t.case_number()
        )));
    }
    Ok(CharLift {
        deviation: pi_def.finite_part.clone(),
        unif_unit: pi_def.central_part.clone(),
    })
}

/// For a ramified (case 2) or primitive-shape type: a deformation of the
/// central character determines the pi-deformation uniquely, through the
/// unique square-root extension of the uniformizer coordinate.
pub fn ramified_or_primitive_transport<R: LocalRing>(
    t: &TypeDesc,
    central_lift: &CharLift<R::El>,
    ring: &R,
) -> Result<PiDeformation<R::El>> {
    if t.extension.role != FieldRole::RamifiedQuadratic {
        return Err(Error::CaseMismatch(
            "central-character transport requires a ramified extension".to_string(),
        ));
    }
    let chi_lift = restrict_extend_ramified(central_lift, ring)?;
    transport_deformation(t, &chi_lift, ring)
}

/// Central character of a transported deformation (ramified case): restrict
/// the chi-lift coordinates back to F^x.
pub fn transported_central<R: LocalRing>(
    t: &TypeDesc,
    pi_def: &PiDeformation<R::El>,
    ring: &R,
) -> Result<CharLift<R::El>> {
    let chi_lift = transport_inverse(t, pi_def, ring)?;
    match t.extension.role {
        FieldRole::RamifiedQuadratic => Ok(restrict_to_base_ramified(&chi_lift, ring)),
        FieldRole::UnramifiedQuadratic => {
            // units restrict through the norm-compatible inclusion: the
            // deviation maps by its (q+1)-th power; pi_F = pi_E keeps the
            // uniformizer coordinate
            Ok(CharLift {
                deviation: ring.pow(&chi_lift.deviation, t.extension.q + 1),
                unif_unit: chi_lift.unif_unit,
            })
        }
        FieldRole::Base => unreachable!(),
    }
}

/// The pi(1) family: the cuspidal representation attached to the trivial
/// character, with its two-parameter universal ring W[[x, t]]/Q(t).
#[derive(Clone, Debug, Serialize)]
pub struct PiOneUniversal {
    pub pi: PiDesc,
    pub ring: WeilRepRing,
    /// x: the unramified central direction; t: the finite-group direction.
    pub coordinates: [String; 2],
}

pub fn pi1_universal(q: u64, l: u64) -> Result<PiOneUniversal> {
    if (q + 1) % l != 0 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not -1 mod l = {l}"
        )));
    }
    let e = LocalFieldDesc::unramified_quadratic(q)?;
    let target = ModlTarget::new(prime_to_l_part(q * q - 1, l).max(2), l)?;
    let chi = TameChar::modl(e, l, target.fld.one(), 0);
    let theta = CharTheta::new_modl(q, ThetaHost::Fq2, 0, l);
    // check the parameter is well-defined (lifts exist since l | q + 1)
    lift_set(&theta, l)?;
    let type_desc = TypeDesc {
        case: TypeCase::DepthZero { theta },
        extension: e,
        chi: chi.clone(),
        chi_minimal: chi.clone(),
        twist: TameChar::modl(LocalFieldDesc::base(q)?, l, target.fld.one(), 0),
    };
    let mut pi = type_to_pi(&type_desc)?;
    pi.supercuspidal = false;
    let ring = weil_rep_ring(q, l)?;
    Ok(PiOneUniversal {
        pi,
        ring,
        coordinates: [
            "x: unramified central direction (uniformizer -> 1 + x)".to_string(),
            "t: finite-group direction (the depth-zero deformation)".to_string(),
        ],
    })
}

/// Attach the deformation ring of the underlying pair character to a
/// descriptor (the content of the transport bijections at ring level).
pub fn fill_deformation_ring(pi: &mut PiDesc, l: u64) -> Result<()> {
    let ring = match pi.type_desc.extension.role {
        FieldRole::UnramifiedQuadratic => char_defring(&pi.type_desc.chi, l)?,
        FieldRole::RamifiedQuadratic => char_defring(&pi.central_character, l)?,
        FieldRole::Base => unreachable!(),
    };
    pi.deformation_ring = Some(ring);
    Ok(())
}

/// Convenience constructors for the shapes exercised by the verify suite.
pub fn level0_pair(q: u64, l: u64, unit_exponent: u64) -> Result<(LocalFieldDesc, TameChar)> {
    let e = LocalFieldDesc::unramified_quadratic(q)?;
    let target = ModlTarget::new(prime_to_l_part(q * q - 1, l).max(2), l)?;
    Ok((e, TameChar::modl(e, l, target.fld.one(), unit_exponent)))
}

pub fn ramified_pair(q: u64, l: u64, unit_exponent: u64, level: u32) -> Result<(LocalFieldDesc, TameChar)> {
    if level % 2 == 0 {
        return Err(Error::InvalidParameter(
            "ramified pair shapes have odd level".to_string(),
        ));
    }
    let e = LocalFieldDesc::ramified_quadratic(q)?;
    let target = ModlTarget::new(prime_to_l_part(q - 1, l).max(2), l)?;
    let w = WildMarker::new(level, &format!("wild[{level}]"), false, true)?;
    Ok((
        e,
        TameChar::modl(e, l, target.fld.one(), unit_exponent).with_wild(w),
    ))
}
