//! Certificates built from curves attached to quadratic maps: the marked
//! cubic model Y^2 = (X - c) * phi(X) and its j-invariant, superelliptic
//! genus, non-isotriviality, and irreducibility of iterates via square
//! tests on the adjusted critical orbit.

use std::fmt;

use crate::dynamics::{PointClass, PolyMap};
use crate::error::{Error, Result};
use crate::places::{ellth_root, is_ellth_power};
use crate::poly::{Coeff, DensePoly, Poly};
use crate::ratfunc::{KPoly, RatFunc};

/// Tate quantities and the j-invariant of the curve Y^2 = cubic(X).
///
/// A cubic with leading coefficient a is rescaled to the isomorphic monic
/// model first: substituting (X, Y) -> (X/a, Y/a) and multiplying through
/// by a^2 turns Y^2 = aX^3 + bX^2 + cX + d into Y^2 = X^3 + bX^2 + acX +
/// a^2 d, and j is unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticCurveInfo {
    cubic: KPoly,
    b2: RatFunc,
    b4: RatFunc,
    b6: RatFunc,
    b8: RatFunc,
    c4: RatFunc,
    c6: RatFunc,
    discriminant: RatFunc,
    j: RatFunc,
}

impl EllipticCurveInfo {
    /// Invariants of Y^2 = cubic(X). Fails on non-cubics and on singular
    /// curves (zero discriminant), where no j-invariant exists.
    pub fn from_cubic(cubic: &KPoly) -> Result<EllipticCurveInfo> {
        if cubic.degree().finite() != Some(3) {
            return Err(Error::input(format!(
                "the right-hand side must be a cubic, got degree {}",
                cubic.degree()
            )));
        }
        let lead = cubic.coeff(3);
        let a2 = cubic.coeff(2);
        let a4 = lead.mul(&cubic.coeff(1));
        let a6 = lead.mul(&lead).mul(&cubic.coeff(0));

        let b2 = a2.scale_int(4);
        let b4 = a4.scale_int(2);
        let b6 = a6.scale_int(4);
        let b8 = a2.mul(&a6).scale_int(4).sub(&a4.mul(&a4));
        let c4 = b2.mul(&b2).sub(&b4.scale_int(24));
        let c6 = b2
            .pow(3)?
            .neg()
            .add(&b2.mul(&b4).scale_int(36))
            .sub(&b6.scale_int(216));
        let discriminant = b2
            .mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&b4.pow(3)?.scale_int(8))
            .sub(&b6.mul(&b6).scale_int(27))
            .add(&b2.mul(&b4).mul(&b6).scale_int(9));
        debug_assert_eq!(
            c4.pow(3).unwrap().sub(&c6.mul(&c6)),
            discriminant.scale_int(1728)
        );
        if discriminant.is_zero() {
            return Err(Error::input(
                "singular cubic: the discriminant is zero, so there is no j-invariant",
            ));
        }
        let j = c4.pow(3)?.div(&discriminant)?;
        let monic = DensePoly::new(
            cubic.proto(),
            vec![a6.clone(), a4.clone(), a2.clone(), a2.one_like()],
        );
        Ok(EllipticCurveInfo {
            cubic: monic,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
            j,
        })
    }

    /// The monic cubic of the stored model.
    pub fn cubic(&self) -> &KPoly {
        &self.cubic
    }

    pub fn b2(&self) -> &RatFunc {
        &self.b2
    }

    pub fn b4(&self) -> &RatFunc {
        &self.b4
    }

    pub fn b6(&self) -> &RatFunc {
        &self.b6
    }

    pub fn b8(&self) -> &RatFunc {
        &self.b8
    }

    pub fn c4(&self) -> &RatFunc {
        &self.c4
    }

    pub fn c6(&self) -> &RatFunc {
        &self.c6
    }

    pub fn discriminant(&self) -> &RatFunc {
        &self.discriminant
    }

    pub fn j(&self) -> &RatFunc {
        &self.j
    }

    /// Whether j equals the image of the integer 1728 in F_q.
    pub fn j_equals_1728(&self) -> bool {
        self.j == RatFunc::from_int(self.j.field(), 1728)
    }
}

/// The elliptic curve Y^2 = (X - c) * phi(X) attached to a quadratic map
/// and a marked point c.
pub fn marked_cubic_curve(phi: &PolyMap, c: &RatFunc) -> Result<EllipticCurveInfo> {
    if phi.degree() != 2 {
        return Err(Error::input(format!(
            "the marked cubic needs a quadratic map, got degree {}",
            phi.degree()
        )));
    }
    let linear = DensePoly::new(phi.as_kpoly().proto(), vec![c.neg(), c.one_like()]);
    EllipticCurveInfo::from_cubic(&linear.mul(phi.as_kpoly()))
}

/// The marked cubic with c = phi(gamma), the critical value. This is the
/// curve whose j-invariant drives the certificates below.
pub fn critical_value_curve(phi: &PolyMap) -> Result<EllipticCurveInfo> {
    let data = phi.quadratic_data()?;
    marked_cubic_curve(phi, &phi.apply(&data.critical_point))
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Genus of the smooth projective model of Y^ell = f(X) for squarefree f
/// of degree n_deg, by Riemann-Hurwitz over the X-line: each of the n_deg
/// finite branch points contributes ell - 1, and infinity contributes
/// ell - gcd(ell, n_deg). Requires a tame cover, so the characteristic
/// must not divide ell; pass it when known.
pub fn genus_superelliptic(n_deg: u64, ell: u64, char_p: Option<u64>) -> Result<u64> {
    if ell < 2 {
        return Err(Error::input("the cover degree ell must be at least 2"));
    }
    if n_deg < 1 {
        return Err(Error::input("the branch polynomial must be nonconstant"));
    }
    if let Some(p) = char_p {
        if ell % p == 0 {
            return Err(Error::input(format!(
                "wildly ramified cover: the characteristic {p} divides ell = {ell}"
            )));
        }
    }
    let twice = (ell - 1) * (n_deg - 1) + 1 - gcd_u64(ell, n_deg);
    debug_assert_eq!(twice % 2, 0);
    Ok(twice / 2)
}

/// Certificate that a quadratic map stays genuinely t-dependent under any
/// finite extension of the constant field: Y^2 = phi^3(X) is smooth of
/// genus 3 and maps onto the marked cubic, so a nonconstant j-invariant
/// there rules out isotriviality of the cover.
#[derive(Debug, Clone)]
pub struct NonIsotrivialityCert {
    pub ell: u64,
    /// Iterate used for the double cover; 3 is the smallest with genus >= 2.
    pub m: usize,
    pub genus: u64,
    /// phi^m is squarefree, so the cover is a smooth curve.
    pub squarefree_ok: bool,
    /// j of the curve marked at the critical value, when it exists.
    pub j: Option<RatFunc>,
    pub j_nonconstant: bool,
    pub valid: bool,
}

pub fn certify_nonisotrivial(phi: &PolyMap, max_degree: usize) -> Result<NonIsotrivialityCert> {
    let data = phi.quadratic_data()?;
    let m = 3usize;
    let n_deg = 1u64 << m;
    let genus = genus_superelliptic(n_deg, 2, Some(phi.field().p()))?;
    let squarefree_ok = phi.iterate_is_separable(m, max_degree)?;
    let critical_value = phi.apply(&data.critical_point);
    // The only failure of the marked model for a quadratic is a zero
    // discriminant, which leaves no smooth curve and no j to test.
    let (j, j_nonconstant) = match marked_cubic_curve(phi, &critical_value) {
        Ok(info) => {
            let nonconstant = !info.j().is_constant();
            (Some(info.j().clone()), nonconstant)
        }
        Err(_) => (None, false),
    };
    let valid = squarefree_ok && j_nonconstant && genus >= 2;
    Ok(NonIsotrivialityCert {
        ell: 2,
        m,
        genus,
        squarefree_ok,
        j,
        j_nonconstant,
        valid,
    })
}

/// How far the iterates are certified irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrreducibleHorizon {
    UpTo(usize),
    /// Every iterate; only the family verifier's structural argument
    /// upgrades a finite prefix to this.
    All,
}

impl fmt::Display for IrreducibleHorizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleHorizon::UpTo(n) => write!(f, "n <= {n}"),
            IrreducibleHorizon::All => write!(f, "all n"),
        }
    }
}

/// One entry of the adjusted critical orbit together with its square test:
/// n = 1 holds -phi(gamma), and n >= 2 holds phi^n(gamma). If the first k
/// entries are nonsquares in K then phi, phi^2, ..., phi^k are irreducible
/// over K.
#[derive(Debug, Clone)]
pub struct LevelCheck {
    pub n: usize,
    pub value: RatFunc,
    pub nonsquare: bool,
}

/// Irreducibility certificate for the iterate tower.
#[derive(Debug, Clone)]
pub struct GaloisCert {
    pub levels: Vec<LevelCheck>,
    pub certified_irreducible_through: IrreducibleHorizon,
}

fn adjusted_orbit_levels(phi: &PolyMap, gamma: &RatFunc, n_max: usize) -> Result<Vec<LevelCheck>> {
    let mut orbit = phi.orbit(gamma.clone());
    let mut levels = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let value = if n == 1 {
            orbit.value(1)?.neg()
        } else {
            orbit.value(n)?
        };
        let nonsquare = !is_ellth_power(&value, 2)?;
        levels.push(LevelCheck { n, value, nonsquare });
    }
    Ok(levels)
}

/// The three checkable conditions under which every large index in the
/// critical orbit carries a 2-primitive prime divisor and the iterate
/// Galois groups have finite index: a wandering critical point, no squares
/// in the adjusted critical orbit, and a nonconstant j-invariant on the
/// marked cubic. The square checks are a finite prefix, so `galois` never
/// certifies more than the horizon it saw.
#[derive(Debug, Clone)]
pub struct OrbitConditions {
    pub critical_point: RatFunc,
    pub critical_class: PointClass,
    pub critical_wandering: bool,
    pub first_square_level: Option<usize>,
    pub j: Option<RatFunc>,
    pub j_nonconstant: bool,
    pub galois: GaloisCert,
    pub all_hold: bool,
}

pub fn zsigmondy_finiteness_conditions(
    phi: &PolyMap,
    n_max: usize,
    max_steps: usize,
) -> Result<OrbitConditions> {
    let data = phi.quadratic_data()?;
    if !phi.as_kpoly().is_monic() {
        return Err(Error::input(
            "the orbit conditions are stated for monic quadratics; conjugate the map first",
        ));
    }
    if n_max < 1 {
        return Err(Error::input("the square-test horizon must be at least 1"));
    }
    let critical_class = phi.classify_point(&data.critical_point, max_steps)?;
    let critical_wandering = !critical_class.is_preperiodic();
    let levels = adjusted_orbit_levels(phi, &data.critical_point, n_max)?;
    let first_square_level = levels.iter().find(|l| !l.nonsquare).map(|l| l.n);
    let certified = match first_square_level {
        None => n_max,
        Some(k) => k - 1,
    };
    let critical_value = phi.apply(&data.critical_point);
    let (j, j_nonconstant) = match marked_cubic_curve(phi, &critical_value) {
        Ok(info) => {
            let nonconstant = !info.j().is_constant();
            (Some(info.j().clone()), nonconstant)
        }
        Err(_) => (None, false),
    };
    let all_hold = critical_wandering && first_square_level.is_none() && j_nonconstant;
    Ok(OrbitConditions {
        critical_point: data.critical_point,
        critical_class,
        critical_wandering,
        first_square_level,
        j,
        j_nonconstant,
        galois: GaloisCert {
            levels,
            certified_irreducible_through: IrreducibleHorizon::UpTo(certified),
        },
        all_hold,
    })
}

/// Parameters of the verified family (x - f * g^dexp)^2 + g with
/// polynomial f, g and dexp >= 1.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    pub f: Poly,
    pub g: Poly,
    pub dexp: usize,
}

impl FamilyParams {
    pub fn new(f: Poly, g: Poly, dexp: usize) -> Result<FamilyParams> {
        if dexp == 0 {
            return Err(Error::input("the family exponent must be at least 1"));
        }
        Ok(FamilyParams { f, g, dexp })
    }

    /// The map (x - f * g^dexp)^2 + g.
    pub fn map(&self) -> Result<PolyMap> {
        if self.dexp == 0 {
            return Err(Error::input("the family exponent must be at least 1"));
        }
        let shift = RatFunc::from_poly(self.f.mul(&self.g.pow(self.dexp)));
        let g = RatFunc::from_poly(self.g.clone());
        let field = g.field().clone();
        PolyMap::from_coeffs(
            &field,
            vec![
                shift.mul(&shift).add(&g),
                shift.scale_int(-2),
                RatFunc::one(&field),
            ],
        )
    }
}

/// Outcome of checking a family instance. Acceptance needs -g to be a
/// nonsquare and the marked cubic to have nonconstant j-invariant; the
/// structural argument then certifies every iterate irreducible, not just
/// a prefix, and the generic orbit conditions are re-checked on a prefix
/// as a consistency report.
#[derive(Debug, Clone)]
pub struct FamilyCert {
    pub params: FamilyParams,
    pub map: PolyMap,
    pub accepted: bool,
    pub reject_reason: Option<String>,
    /// When -g is a square, a square root witnessing the rejection.
    pub square_witness: Option<RatFunc>,
    /// Set when f * g^(dexp - 1) = 1, which forces j = 1728.
    pub unit_degenerate: bool,
    pub j: Option<RatFunc>,
    pub galois: Option<GaloisCert>,
    pub conditions: Option<OrbitConditions>,
}

fn family_rejection(
    params: &FamilyParams,
    map: PolyMap,
    reason: &str,
    square_witness: Option<RatFunc>,
    unit_degenerate: bool,
    j: Option<RatFunc>,
) -> FamilyCert {
    FamilyCert {
        params: params.clone(),
        map,
        accepted: false,
        reject_reason: Some(reason.to_string()),
        square_witness,
        unit_degenerate,
        j,
        galois: None,
        conditions: None,
    }
}

pub fn verify_family_instance(
    params: &FamilyParams,
    cross_check_n: usize,
    max_steps: usize,
) -> Result<FamilyCert> {
    let map = params.map()?;
    let neg_g = RatFunc::from_poly(params.g.neg());
    if is_ellth_power(&neg_g, 2)? {
        let witness = ellth_root(&neg_g, 2)?;
        return Ok(family_rejection(
            params,
            map,
            "-g is a square in F_q(t), so the family assumption fails",
            witness,
            false,
            None,
        ));
    }
    // After the nonsquare check g != 0 and g - f * g^dexp has no square
    // root, which is exactly what a vanishing discriminant of the marked
    // cubic would require; the curve below therefore always exists.
    let g = RatFunc::from_poly(params.g.clone());
    let j = match marked_cubic_curve(&map, &g) {
        Ok(info) => Some(info.j().clone()),
        Err(_) => None,
    };
    let unit_degenerate = params.f.mul(&params.g.pow(params.dexp - 1)).is_one();
    if unit_degenerate {
        return Ok(family_rejection(
            params,
            map,
            "f * g^(dexp-1) = 1: the map is (x - g)^2 + g and the marked cubic has j = 1728",
            None,
            true,
            j,
        ));
    }
    let j_nonconstant = matches!(&j, Some(v) if !v.is_constant());
    if !j_nonconstant {
        return Ok(family_rejection(
            params,
            map,
            "the marked cubic has constant j-invariant",
            None,
            false,
            j,
        ));
    }
    let conditions = zsigmondy_finiteness_conditions(&map, cross_check_n, max_steps)?;
    let galois = GaloisCert {
        levels: conditions.galois.levels.clone(),
        certified_irreducible_through: IrreducibleHorizon::All,
    };
    Ok(FamilyCert {
        params: params.clone(),
        map,
        accepted: true,
        reject_reason: None,
        square_witness: None,
        unit_degenerate: false,
        j,
        galois: Some(galois),
        conditions: Some(conditions),
    })
}

/// Checkable hypotheses under which some power-free exponent ell should
/// make the iterate covers non-isotrivial of large genus: a genuinely
/// t-dependent map, not a conjugate of the pure power map, map degree
/// prime to the field order, and separable iterates on a prefix. The
/// conjugacy test is implemented for quadratics only.
#[derive(Debug, Clone)]
pub struct StabilityHypotheses {
    pub degree: usize,
    /// Some coefficient lies outside the constant field.
    pub coefficients_nonconstant: bool,
    /// None when the conjugacy test is out of scope (degree > 2).
    pub not_conjugate_to_power_map: Option<bool>,
    pub degree_coprime_to_field_order: bool,
    pub separable_levels: Vec<(usize, bool)>,
    pub first_inseparable: Option<usize>,
    /// Some(true) when every hypothesis verifiably holds, Some(false) on a
    /// definite failure, None when the only gap is the unsupported
    /// conjugacy test.
    pub all_hold: Option<bool>,
}

pub fn stability_hypotheses(
    phi: &PolyMap,
    prefix_n: usize,
    max_degree: usize,
) -> Result<StabilityHypotheses> {
    let d = phi.degree();
    let coefficients_nonconstant = phi
        .as_kpoly()
        .coeffs()
        .iter()
        .any(|c| !c.is_constant());
    let not_conjugate_to_power_map = if d == 2 {
        Some(!phi.quadratic_data()?.conjugate_to_square())
    } else {
        None
    };
    let degree_coprime_to_field_order = d as u64 % phi.field().p() != 0;
    let mut separable_levels = Vec::with_capacity(prefix_n);
    for n in 1..=prefix_n {
        separable_levels.push((n, phi.iterate_is_separable(n, max_degree)?));
    }
    let first_inseparable = separable_levels
        .iter()
        .find(|(_, separable)| !separable)
        .map(|(n, _)| *n);
    let definite_failure = !coefficients_nonconstant
        || not_conjugate_to_power_map == Some(false)
        || !degree_coprime_to_field_order
        || first_inseparable.is_some();
    let all_hold = if definite_failure {
        Some(false)
    } else if not_conjugate_to_power_map.is_none() {
        None
    } else {
        Some(true)
    };
    Ok(StabilityHypotheses {
        degree: d,
        coefficients_nonconstant,
        not_conjugate_to_power_map,
        degree_coprime_to_field_order,
        separable_levels,
        first_inseparable,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, FieldSpec, FqElem};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime(3).unwrap()
    }

    fn f5() -> Arc<FieldSpec> {
        FieldSpec::prime(5).unwrap()
    }

    fn f9() -> Arc<FieldSpec> {
        FieldSpec::extension(3, vec![1, 0, 1]).unwrap()
    }

    fn rf(field: &Arc<FieldSpec>, coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_ints(field, coeffs))
    }

    fn map_from_ints(field: &Arc<FieldSpec>, coeffs: &[&[i64]]) -> PolyMap {
        let coeffs = coeffs.iter().map(|c| rf(field, c)).collect();
        PolyMap::from_coeffs(field, coeffs).unwrap()
    }

    fn x2_plus_t(field: &Arc<FieldSpec>) -> PolyMap {
        map_from_ints(field, &[&[0, 1], &[], &[1]])
    }

    // (x - t)^2 + t, the map with a fixed critical point.
    fn fixed_critical(field: &Arc<FieldSpec>) -> PolyMap {
        map_from_ints(field, &[&[0, 1, 1], &[0, -2], &[1]])
    }

    fn random_elem(field: &Arc<FieldSpec>, rng: &mut ChaCha8Rng) -> FqElem {
        let coords = (0..field.ext_degree())
            .map(|_| rng.gen_range(0..field.p()))
            .collect();
        field.element(coords).unwrap()
    }

    fn random_poly(field: &Arc<FieldSpec>, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs = (0..=deg).map(|_| random_elem(field, rng)).collect();
        DensePoly::new(&field.zero(), coeffs)
    }

    #[test]
    fn tate_identity_on_random_marked_cubics() {
        for field in [f5(), f9()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut smooth = 0;
            for _ in 0..100 {
                let mut a2 = random_poly(&field, &mut rng, 2);
                while a2.is_zero() {
                    a2 = random_poly(&field, &mut rng, 2);
                }
                let coeffs = vec![
                    RatFunc::from_poly(random_poly(&field, &mut rng, 2)),
                    RatFunc::from_poly(random_poly(&field, &mut rng, 2)),
                    RatFunc::from_poly(a2),
                ];
                let phi = PolyMap::from_coeffs(&field, coeffs).unwrap();
                let c = RatFunc::from_poly(random_poly(&field, &mut rng, 2));
                let Ok(curve) = marked_cubic_curve(&phi, &c) else {
                    continue;
                };
                smooth += 1;
                let lhs = curve.c4().pow(3).unwrap().sub(&curve.c6().mul(curve.c6()));
                assert_eq!(lhs, curve.discriminant().scale_int(1728));
                assert_eq!(
                    curve.j().mul(curve.discriminant()),
                    curve.c4().pow(3).unwrap()
                );
            }
            assert!(smooth >= 80, "only {smooth} smooth samples");
        }
    }

    #[test]
    fn fixed_critical_value_curve_has_j_1728() {
        let field = f5();
        let curve = critical_value_curve(&fixed_critical(&field)).unwrap();
        assert_eq!(curve.discriminant(), &rf(&field, &[0, 0, 0, 1]));
        assert_eq!(curve.c4(), &rf(&field, &[0, 2]));
        assert!(curve.j_equals_1728());
        assert_eq!(curve.j(), &RatFunc::from_int(&field, 1728));

        let field = f3();
        let curve = critical_value_curve(&fixed_critical(&field)).unwrap();
        assert_eq!(curve.discriminant(), &rf(&field, &[0, 0, 0, 2]));
        assert!(curve.c4().is_zero());
        // 1728 = 0 in characteristic 3, so j = 0 here.
        assert!(curve.j_equals_1728());
        assert!(curve.j().is_zero());
    }

    #[test]
    fn generic_map_has_nonconstant_j() {
        let field = f5();
        let curve = critical_value_curve(&x2_plus_t(&field)).unwrap();
        let expected = RatFunc::new(
            Poly::from_ints(&field, &[-2, 2, 1, 1]),
            Poly::from_ints(&field, &[1, 2, 1]),
        )
        .unwrap();
        assert_eq!(curve.j(), &expected);
        assert!(!curve.j().is_constant());

        let field = f3();
        let curve = critical_value_curve(&x2_plus_t(&field)).unwrap();
        let expected = RatFunc::new(
            Poly::from_ints(&field, &[0, 0, 0, 2]),
            Poly::from_ints(&field, &[1, 2, 1]),
        )
        .unwrap();
        assert_eq!(curve.j(), &expected);
        assert!(!curve.j_equals_1728());
    }

    #[test]
    fn j_unchanged_by_translation_and_scaling() {
        let field = f5();
        let base = critical_value_curve(&x2_plus_t(&field)).unwrap();
        let cubic = base.cubic().clone();
        let one = cubic.proto().one_like();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let r = RatFunc::from_poly(random_poly(&field, &mut rng, 3));
            let shifted = DensePoly::new(cubic.proto(), vec![r, one.clone()]);
            let translated = cubic.eval_poly(&shifted);
            let curve = EllipticCurveInfo::from_cubic(&translated).unwrap();
            assert_eq!(curve.j(), base.j());
        }
        for lam in [rf(&field, &[2]), rf(&field, &[0, 1]), rf(&field, &[1, 1])] {
            let scaled = cubic.scale(&lam);
            let curve = EllipticCurveInfo::from_cubic(&scaled).unwrap();
            assert_eq!(curve.j(), base.j());
        }
    }

    #[test]
    fn genus_matches_hyperelliptic_floor() {
        for n in 3..=20u64 {
            assert_eq!(genus_superelliptic(n, 2, Some(5)).unwrap(), (n - 1) / 2);
        }
    }

    #[test]
    fn genus_examples_and_tameness() {
        assert_eq!(genus_superelliptic(3, 2, Some(5)).unwrap(), 1);
        assert_eq!(genus_superelliptic(8, 2, Some(5)).unwrap(), 3);
        assert_eq!(genus_superelliptic(4, 3, Some(5)).unwrap(), 3);
        assert_eq!(genus_superelliptic(8, 2, None).unwrap(), 3);
        // the iterate double covers Y^2 = phi^m(X) for a quadratic map
        for m in [2u32, 3, 4] {
            let g = genus_superelliptic(1 << m, 2, Some(3)).unwrap();
            assert_eq!(g, (1 << (m - 1)) - 1);
        }
        assert!(genus_superelliptic(4, 3, Some(3)).is_err());
        assert!(genus_superelliptic(4, 1, Some(3)).is_err());
    }

    #[test]
    fn nonisotriviality_accepts_generic_map() {
        let field = f5();
        let cert = certify_nonisotrivial(&x2_plus_t(&field), 64).unwrap();
        assert_eq!(cert.ell, 2);
        assert_eq!(cert.m, 3);
        assert_eq!(cert.genus, 3);
        assert!(cert.squarefree_ok);
        assert!(cert.j_nonconstant);
        assert!(cert.valid);
    }

    #[test]
    fn nonisotriviality_rejects_constant_j() {
        for field in [f5(), f3()] {
            let cert = certify_nonisotrivial(&fixed_critical(&field), 64).unwrap();
            assert!(cert.squarefree_ok);
            assert!(!cert.j_nonconstant);
            assert!(!cert.valid);
            let j = cert.j.expect("smooth marked cubic");
            assert_eq!(j, RatFunc::from_int(&field, 1728));
        }
    }

    #[test]
    fn nonisotriviality_rejects_pure_square() {
        let field = f3();
        let phi = map_from_ints(&field, &[&[], &[], &[1]]);
        let cert = certify_nonisotrivial(&phi, 64).unwrap();
        assert!(!cert.squarefree_ok);
        assert!(cert.j.is_none());
        assert!(!cert.valid);
    }

    #[test]
    fn orbit_conditions_hold_for_generic_map() {
        let field = f3();
        let cond = zsigmondy_finiteness_conditions(&x2_plus_t(&field), 6, 10_000).unwrap();
        assert!(cond.critical_wandering);
        assert_eq!(cond.first_square_level, None);
        assert!(cond.j_nonconstant);
        assert!(cond.all_hold);
        assert_eq!(cond.galois.levels.len(), 6);
        assert_eq!(
            cond.galois.certified_irreducible_through,
            IrreducibleHorizon::UpTo(6)
        );
        // level 1 is -phi(0) = -t
        assert_eq!(cond.galois.levels[0].value, rf(&field, &[0, -1]));
    }

    #[test]
    fn orbit_conditions_catch_square_level() {
        let field = f3();
        // x^2 - t^2 has -phi(0) = t^2, a square
        let phi = map_from_ints(&field, &[&[0, 0, -1], &[], &[1]]);
        let cond = zsigmondy_finiteness_conditions(&phi, 5, 10_000).unwrap();
        assert_eq!(cond.first_square_level, Some(1));
        assert_eq!(
            cond.galois.certified_irreducible_through,
            IrreducibleHorizon::UpTo(0)
        );
        assert!(!cond.all_hold);
    }

    #[test]
    fn orbit_conditions_on_fixed_critical_map() {
        let field = f3();
        let cond = zsigmondy_finiteness_conditions(&fixed_critical(&field), 6, 10_000).unwrap();
        assert!(!cond.critical_wandering);
        assert_eq!(cond.critical_class, PointClass::Preperiodic { preperiod: 0, period: 1 });
        // the adjusted orbit is -t, t, t, ... with no squares, so the
        // iterates are still certified irreducible through the horizon
        assert_eq!(cond.first_square_level, None);
        assert_eq!(
            cond.galois.certified_irreducible_through,
            IrreducibleHorizon::UpTo(6)
        );
        assert!(!cond.j_nonconstant);
        assert!(!cond.all_hold);
    }

    #[test]
    fn orbit_conditions_require_monic() {
        let field = f5();
        let phi = map_from_ints(&field, &[&[0, 1], &[], &[2]]);
        assert!(zsigmondy_finiteness_conditions(&phi, 4, 10_000).is_err());
    }

    #[test]
    fn family_accepts_classic_instance() {
        let field = f3();
        let params = FamilyParams::new(
            Poly::from_ints(&field, &[]),
            Poly::from_ints(&field, &[0, 1]),
            1,
        )
        .unwrap();
        let cert = verify_family_instance(&params, 6, 10_000).unwrap();
        assert!(cert.accepted);
        assert_eq!(cert.map, x2_plus_t(&field));
        assert!(cert.square_witness.is_none());
        let galois = cert.galois.expect("accepted instances carry a certificate");
        assert_eq!(
            galois.certified_irreducible_through,
            IrreducibleHorizon::All
        );
        assert_eq!(galois.certified_irreducible_through.to_string(), "all n");
        assert!(cert.conditions.unwrap().all_hold);
    }

    #[test]
    fn family_rejects_unit_degenerate_instance() {
        let field = f3();
        let params = FamilyParams::new(
            Poly::from_ints(&field, &[1]),
            Poly::from_ints(&field, &[0, 1]),
            1,
        )
        .unwrap();
        let cert = verify_family_instance(&params, 6, 10_000).unwrap();
        assert!(!cert.accepted);
        assert!(cert.unit_degenerate);
        assert_eq!(cert.map, fixed_critical(&field));
        assert_eq!(cert.j, Some(RatFunc::from_int(&field, 1728)));
        assert!(cert.reject_reason.unwrap().contains("1728"));
    }

    #[test]
    fn family_rejects_square_neg_g() {
        let field = f5();
        // g = -t^2, so -g = t^2 is a square
        let params = FamilyParams::new(
            Poly::from_ints(&field, &[]),
            Poly::from_ints(&field, &[0, 0, -1]),
            1,
        )
        .unwrap();
        let cert = verify_family_instance(&params, 6, 10_000).unwrap();
        assert!(!cert.accepted);
        let witness = cert.square_witness.expect("square root witness");
        assert_eq!(
            witness.mul(&witness),
            RatFunc::from_poly(params.g.neg())
        );
    }

    #[test]
    fn family_rejects_constant_instance() {
        let field = f3();
        // f = 0, g = 1: -g = -1 is a nonsquare in F_3 but j is constant
        let params = FamilyParams::new(
            Poly::from_ints(&field, &[]),
            Poly::from_ints(&field, &[1]),
            1,
        )
        .unwrap();
        let cert = verify_family_instance(&params, 6, 10_000).unwrap();
        assert!(!cert.accepted);
        assert!(!cert.unit_degenerate);
        assert!(cert.square_witness.is_none());
        let j = cert.j.expect("the marked cubic is smooth");
        assert!(j.is_constant());
    }

    #[test]
    fn family_instances_pass_prefix_conditions() {
        let cases = [
            (f3(), vec![], vec![0, 1], 1),
            (f3(), vec![0, 1], vec![0, 1], 1),
            (f5(), vec![1], vec![1, 1], 2),
        ];
        for (field, f, g, dexp) in cases {
            let params = FamilyParams::new(
                Poly::from_ints(&field, &f),
                Poly::from_ints(&field, &g),
                dexp,
            )
            .unwrap();
            let cert = verify_family_instance(&params, 6, 10_000).unwrap();
            assert!(cert.accepted, "instance f={f:?} g={g:?} dexp={dexp}");
            assert!(cert.conditions.unwrap().all_hold);
        }
    }

    #[test]
    fn family_exponent_must_be_positive() {
        let field = f3();
        assert!(FamilyParams::new(
            Poly::from_ints(&field, &[]),
            Poly::from_ints(&field, &[0, 1]),
            0
        )
        .is_err());
    }

    #[test]
    fn stability_hypotheses_examples() {
        let f3 = f3();
        let f5 = f5();

        let report = stability_hypotheses(&x2_plus_t(&f3), 4, 64).unwrap();
        assert!(report.coefficients_nonconstant);
        assert_eq!(report.not_conjugate_to_power_map, Some(true));
        assert!(report.degree_coprime_to_field_order);
        assert_eq!(report.first_inseparable, None);
        assert_eq!(report.all_hold, Some(true));

        // x^3 + t in characteristic 3: wrong degree parity and inseparable
        let cubic = map_from_ints(&f3, &[&[0, 1], &[], &[], &[1]]);
        let report = stability_hypotheses(&cubic, 2, 64).unwrap();
        assert!(!report.degree_coprime_to_field_order);
        assert_eq!(report.first_inseparable, Some(1));
        assert_eq!(report.all_hold, Some(false));

        // the same map over F_5 is fine except the conjugacy test is out
        // of scope for cubics
        let cubic = map_from_ints(&f5, &[&[0, 1], &[], &[], &[1]]);
        let report = stability_hypotheses(&cubic, 2, 64).unwrap();
        assert!(report.degree_coprime_to_field_order);
        assert_eq!(report.first_inseparable, None);
        assert_eq!(report.not_conjugate_to_power_map, None);
        assert_eq!(report.all_hold, None);

        // x^2 is conjugate to itself and fully constant
        let square = map_from_ints(&f5, &[&[], &[], &[1]]);
        let report = stability_hypotheses(&square, 2, 64).unwrap();
        assert!(!report.coefficients_nonconstant);
        assert_eq!(report.not_conjugate_to_power_map, Some(false));
        assert_eq!(report.all_hold, Some(false));
    }

    #[test]
    fn marked_cubic_requires_quadratic() {
        let field = f5();
        let cubic = map_from_ints(&field, &[&[0, 1], &[], &[], &[1]]);
        let c = rf(&field, &[0, 1]);
        assert!(marked_cubic_curve(&cubic, &c).is_err());
    }
}
