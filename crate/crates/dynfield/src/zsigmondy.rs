//! Primitive prime divisors along orbits.
//!
//! For an orbit b, phi(b), phi^2(b), ... a place P is primitive at index n
//! when v_P(phi^n(b)) > 0 and v_P(phi^m(b)) = 0 for every earlier index
//! 1 <= m < n with phi^m(b) nonzero. It is l-primitive when additionally
//! v_P(phi^n(b)) is not divisible by l. The indices in [1, N] that have no
//! l-primitive divisor outside a fixed place set S form the horizon-N slice
//! of the Zsigmondy set computed here.
//!
//! Orbit values that are exactly zero at tested indices are removed by
//! advancing the base point: the report records the smallest shift s with
//! phi^n(phi^s(b)) nonzero for all n in [1, N]. A zero at index 0 is
//! harmless (no condition ever consults it), so a zero base is analyzed
//! unshifted when its forward values are nonzero.

use crate::dynamics::{Orbit, PolyMap};
use crate::error::{Error, Result};
use crate::factor::{factor, FactoredPoly};
use crate::places::{ell_free_decomposition, Place, PlaceSet};
use crate::ratfunc::RatFunc;

/// How far the base may be advanced while hunting for a zero-free window.
const MAX_SHIFT: usize = 64;

/// Step budget for the wandering/preperiodic warning classification.
const CLASSIFY_STEPS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct OrbitFactorRecord {
    pub n: usize,
    pub value: RatFunc,
    pub numerator_factorization: FactoredPoly,
    pub primitive: Vec<Place>,
    pub ell_primitive: Vec<Place>,
}

#[derive(Debug, Clone)]
pub struct ZsigReport {
    pub map: PolyMap,
    pub base: RatFunc,
    pub shifted_base: RatFunc,
    pub shift: usize,
    pub ell: u64,
    pub excluded: PlaceSet,
    pub horizon: usize,
    pub finite_only: bool,
    /// n in [1, N] with no l-primitive divisor outside `excluded`.
    pub members: Vec<usize>,
    /// n in [1, N] with no primitive divisor at all outside `excluded`.
    pub plain_members: Vec<usize>,
    pub records: Vec<OrbitFactorRecord>,
    /// Exact orbit classification of the (shifted) base, when it resolved
    /// within the internal step budget.
    pub base_wandering: Option<bool>,
}

#[derive(Debug, Clone, Default)]
pub struct ZsigOptions {
    /// Places to ignore; defaults to the map's standard exclusions.
    pub excluded: Option<PlaceSet>,
    /// Drop the infinite place from consideration entirely.
    pub finite_only: bool,
}

/// Places that are primitive at index n for this orbit, outside `excluded`,
/// sorted canonically. The infinite place is a candidate only when its
/// valuation is positive.
pub fn primitive_divisors(
    orbit: &mut Orbit,
    n: usize,
    excluded: &PlaceSet,
) -> Result<Vec<Place>> {
    divisors_at(orbit, n, excluded, None)
}

/// As [`primitive_divisors`] with the extra condition v not divisible by l.
pub fn ell_primitive_divisors(
    orbit: &mut Orbit,
    n: usize,
    excluded: &PlaceSet,
    ell: u64,
) -> Result<Vec<Place>> {
    divisors_at(orbit, n, excluded, Some(ell))
}

fn divisors_at(
    orbit: &mut Orbit,
    n: usize,
    excluded: &PlaceSet,
    ell: Option<u64>,
) -> Result<Vec<Place>> {
    if n == 0 {
        return Err(Error::input("divisor indices start at 1"));
    }
    let value = orbit.value(n)?;
    if value.is_zero() {
        return Err(Error::input(format!(
            "orbit value at index {n} is zero; shift the base first"
        )));
    }
    let mut out = Vec::new();
    'candidates: for (place, v) in orbit.support(n)? {
        if v <= 0 || excluded.contains(&place) {
            continue;
        }
        if let Some(ell) = ell {
            if v.rem_euclid(ell as i64) == 0 {
                continue;
            }
        }
        for m in 1..n {
            // earlier zero values are skipped: they impose no condition
            match orbit.valuation(&place, m)? {
                Some(vm) if vm != 0 => continue 'candidates,
                _ => {}
            }
        }
        out.push(place);
    }
    Ok(out)
}

/// Smallest shift s <= MAX_SHIFT with phi^n(phi^s(b)) nonzero for all n in
/// [1, horizon], found by scanning one orbit of the original base.
fn find_shift(map: &PolyMap, base: &RatFunc, horizon: usize) -> Result<usize> {
    let mut orbit = map.orbit(base.clone());
    let mut s = 0usize;
    while s <= MAX_SHIFT {
        let mut ok = true;
        for n in 1..=horizon {
            let v = orbit.value(s + n)?;
            if v.is_zero() {
                // restart the window past this zero
                s = s + n;
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(s);
        }
        // a fixed zero never escapes
        if orbit.value(s)?.is_zero() && orbit.value(s + 1)?.is_zero() {
            return Err(Error::input(
                "zero is periodic for this map; no shift removes it from the orbit",
            ));
        }
    }
    Err(Error::input(format!(
        "no zero-free window of length {horizon} within {MAX_SHIFT} shifts"
    )))
}

/// Compute the horizon-N slice of the Zsigmondy set Z(phi, b, l) relative to
/// the place set S, with full per-index records.
pub fn zsigmondy_set(
    map: &PolyMap,
    base: &RatFunc,
    ell: u64,
    horizon: usize,
    options: &ZsigOptions,
) -> Result<ZsigReport> {
    if ell < 2 {
        return Err(Error::input("l must be at least 2"));
    }
    if ell % map.field().p() == 0 {
        return Err(Error::input(format!(
            "l = {ell} is divisible by the characteristic {}",
            map.field().p()
        )));
    }
    let mut excluded = match &options.excluded {
        Some(s) => s.clone(),
        None => map.excluded_places(base)?,
    };
    if options.finite_only {
        excluded.insert(Place::Infinite);
    }

    let shift = if horizon == 0 {
        0
    } else {
        find_shift(map, base, horizon)?
    };
    let shifted_base = map.iterate_value(base, shift)?;
    let mut orbit = map.orbit(shifted_base.clone());

    let mut members = Vec::new();
    let mut plain_members = Vec::new();
    let mut records = Vec::new();
    for n in 1..=horizon {
        let value = orbit.value(n)?;
        let numerator_factorization = factor(value.numerator(), 0)?;
        let primitive = primitive_divisors(&mut orbit, n, &excluded)?;
        let ell_primitive = ell_primitive_divisors(&mut orbit, n, &excluded, ell)?;
        if ell_primitive.is_empty() {
            members.push(n);
        }
        if primitive.is_empty() {
            plain_members.push(n);
        }
        records.push(OrbitFactorRecord {
            n,
            value,
            numerator_factorization,
            primitive,
            ell_primitive,
        });
    }

    // a preperiodic base recycles finitely many values and the finiteness
    // statements do not apply, but the report itself stays well-defined, so
    // that case is flagged rather than rejected
    let base_wandering = match map.classify_point(&shifted_base, CLASSIFY_STEPS) {
        Ok(class) => Some(!class.is_preperiodic()),
        Err(_) => None,
    };

    Ok(ZsigReport {
        map: map.clone(),
        base: base.clone(),
        shifted_base,
        shift,
        ell,
        excluded,
        horizon,
        finite_only: options.finite_only,
        members,
        plain_members,
        records,
        base_wandering,
    })
}

/// Height-bound check for each member index n of a report.
///
/// d_n is the l-free part of the numerator of phi^n(b): the product of its
/// primes to exponents reduced mod l. The certified inequality is
///
///   h(d_n) <= (l - 1) * ( sum_{i <= n/2} h(phi^i(b)) + sum_{j <= n/2} h(phi^j(0)) )
///
/// and as a refinement every prime of d_n must divide some phi^t(b) or
/// phi^t(0) with t <= n/2 (a zero value counts as divisible by everything).
/// Both are verified; the returned flag is their conjunction. Any false is
/// an implementation bug, not new mathematics.
pub fn check_dn_height_bound(report: &ZsigReport) -> Result<Vec<(usize, bool)>> {
    let map = &report.map;
    let field = map.field().clone();
    let mut orbit_b = map.orbit(report.shifted_base.clone());
    let mut orbit_0 = map.orbit(RatFunc::zero(&field));
    let mut out = Vec::new();
    for &n in &report.members {
        let value = orbit_b.value(n)?;
        let num = RatFunc::from_poly(value.numerator().clone());
        let dn = ell_free_decomposition(&num, report.ell)?.reduced;
        let half = n / 2;

        let mut rhs = 0usize;
        for i in 0..=half {
            rhs += orbit_b.value(i)?.height();
            rhs += orbit_0.value(i)?.height();
        }
        let bound_ok = dn.height() <= (report.ell as usize - 1) * rhs;

        let mut refine_ok = true;
        'primes: for (place, _) in crate::places::support(&dn)? {
            let Place::Finite(_) = place else { continue };
            for t in 0..=half {
                for orbit in [&mut orbit_b, &mut orbit_0] {
                    let v = orbit.value(t)?;
                    if v.is_zero() || place.valuation(&v).unwrap() > 0 {
                        continue 'primes;
                    }
                }
            }
            refine_ok = false;
            break;
        }

        out.push((n, bound_ok && refine_ok));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::Poly;
    use std::sync::Arc;

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime(3).unwrap()
    }

    fn sq_plus_t(k: &Arc<FieldSpec>) -> PolyMap {
        PolyMap::from_coeffs(
            k,
            vec![RatFunc::var(k), RatFunc::zero(k), RatFunc::one(k)],
        )
        .unwrap()
    }

    fn monomial(k: &Arc<FieldSpec>, d: usize) -> PolyMap {
        let mut coeffs = vec![RatFunc::zero(k); d + 1];
        coeffs[d] = RatFunc::one(k);
        PolyMap::from_coeffs(k, coeffs).unwrap()
    }

    fn inf_only() -> PlaceSet {
        [Place::Infinite].into_iter().collect()
    }

    #[test]
    fn primitive_ladder_for_the_basic_orbit() {
        let k = f3();
        let phi = sq_plus_t(&k);
        let mut orbit = phi.orbit(RatFunc::zero(&k));
        let s = inf_only();
        assert_eq!(
            primitive_divisors(&mut orbit, 1, &s).unwrap(),
            vec![Place::finite(Poly::from_ints(&k, &[0, 1])).unwrap()]
        );
        assert_eq!(
            primitive_divisors(&mut orbit, 2, &s).unwrap(),
            vec![Place::finite(Poly::from_ints(&k, &[1, 1])).unwrap()]
        );
        assert_eq!(
            primitive_divisors(&mut orbit, 3, &s).unwrap(),
            vec![Place::finite(Poly::from_ints(&k, &[1, 1, 2, 1])).unwrap()]
        );
        // at n = 2 the only prime with odd valuation is the new one
        assert_eq!(
            ell_primitive_divisors(&mut orbit, 2, &s, 2).unwrap(),
            vec![Place::finite(Poly::from_ints(&k, &[1, 1])).unwrap()]
        );
    }

    #[test]
    fn even_valuations_are_not_ell_primitive() {
        let k = f3();
        // phi = x^2, base t: numerator of phi^n(t) is t^(2^n)
        let phi = monomial(&k, 2);
        let mut orbit = phi.orbit(RatFunc::var(&k));
        let s = inf_only();
        let t_place = Place::finite(Poly::from_ints(&k, &[0, 1])).unwrap();
        assert_eq!(
            primitive_divisors(&mut orbit, 1, &s).unwrap(),
            vec![t_place]
        );
        assert!(ell_primitive_divisors(&mut orbit, 1, &s, 2)
            .unwrap()
            .is_empty());
        // n = 2: t is old, nothing new
        assert!(primitive_divisors(&mut orbit, 2, &s).unwrap().is_empty());
    }

    #[test]
    fn zsigmondy_report_for_monomial_degenerate_case() {
        let k = f3();
        let phi = monomial(&k, 2);
        let report =
            zsigmondy_set(&phi, &RatFunc::var(&k), 2, 6, &ZsigOptions::default()).unwrap();
        assert_eq!(report.shift, 0);
        assert_eq!(report.members, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(report.plain_members, vec![2, 3, 4, 5, 6]);
        assert_eq!(report.base_wandering, Some(true));
        // plain membership implies l-membership
        for n in &report.plain_members {
            assert!(report.members.contains(n));
        }
        let checks = check_dn_height_bound(&report).unwrap();
        assert_eq!(checks.len(), 6);
        assert!(checks.iter().all(|&(_, ok)| ok));
    }

    #[test]
    fn zsigmondy_members_with_ell_three_skip_only_n1() {
        // v_t(phi^n(t)) = 2^n is never divisible by 3, so t is 3-primitive
        // only where it is primitive at all: n = 1
        let k5 = FieldSpec::prime(5).unwrap();
        let phi5 = monomial(&k5, 2);
        let report =
            zsigmondy_set(&phi5, &RatFunc::var(&k5), 3, 5, &ZsigOptions::default()).unwrap();
        assert_eq!(report.members, vec![2, 3, 4, 5]);
        let t5 = Poly::from_ints(&k5, &[0, 1]);
        for (n, want_exp) in [(2usize, 1usize), (3, 2), (4, 1), (5, 2)] {
            let value = report.records[n - 1].value.clone();
            let dn = ell_free_decomposition(
                &RatFunc::from_poly(value.numerator().clone()),
                3,
            )
            .unwrap()
            .reduced;
            assert_eq!(dn, RatFunc::from_poly(t5.pow(want_exp)));
        }
        let checks = check_dn_height_bound(&report).unwrap();
        assert!(checks.iter().all(|&(_, ok)| ok));
    }

    #[test]
    fn shift_skips_over_orbit_zeros() {
        let k = f3();
        // phi = x^2 - t^4 sends t^2 to 0; the zero-free window starts after it
        let t4 = RatFunc::from_poly(Poly::from_ints(&k, &[0, 0, 0, 0, 1]));
        let phi = PolyMap::from_coeffs(
            &k,
            vec![t4.neg(), RatFunc::zero(&k), RatFunc::one(&k)],
        )
        .unwrap();
        let base = RatFunc::from_poly(Poly::from_ints(&k, &[0, 0, 1]));
        let report = zsigmondy_set(&phi, &base, 2, 4, &ZsigOptions::default()).unwrap();
        assert_eq!(report.shift, 1);
        assert!(report.shifted_base.is_zero());
        for record in &report.records {
            assert!(!record.value.is_zero());
        }
        // n = 1: value -t^4 has only even valuations, so 1 is a member
        assert!(report.members.contains(&1));
        let checks = check_dn_height_bound(&report).unwrap();
        assert!(checks.iter().all(|&(_, ok)| ok));
    }

    #[test]
    fn periodic_zero_is_rejected() {
        let k = f3();
        let phi = monomial(&k, 2);
        assert!(zsigmondy_set(&phi, &RatFunc::zero(&k), 2, 3, &ZsigOptions::default()).is_err());
    }

    #[test]
    fn horizon_zero_gives_empty_report() {
        let k = f3();
        let phi = sq_plus_t(&k);
        let report =
            zsigmondy_set(&phi, &RatFunc::zero(&k), 2, 0, &ZsigOptions::default()).unwrap();
        assert!(report.members.is_empty());
        assert!(report.records.is_empty());
        assert_eq!(report.shift, 0);
    }

    #[test]
    fn monotone_under_horizon_growth() {
        let k = f3();
        let phi = sq_plus_t(&k);
        let small =
            zsigmondy_set(&phi, &RatFunc::zero(&k), 2, 3, &ZsigOptions::default()).unwrap();
        let large =
            zsigmondy_set(&phi, &RatFunc::zero(&k), 2, 6, &ZsigOptions::default()).unwrap();
        for n in 1..=3 {
            assert_eq!(
                small.members.contains(&n),
                large.members.contains(&n),
                "membership at {n} changed with the horizon"
            );
        }
    }

    #[test]
    fn finite_only_excludes_the_infinite_place() {
        let k = f3();
        // phi = x^2 + 1/t has excluded = {inf, t}; base 1/t^3 keeps v_inf
        // positive at n = 1: phi(1/t^3) = (t^5 + t^6)/t^6... checked via flag
        let phi = PolyMap::from_coeffs(
            &k,
            vec![
                RatFunc::var(&k).inv().unwrap(),
                RatFunc::zero(&k),
                RatFunc::one(&k),
            ],
        )
        .unwrap();
        let base = RatFunc::one(&k);
        let mut opts = ZsigOptions::default();
        opts.finite_only = true;
        let report = zsigmondy_set(&phi, &base, 2, 3, &opts).unwrap();
        assert!(report.excluded.contains(&Place::Infinite));
        for r in &report.records {
            assert!(!r.primitive.contains(&Place::Infinite));
        }
    }

    #[test]
    fn rejects_bad_ell() {
        let k = f3();
        let phi = sq_plus_t(&k);
        let zero = RatFunc::zero(&k);
        assert!(zsigmondy_set(&phi, &zero, 1, 3, &ZsigOptions::default()).is_err());
        assert!(zsigmondy_set(&phi, &zero, 3, 3, &ZsigOptions::default()).is_err());
        assert!(zsigmondy_set(&phi, &zero, 6, 3, &ZsigOptions::default()).is_err());
    }
}
