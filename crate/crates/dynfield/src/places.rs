//! Places of K = F_q(t) and valuations.
//!
//! The places of K over F_q are the monic irreducible polynomials in t
//! (finite places) together with the degree valuation at infinity. Every
//! nonzero element factors as unit * product of finite places, and the
//! degree-weighted valuations sum to zero (the product formula), which the
//! tests here exercise directly.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::FqElem;
use crate::poly::Poly;
use crate::ratfunc::{KPoly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// The place at infinity: v(f) = deg denominator - deg numerator.
    Infinite,
    /// A monic irreducible polynomial in t.
    Finite(Poly),
}

pub type PlaceSet = BTreeSet<Place>;

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Place::Infinite, Place::Infinite) => std::cmp::Ordering::Equal,
            (Place::Infinite, Place::Finite(_)) => std::cmp::Ordering::Less,
            (Place::Finite(_), Place::Infinite) => std::cmp::Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.canonical_cmp(b),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Place {
    pub fn finite(prime: Poly) -> Result<Place> {
        if !prime.is_monic() {
            return Err(Error::input(format!("place {prime} is not monic")));
        }
        if !crate::factor::is_irreducible(&prime)? {
            return Err(Error::input(format!("place {prime} is not irreducible")));
        }
        Ok(Place::Finite(prime))
    }

    /// Residue field degree over F_q: deg of the prime, 1 at infinity.
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinite => 1,
            Place::Finite(p) => p.degree().finite().expect("irreducible is nonzero"),
        }
    }

    /// Valuation of a rational function; None on the zero element.
    pub fn valuation(&self, x: &RatFunc) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(match self {
            Place::Infinite => {
                let dn = x.numerator().degree().finite().unwrap() as i64;
                let dd = x.denominator().degree().finite().unwrap() as i64;
                dd - dn
            }
            Place::Finite(p) => {
                poly_multiplicity(x.numerator(), p) as i64
                    - poly_multiplicity(x.denominator(), p) as i64
            }
        })
    }
}

/// Multiplicity of the irreducible `pi` in a nonzero polynomial.
fn poly_multiplicity(f: &Poly, pi: &Poly) -> usize {
    let mut g = f.clone();
    let mut m = 0;
    loop {
        let (q, r) = g.divmod(pi).expect("place is nonzero");
        if !r.is_zero() {
            return m;
        }
        m += 1;
        g = q;
    }
}

/// Full support of a nonzero element: every place with nonzero valuation,
/// in canonical place order, as (place, valuation) pairs.
pub fn support(x: &RatFunc) -> Result<Vec<(Place, i64)>> {
    if x.is_zero() {
        return Err(Error::input("the zero element has no support"));
    }
    let mut out: Vec<(Place, i64)> = Vec::new();
    for (p, e) in factor(x.numerator(), 0)?.factors() {
        out.push((Place::Finite(p.clone()), *e as i64));
    }
    for (p, e) in factor(x.denominator(), 0)?.factors() {
        out.push((Place::Finite(p.clone()), -(*e as i64)));
    }
    let vinf = Place::Infinite.valuation(x).unwrap();
    if vinf != 0 {
        out.push((Place::Infinite, vinf));
    }
    out.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(out)
}

/// The constant unit in the factorization x = u * prod p_i^(e_i) over monic
/// finite primes: the leading coefficient of the (monic-denominator) form.
pub fn unit_part(x: &RatFunc) -> Result<FqElem> {
    if x.is_zero() {
        return Err(Error::input("the zero element has no unit part"));
    }
    Ok(x.numerator().monic().1)
}

/// Whether a nonzero element is an l-th power in K. Requires l coprime to
/// the characteristic (the inseparable case is excluded by design): true
/// exactly when every valuation is divisible by l and the constant unit is
/// an l-th power in F_q.
pub fn is_ellth_power(x: &RatFunc, ell: u64) -> Result<bool> {
    Ok(ellth_root(x, ell)?.is_some())
}

/// An l-th root in K when one exists.
pub fn ellth_root(x: &RatFunc, ell: u64) -> Result<Option<RatFunc>> {
    if ell == 0 {
        return Err(Error::input("root index must be positive"));
    }
    let field = x.field().clone();
    if ell % field.p() == 0 {
        return Err(Error::input(format!(
            "root index {ell} is divisible by the characteristic {}",
            field.p()
        )));
    }
    if x.is_zero() {
        return Ok(Some(x.clone()));
    }
    let unit = unit_part(x)?;
    let Some(unit_root) = unit.nth_root(ell) else {
        return Ok(None);
    };
    let mut root = RatFunc::from_poly(crate::poly::DensePoly::constant(unit_root));
    for (place, e) in support(x)? {
        let Place::Finite(p) = place else { continue };
        if e.rem_euclid(ell as i64) != 0 {
            return Ok(None);
        }
        root = root.mul(&RatFunc::from_poly(p).pow(e / ell as i64).expect("nonzero"));
    }
    Ok(Some(root))
}

/// Decomposition a = unit * reduced * base^l with every finite exponent of
/// `reduced` in [0, l) and `reduced` a monic-primes product (so `reduced`
/// is the l-free part of a).
#[derive(Debug, Clone)]
pub struct EllFreeParts {
    pub unit: FqElem,
    pub reduced: RatFunc,
    pub base: RatFunc,
}

pub fn ell_free_decomposition(a: &RatFunc, ell: u64) -> Result<EllFreeParts> {
    if a.is_zero() {
        return Err(Error::input("cannot decompose the zero element"));
    }
    if ell < 2 {
        return Err(Error::input("exponent must be at least 2"));
    }
    let field = a.field().clone();
    let unit = unit_part(a)?;
    let mut reduced = RatFunc::one(&field);
    let mut base = RatFunc::one(&field);
    for (place, e) in support(a)? {
        let Place::Finite(p) = place else { continue };
        let r = e.rem_euclid(ell as i64);
        let q = e.div_euclid(ell as i64);
        let p = RatFunc::from_poly(p);
        reduced = reduced.mul(&p.pow(r)?);
        base = base.mul(&p.pow(q)?);
    }
    Ok(EllFreeParts {
        unit,
        reduced,
        base,
    })
}

/// Places outside of which a map with these coefficients has good reduction
/// and the base point is integral: infinity, primes in the denominator of
/// the base point, primes in any coefficient denominator, and primes
/// dividing the numerator of the leading coefficient.
pub fn standard_excluded_places(coeffs: &KPoly, base: &RatFunc) -> Result<PlaceSet> {
    let mut s = PlaceSet::new();
    s.insert(Place::Infinite);
    let add_num_primes = |f: &Poly, s: &mut PlaceSet| -> Result<()> {
        if !f.is_constant() {
            for (p, _) in factor(f, 0)?.factors() {
                s.insert(Place::Finite(p.clone()));
            }
        }
        Ok(())
    };
    add_num_primes(base.denominator(), &mut s)?;
    for c in coeffs.coeffs() {
        add_num_primes(c.denominator(), &mut s)?;
    }
    if let Some(lead) = coeffs.leading() {
        add_num_primes(lead.numerator(), &mut s)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, FieldSpec};
    use crate::poly::DensePoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime(3).unwrap()
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        let k = f3();
        RatFunc::new(Poly::from_ints(&k, num), Poly::from_ints(&k, den)).unwrap()
    }

    #[test]
    fn valuations_of_known_element() {
        let k = f3();
        // x = t^2 (t+1) / (t^2+1)^3
        let num = Poly::from_ints(&k, &[0, 0, 1]).mul(&Poly::from_ints(&k, &[1, 1]));
        let den = Poly::from_ints(&k, &[1, 0, 1]).pow(3);
        let x = RatFunc::new(num, den).unwrap();

        let v_t = Place::finite(Poly::from_ints(&k, &[0, 1])).unwrap();
        let v_t1 = Place::finite(Poly::from_ints(&k, &[1, 1])).unwrap();
        let v_q = Place::finite(Poly::from_ints(&k, &[1, 0, 1])).unwrap();
        let v_t2 = Place::finite(Poly::from_ints(&k, &[2, 1])).unwrap();

        assert_eq!(v_t.valuation(&x), Some(2));
        assert_eq!(v_t1.valuation(&x), Some(1));
        assert_eq!(v_q.valuation(&x), Some(-3));
        assert_eq!(v_t2.valuation(&x), Some(0));
        assert_eq!(Place::Infinite.valuation(&x), Some(3));
        assert_eq!(Place::Infinite.valuation(&RatFunc::zero(&k)), None);
    }

    #[test]
    fn place_constructor_validates() {
        let k = f3();
        // t^2+2 = (t+1)(t+2) is not irreducible
        assert!(Place::finite(Poly::from_ints(&k, &[2, 0, 1])).is_err());
        // 2t+1 is not monic
        assert!(Place::finite(Poly::from_ints(&k, &[1, 2])).is_err());
        assert!(Place::finite(Poly::from_ints(&k, &[1, 0, 1])).is_ok());
    }

    #[test]
    fn product_formula_on_random_elements() {
        let k = f3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let num: Vec<i64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..3)).collect();
            let den: Vec<i64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..3)).collect();
            let np = Poly::from_ints(&k, &num);
            let dp = Poly::from_ints(&k, &den);
            if np.is_zero() || dp.is_zero() {
                continue;
            }
            let x = RatFunc::new(np, dp).unwrap();
            if x.is_zero() {
                continue;
            }
            let total: i64 = support(&x)
                .unwrap()
                .iter()
                .map(|(place, v)| place.degree() as i64 * v)
                .sum();
            assert_eq!(total, 0, "product formula failed for {x}");
        }
    }

    #[test]
    fn support_is_sorted_and_complete() {
        let x = rf(&[0, 0, 0, 2], &[1, 1]); // 2 t^3 / (t+1)
        let sup = support(&x).unwrap();
        let k = f3();
        assert_eq!(
            sup,
            vec![
                (Place::Infinite, -2),
                (Place::finite(Poly::from_ints(&k, &[0, 1])).unwrap(), 3),
                (Place::finite(Poly::from_ints(&k, &[1, 1])).unwrap(), -1),
            ]
        );
        assert_eq!(unit_part(&x).unwrap(), k.from_int(2));
    }

    #[test]
    fn ellth_power_detection() {
        let k = f3();
        // (t/(t+1))^2
        let sq = rf(&[0, 1], &[1, 1]).pow(2).unwrap();
        assert!(is_ellth_power(&sq, 2).unwrap());
        let root = ellth_root(&sq, 2).unwrap().unwrap();
        assert_eq!(root.pow(2).unwrap(), sq);

        // odd exponent
        assert!(!is_ellth_power(&rf(&[0, 0, 0, 1], &[1]), 2).unwrap());
        // 2 t^2: unit 2 is not a square in F_3
        assert!(!is_ellth_power(&rf(&[0, 0, 2], &[1]), 2).unwrap());
        // characteristic divides the index
        assert!(is_ellth_power(&rf(&[0, 1], &[1]), 3).is_err());

        // 4 t^2 over F_5: unit 4 = 2^2
        let k5 = FieldSpec::prime(5).unwrap();
        let x = RatFunc::from_poly(Poly::from_ints(&k5, &[0, 0, 4]));
        assert!(is_ellth_power(&x, 2).unwrap());
        let _ = k;
    }

    #[test]
    fn ell_free_decomposition_identity_and_ranges() {
        let k = f3();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let num: Vec<i64> = (0..rng.gen_range(1..7)).map(|_| rng.gen_range(0..3)).collect();
            let den: Vec<i64> = (0..rng.gen_range(1..7)).map(|_| rng.gen_range(0..3)).collect();
            let np = Poly::from_ints(&k, &num);
            let dp = Poly::from_ints(&k, &den);
            if np.is_zero() || dp.is_zero() {
                continue;
            }
            let x = RatFunc::new(np, dp).unwrap();
            if x.is_zero() {
                continue;
            }
            for ell in [2u64, 4, 5] {
                let parts = ell_free_decomposition(&x, ell).unwrap();
                let recomposed = RatFunc::from_poly(DensePoly::constant(parts.unit.clone()))
                    .mul(&parts.reduced)
                    .mul(&parts.base.pow(ell as i64).unwrap());
                assert_eq!(recomposed, x);
                for (place, e) in support(&parts.reduced).unwrap() {
                    if let Place::Finite(_) = place {
                        assert!((0..ell as i64).contains(&e));
                    }
                }
            }
        }
    }

    #[test]
    fn excluded_places_for_a_simple_map() {
        let k = f3();
        // x^2 + t with base t/(t+1): excluded = {inf, t+1}
        let zero = RatFunc::zero(&k);
        let coeffs = DensePoly::new(
            &zero,
            vec![RatFunc::var(&k), zero.clone(), RatFunc::one(&k)],
        );
        let base = rf(&[0, 1], &[1, 1]);
        let s = standard_excluded_places(&coeffs, &base).unwrap();
        let expected: PlaceSet = [
            Place::Infinite,
            Place::finite(Poly::from_ints(&k, &[1, 1])).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(s, expected);
    }
}
