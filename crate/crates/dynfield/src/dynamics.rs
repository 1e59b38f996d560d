//! Polynomial self-maps of the affine line over K = F_q(t): orbits, height
//! growth, canonical-height estimates with certified error intervals, and
//! exact preperiodic/wandering classification.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::places::{standard_excluded_places, support, Place, PlaceSet};
use crate::poly::{Degree, DensePoly};
use crate::ratfunc::{common_denominator, KPoly, RatFunc};

/// Exact rationals for height estimates.
pub type Rat = Ratio<i128>;

/// Heights along an orbit are capped here; past this the exact
/// representations (numerator and denominator degree) get unwieldy. The
/// cap is enforced before a step is computed, so no oversized
/// multiplication is ever attempted.
pub const MAX_ORBIT_HEIGHT: usize = 16_384;

/// A polynomial map phi(x) of degree d >= 2 with coefficients in K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    poly: KPoly,
    degree: usize,
}

impl PolyMap {
    pub fn new(poly: KPoly) -> Result<PolyMap> {
        match poly.degree() {
            Degree::Finite(d) if d >= 2 => Ok(PolyMap { poly, degree: d }),
            _ => Err(Error::input("a map must be polynomial of degree at least 2")),
        }
    }

    pub fn from_coeffs(field: &Arc<FieldSpec>, coeffs: Vec<RatFunc>) -> Result<PolyMap> {
        PolyMap::new(DensePoly::new(&RatFunc::zero(field), coeffs))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn as_kpoly(&self) -> &KPoly {
        &self.poly
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.poly.proto().field()
    }

    pub fn apply(&self, x: &RatFunc) -> RatFunc {
        self.poly.eval(x)
    }

    /// phi^n(b) by repeated application.
    pub fn iterate_value(&self, base: &RatFunc, n: usize) -> Result<RatFunc> {
        let mut x = base.clone();
        for _ in 0..n {
            if x.height() > MAX_ORBIT_HEIGHT / self.degree {
                return Err(Error::budget(format!(
                    "orbit height would exceed {MAX_ORBIT_HEIGHT}"
                )));
            }
            x = self.apply(&x);
            if x.height() > MAX_ORBIT_HEIGHT {
                return Err(Error::budget(format!(
                    "orbit height exceeded {MAX_ORBIT_HEIGHT}"
                )));
            }
        }
        Ok(x)
    }

    /// The n-th iterate as a polynomial in x (degree d^n), refused when that
    /// degree would exceed `max_degree`.
    pub fn compose_iterate(&self, n: usize, max_degree: usize) -> Result<KPoly> {
        let target = (self.degree as u128)
            .checked_pow(n as u32)
            .filter(|&d| d <= max_degree as u128)
            .ok_or_else(|| {
                Error::budget(format!(
                    "iterate degree {}^{n} exceeds the composition budget {max_degree}",
                    self.degree
                ))
            })?;
        let _ = target;
        let mut acc = KPoly::var(self.poly.proto());
        for _ in 0..n {
            acc = self.poly.eval_poly(&acc);
        }
        Ok(acc)
    }

    /// Whether phi^n, as a polynomial in x, has no repeated roots.
    pub fn iterate_is_separable(&self, n: usize, max_degree: usize) -> Result<bool> {
        let f = self.compose_iterate(n, max_degree)?;
        Ok(f.gcd(&f.derivative()).is_constant())
    }

    /// Places where the map or the base point can misbehave: infinity,
    /// denominators of the base and of the coefficients, and the numerator
    /// of the leading coefficient.
    pub fn excluded_places(&self, base: &RatFunc) -> Result<PlaceSet> {
        standard_excluded_places(&self.poly, base)
    }

    /// A constant C with |h(phi(x)) - d h(x)| <= C for every x in K.
    ///
    /// Write phi = (sum A_i x^i) / l with A_i, l in F_q[t] and l a common
    /// denominator, and let H = max(deg l, max_i deg A_i). For x = a/b in
    /// lowest terms, phi(x) = N / (l b^d) with N = sum A_i a^i b^(d-i), so
    /// both sides have degree at most d h(x) + H and h(phi(x)) <= d h(x) + H.
    /// For the other side, view the map on the projective line as the
    /// coprime degree-d forms F1 = sum A_i X^i Z^(d-i), F2 = l Z^d, whose
    /// resultant is Res = l^d A_d^d (nonzero). The Sylvester-adjugate
    /// identities Res * X^(2d-1), Res * Z^(2d-1) in the ideal (F1, F2) have
    /// cofactor coefficients built from (2d-2)-sized minors of the Sylvester
    /// matrix, so of degree at most (2d-2) H; evaluating them at (a, b) and
    /// comparing valuations gives d h(x) - h(phi(x)) <= max(deg Res, (2d-2) H).
    /// The returned C = max(d (deg l + deg A_d), (2d-2) H) covers both sides,
    /// since H <= (2d-2) H for d >= 2.
    pub fn height_gap(&self) -> usize {
        let (nums, den) = common_denominator(&self.poly);
        let deg = |p: &crate::poly::Poly| p.degree().finite().unwrap_or(0);
        let h = nums.iter().map(deg).max().unwrap_or(0).max(deg(&den));
        let d = self.degree;
        let res_deg = d * (deg(&den) + deg(nums.last().expect("degree >= 2")));
        res_deg.max((2 * d - 2) * h)
    }

    /// Estimate of the canonical height of `base` from the n-th orbit value:
    /// the interval [h(phi^n b) / d^n +- C / ((d-1) d^n)] is certified to
    /// contain lim_k h(phi^k b) / d^k, and the intervals nest as n grows.
    pub fn canonical_height_interval(&self, base: &RatFunc, n: usize) -> Result<HeightInterval> {
        let value = self.iterate_value(base, n)?;
        let d = self.degree as i128;
        let dn = d
            .checked_pow(n as u32)
            .ok_or_else(|| Error::budget(format!("d^{n} overflows the interval arithmetic")))?;
        let c = self.height_gap() as i128;
        Ok(HeightInterval {
            center: Rat::new(value.height() as i128, dn),
            radius: Rat::new(c, (d - 1) * dn),
        })
    }

    /// Exact orbit classification of a point: either it revisits a value
    /// (preperiodic, with preperiod and period) or its height escapes the
    /// threshold C/(d-1) past which heights grow strictly (wandering).
    /// `max_steps` bounds the search.
    pub fn classify_point(&self, base: &RatFunc, max_steps: usize) -> Result<PointClass> {
        let d = self.degree;
        let c = self.height_gap();
        let mut seen: HashMap<RatFunc, usize> = HashMap::new();
        let mut x = base.clone();
        for n in 0..=max_steps {
            if let Some(&first) = seen.get(&x) {
                return Ok(PointClass::Preperiodic {
                    preperiod: first,
                    period: n - first,
                });
            }
            // h > C/(d-1) forces h(phi(x)) >= d h(x) - C > h(x): the orbit
            // height increases strictly from here on, so no value repeats.
            if x.height() * (d - 1) > c {
                return Ok(PointClass::Wandering { escape_index: n });
            }
            seen.insert(x.clone(), n);
            x = self.apply(&x);
        }
        Err(Error::budget(format!(
            "no classification within {max_steps} steps"
        )))
    }

    /// Critical-point data for a quadratic map phi = a2 x^2 + a1 x + a0:
    /// the critical point g = -a1/(2 a2) and the constant c of the
    /// conjugate normal form x^2 + c under m(x) = a2 (x - g), namely
    /// c = a2 (phi(g) - g). The map is conjugate to x^2 exactly when c = 0.
    pub fn quadratic_data(&self) -> Result<QuadraticData> {
        if self.degree != 2 {
            return Err(Error::input(format!(
                "quadratic normal form needs degree 2, map has degree {}",
                self.degree
            )));
        }
        use crate::poly::Coeff;
        let a2 = self.poly.coeff(2);
        let a1 = self.poly.coeff(1);
        let two_a2 = a2.scale_int(2);
        let critical = a1.neg().div(&two_a2)?;
        let normal_c = a2.mul(&self.apply(&critical).sub(&critical));
        Ok(QuadraticData {
            critical_point: critical,
            normal_c,
        })
    }

    pub fn orbit(&self, base: RatFunc) -> Orbit {
        Orbit {
            map: self.clone(),
            values: vec![base],
            supports: vec![None],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticData {
    pub critical_point: RatFunc,
    pub normal_c: RatFunc,
}

impl QuadraticData {
    pub fn conjugate_to_square(&self) -> bool {
        self.normal_c.is_zero()
    }
}

/// A certified enclosure of a canonical height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeightInterval {
    pub center: Rat,
    pub radius: Rat,
}

impl HeightInterval {
    pub fn lo(&self) -> Rat {
        self.center - self.radius
    }

    pub fn hi(&self) -> Rat {
        self.center + self.radius
    }

    pub fn contains(&self, x: Rat) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    pub fn contains_interval(&self, other: &HeightInterval) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    pub fn intersects(&self, other: &HeightInterval) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Preperiodic { preperiod: usize, period: usize },
    Wandering { escape_index: usize },
}

impl PointClass {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, PointClass::Preperiodic { .. })
    }
}

/// An orbit phi^n(b), n = 0, 1, 2, ... with memoized values and supports.
pub struct Orbit {
    map: PolyMap,
    values: Vec<RatFunc>,
    supports: Vec<Option<Vec<(Place, i64)>>>,
}

impl Orbit {
    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn base(&self) -> &RatFunc {
        &self.values[0]
    }

    /// phi^n(base), extending the cached tail as needed.
    pub fn value(&mut self, n: usize) -> Result<RatFunc> {
        while self.values.len() <= n {
            let last = self.values.last().unwrap();
            if last.height() > MAX_ORBIT_HEIGHT / self.map.degree() {
                return Err(Error::budget(format!(
                    "orbit height would exceed {MAX_ORBIT_HEIGHT} at step {}",
                    self.values.len()
                )));
            }
            let next = self.map.apply(last);
            if next.height() > MAX_ORBIT_HEIGHT {
                return Err(Error::budget(format!(
                    "orbit height exceeded {MAX_ORBIT_HEIGHT} at step {}",
                    self.values.len()
                )));
            }
            self.values.push(next);
            self.supports.push(None);
        }
        Ok(self.values[n].clone())
    }

    /// Support of phi^n(base); errors when that value is zero.
    pub fn support(&mut self, n: usize) -> Result<Vec<(Place, i64)>> {
        let v = self.value(n)?;
        if v.is_zero() {
            return Err(Error::input(format!("orbit value at step {n} is zero")));
        }
        if self.supports[n].is_none() {
            self.supports[n] = Some(support(&v)?);
        }
        Ok(self.supports[n].clone().unwrap())
    }

    /// Valuation of phi^n(base) at a place; None when the value is zero.
    pub fn valuation(&mut self, place: &Place, n: usize) -> Result<Option<i64>> {
        let v = self.value(n)?;
        Ok(place.valuation(&v))
    }
}
