//! The rational function field K = F_q(t).
//!
//! A [`RatFunc`] is a reduced fraction of polynomials in t: numerator and
//! denominator coprime, denominator monic (so the representation is unique),
//! zero stored as 0/1. `KPoly = DensePoly<RatFunc>` gives polynomials in `x`
//! over K, the form self-maps of the line take here.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqElem};
use crate::poly::{Coeff, DensePoly, Poly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

pub type KPoly = DensePoly<RatFunc>;

impl RatFunc {
    /// Reduced fraction num/den; errors when den = 0.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let one = DensePoly::constant(num.proto().one_like());
            return Ok(RatFunc { num, den: one });
        }
        let g = num.gcd(&den);
        let num = num.divmod(&g).expect("gcd divides").0;
        let den = den.divmod(&g).expect("gcd divides").0;
        let (den, lead) = den.monic();
        let num = num.scale(&lead.inv()?);
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(num: Poly) -> RatFunc {
        let one = DensePoly::constant(num.proto().one_like());
        RatFunc { num, den: one }
    }

    pub fn from_int(field: &Arc<FieldSpec>, n: i64) -> RatFunc {
        RatFunc::from_poly(Poly::from_ints(field, &[n]))
    }

    pub fn zero(field: &Arc<FieldSpec>) -> RatFunc {
        RatFunc::from_int(field, 0)
    }

    pub fn one(field: &Arc<FieldSpec>) -> RatFunc {
        RatFunc::from_int(field, 1)
    }

    /// The coordinate function t.
    pub fn var(field: &Arc<FieldSpec>) -> RatFunc {
        RatFunc::from_poly(Poly::from_ints(field, &[0, 1]))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<FqElem> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Height of a point of P^1(K): max(deg num, deg den), with h(0) = 0.
    pub fn height(&self) -> usize {
        let dn = self.num.degree().finite().unwrap_or(0);
        let dd = self.den.degree().finite().unwrap_or(0);
        dn.max(dd)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        let num = self
            .num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, exp: i64) -> Result<RatFunc> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut b = base;
        let mut acc = RatFunc::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    /// Canonical order for sorting: denominator first, then numerator, each
    /// in polynomial canonical order. Unique because fractions are reduced.
    fn cmp(&self, other: &Self) -> Ordering {
        self.den
            .canonical_cmp(&other.den)
            .then_with(|| self.num.canonical_cmp(&other.num))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Coeff for RatFunc {
    const VAR: char = 'x';

    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn is_one(&self) -> bool {
        RatFunc::is_one(self)
    }
    fn add_c(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_c(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_c(&self) -> Self {
        self.neg()
    }
    fn mul_c(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inv_c(&self) -> Result<Self> {
        self.inv()
    }
    fn scale_int(&self, n: i64) -> Self {
        self.mul(&RatFunc::from_int(self.field(), n))
    }
    fn needs_parens(&self) -> bool {
        !self.den.is_one()
            || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }
}

/// Common-denominator form of a polynomial in x over K: returns (numerators,
/// denominator) with denominator monic and f = (sum n_i x^i) / denominator.
pub fn common_denominator(f: &KPoly) -> (Vec<Poly>, Poly) {
    let field = f.proto().field().clone();
    let one = Poly::from_ints(&field, &[1]);
    let mut lcm = one.clone();
    for c in f.coeffs() {
        let d = c.denominator();
        let g = lcm.gcd(d);
        lcm = lcm.mul(&d.divmod(&g).expect("gcd divides").0);
    }
    let nums = f
        .coeffs()
        .iter()
        .map(|c| {
            let scale = lcm.divmod(c.denominator()).expect("lcm divisible").0;
            c.numerator().mul(&scale)
        })
        .collect();
    (nums, lcm)
}
