//! Dense univariate polynomials, generic over the coefficient field.
//!
//! Two instantiations matter here: `Poly = DensePoly<FqElem>` for polynomials
//! in `t` over F_q, and `KPoly = DensePoly<RatFunc>` for polynomials in `x`
//! whose coefficients are rational functions. The [`Coeff`] trait carries the
//! handful of field operations both need, plus the display variable.
//!
//! Coefficients are stored little-endian with no trailing zeros; the zero
//! polynomial has an empty vector. Every polynomial keeps one zero element of
//! its coefficient field as a prototype so new coefficients can be minted
//! even from the zero polynomial.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldSpec, FqElem};

/// Field operations a coefficient type must provide.
pub trait Coeff: Clone + PartialEq + fmt::Display + fmt::Debug {
    /// Variable letter used when displaying polynomials over this domain.
    const VAR: char;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_c(&self, other: &Self) -> Self;
    fn sub_c(&self, other: &Self) -> Self;
    fn neg_c(&self) -> Self;
    fn mul_c(&self, other: &Self) -> Self;
    fn inv_c(&self) -> Result<Self>;
    /// Image of an integer times self.
    fn scale_int(&self, n: i64) -> Self;
    /// Whether the rendered form must be parenthesized next to `*var`.
    fn needs_parens(&self) -> bool;
}

impl Coeff for FqElem {
    const VAR: char = 't';

    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        FqElem::is_zero(self)
    }
    fn is_one(&self) -> bool {
        FqElem::is_one(self)
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
        self.mul(&self.field().from_int(n))
    }
    fn needs_parens(&self) -> bool {
        // more than one nonzero coordinate renders with a '+'
        self.coords().iter().filter(|&&c| c != 0).count() > 1
    }
}

/// Degree of a polynomial; the zero polynomial has degree -infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone)]
pub struct DensePoly<C: Coeff> {
    zero: C,
    coeffs: Vec<C>,
}

pub type Poly = DensePoly<FqElem>;

impl<C: Coeff> PartialEq for DensePoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<C: Coeff> Eq for DensePoly<C> {}

impl<C: Coeff + std::hash::Hash> std::hash::Hash for DensePoly<C> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<C: Coeff> DensePoly<C> {
    /// Build from little-endian coefficients; `proto` supplies the field.
    pub fn new(proto: &C, coeffs: Vec<C>) -> Self {
        let mut p = DensePoly {
            zero: proto.zero_like(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero_poly(proto: &C) -> Self {
        DensePoly {
            zero: proto.zero_like(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let zero = c.zero_like();
        DensePoly::new(&zero, vec![c])
    }

    /// The monomial c * var^deg.
    pub fn monomial(c: C, deg: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero.clone(); deg + 1];
        coeffs[deg] = c;
        DensePoly::new(&zero, coeffs)
    }

    /// The variable itself.
    pub fn var(proto: &C) -> Self {
        DensePoly::monomial(proto.one_like(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of var^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn proto(&self) -> &C {
        &self.zero
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&self.zero);
            let b = other.coeffs.get(i).unwrap_or(&self.zero);
            coeffs.push(a.add_c(b));
        }
        DensePoly::new(&self.zero, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&self.zero);
            let b = other.coeffs.get(i).unwrap_or(&self.zero);
            coeffs.push(a.sub_c(b));
        }
        DensePoly::new(&self.zero, coeffs)
    }

    pub fn neg(&self) -> Self {
        DensePoly::new(
            &self.zero,
            self.coeffs.iter().map(|c| c.neg_c()).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return DensePoly::zero_poly(&self.zero);
        }
        let mut coeffs = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add_c(&a.mul_c(b));
            }
        }
        DensePoly::new(&self.zero, coeffs)
    }

    pub fn scale(&self, c: &C) -> Self {
        DensePoly::new(
            &self.zero,
            self.coeffs.iter().map(|a| a.mul_c(c)).collect(),
        )
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.inv_c()?;
        let db = divisor.coeffs.len() - 1;
        let mut rem = self.clone();
        if rem.coeffs.len() < divisor.coeffs.len() {
            return Ok((DensePoly::zero_poly(&self.zero), rem));
        }
        let mut quo = vec![self.zero.clone(); rem.coeffs.len() - db];
        while rem.coeffs.len() >= divisor.coeffs.len() && !rem.is_zero() {
            let shift = rem.coeffs.len() - divisor.coeffs.len();
            let c = rem.coeffs.last().unwrap().mul_c(&lead_inv);
            quo[shift] = c.clone();
            for (i, b) in divisor.coeffs.iter().enumerate() {
                let s = c.mul_c(b);
                rem.coeffs[i + shift] = rem.coeffs[i + shift].sub_c(&s);
            }
            rem.trim();
        }
        Ok((DensePoly::new(&self.zero, quo), rem))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.divmod(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Extended Euclid: returns (g, s, u) with s*self + u*other = g and g
    /// the monic gcd (zero when both inputs are zero).
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = DensePoly::constant(self.zero.one_like());
        let zero = DensePoly::zero_poly(&self.zero);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            (r0, r1) = (r1, r);
            (s0, s1) = (s1.clone(), s0.sub(&q.mul(&s1)));
            (t0, t1) = (t1.clone(), t0.sub(&q.mul(&t1)));
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let (g, lead) = r0.monic();
        let li = lead.inv_c().expect("leading coefficient is nonzero");
        (g, s0.scale(&li), t0.scale(&li))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().0
        }
    }

    /// Scale to leading coefficient 1; returns (monic, original leading).
    /// The zero polynomial is returned unchanged with leading 1.
    pub fn monic(&self) -> (Self, C) {
        match self.leading() {
            None => (self.clone(), self.zero.one_like()),
            Some(l) => {
                let li = l.inv_c().expect("leading coefficient is nonzero");
                (self.scale(&li), l.clone())
            }
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return DensePoly::zero_poly(&self.zero);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale_int(i as i64))
            .collect();
        DensePoly::new(&self.zero, coeffs)
    }

    /// Horner evaluation at a point of the coefficient field.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_c(x).add_c(c);
        }
        acc
    }

    /// Composition self(g), by Horner over polynomials.
    pub fn eval_poly(&self, g: &Self) -> Self {
        let mut acc = DensePoly::zero_poly(&self.zero);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&DensePoly::constant(c.clone()));
        }
        acc
    }

    pub fn pow(&self, mut exp: usize) -> Self {
        let mut base = self.clone();
        let mut acc = DensePoly::constant(self.zero.one_like());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// self^exp modulo m, for large exponents.
    pub fn pow_mod(&self, mut exp: u128, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = DensePoly::constant(self.zero.one_like()).rem(m)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }
}

impl<C: Coeff + Ord> DensePoly<C> {
    /// Canonical order: by degree, then coefficients compared from the top.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<C: Coeff> fmt::Display for DensePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = C::VAR;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let coeff_str = if c.is_one() && i > 0 {
                None
            } else if c.needs_parens() {
                Some(format!("({c})"))
            } else {
                Some(format!("{c}"))
            };
            match (coeff_str, i) {
                (Some(s), 0) => write!(f, "{s}")?,
                (Some(s), 1) => write!(f, "{s}*{var}")?,
                (Some(s), _) => write!(f, "{s}*{var}^{i}")?,
                (None, 1) => write!(f, "{var}")?,
                (None, _) => write!(f, "{var}^{i}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for DensePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Poly {
    /// Convenience constructor from integer coefficients, little-endian.
    pub fn from_ints(field: &std::sync::Arc<FieldSpec>, coeffs: &[i64]) -> Poly {
        let zero = field.zero();
        DensePoly::new(&zero, coeffs.iter().map(|&n| field.from_int(n)).collect())
    }

    pub fn field(&self) -> &std::sync::Arc<FieldSpec> {
        self.zero.field()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::sync::Arc;

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime(3).unwrap()
    }

    #[test]
    fn display_matches_grammar() {
        let k = f3();
        let p = Poly::from_ints(&k, &[1, 2, 1]);
        assert_eq!(format!("{p}"), "t^2+2*t+1");
        assert_eq!(format!("{}", Poly::from_ints(&k, &[0])), "0");
        assert_eq!(format!("{}", Poly::from_ints(&k, &[0, 1])), "t");
        assert_eq!(format!("{}", Poly::from_ints(&k, &[2])), "2");
    }

    #[test]
    fn extension_coefficients_parenthesized() {
        let k = FieldSpec::extension(3, vec![1, 0, 1]).unwrap();
        let u = k.generator().unwrap();
        let c = u.add(&k.one()); // u+1
        let p = DensePoly::new(&k.zero(), vec![k.zero(), c]);
        assert_eq!(format!("{p}"), "(u+1)*t");
    }

    #[test]
    fn divmod_roundtrip_exhaustive_deg3_by_deg1() {
        let k = f3();
        // all polynomials of degree <= 3 divided by all nonzero of degree <= 1
        let polys: Vec<Poly> = (0..81)
            .map(|n| {
                Poly::from_ints(&k, &[n % 3, (n / 3) % 3, (n / 9) % 3, (n / 27) % 3])
            })
            .collect();
        let divisors: Vec<Poly> = (1..9)
            .map(|n| Poly::from_ints(&k, &[n % 3, (n / 3) % 3]))
            .collect();
        for a in &polys {
            for b in &divisors {
                let (q, r) = a.divmod(b).unwrap();
                assert_eq!(&q.mul(b).add(&r), a);
                assert!(r.degree() < b.degree());
            }
        }
    }

    #[test]
    fn division_by_zero_rejected() {
        let k = f3();
        let a = Poly::from_ints(&k, &[1, 1]);
        let z = Poly::zero_poly(&k.zero());
        assert!(a.divmod(&z).is_err());
    }

    #[test]
    fn gcd_is_monic_and_divides() {
        let k = f3();
        let t = Poly::var(&k.zero());
        let a = t.add(&Poly::from_ints(&k, &[1])); // t+1
        let b = t.add(&Poly::from_ints(&k, &[2])); // t+2
        let f = a.pow(2).mul(&b);
        let g = a.mul(&b.pow(2)).scale(&k.from_int(2));
        let d = f.gcd(&g);
        assert_eq!(d, a.mul(&b));
        assert!(d.divides(&f) && d.divides(&g));
        assert!(d.is_monic());
    }

    #[test]
    fn derivative_product_rule() {
        let k = f3();
        let f = Poly::from_ints(&k, &[1, 0, 2, 1]);
        let g = Poly::from_ints(&k, &[2, 1, 1]);
        let lhs = f.mul(&g).derivative();
        let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn char_p_kills_pth_powers() {
        let k = f3();
        // d/dt (t^3) = 3t^2 = 0 in characteristic 3
        let t3 = Poly::var(&k.zero()).pow(3);
        assert!(t3.derivative().is_zero());
    }

    #[test]
    fn composition_matches_pointwise_eval() {
        let k = f3();
        let f = Poly::from_ints(&k, &[1, 2, 1]);
        let g = Poly::from_ints(&k, &[0, 1, 1]);
        let comp = f.eval_poly(&g);
        for a in k.elements() {
            assert_eq!(comp.eval(&a), f.eval(&g.eval(&a)));
        }
    }

    #[test]
    fn pow_mod_agrees_with_pow_then_rem() {
        let k = f3();
        let f = Poly::from_ints(&k, &[1, 1]);
        let m = Poly::from_ints(&k, &[1, 0, 1, 1]);
        let a = f.pow_mod(27, &m).unwrap();
        let b = f.pow(27).rem(&m).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ext_gcd_bezout_identity() {
        let k = f3();
        let f = Poly::from_ints(&k, &[1, 2, 0, 1]);
        let g = Poly::from_ints(&k, &[2, 1, 1]);
        let (d, s, u) = f.ext_gcd(&g);
        assert_eq!(s.mul(&f).add(&u.mul(&g)), d);
        assert_eq!(d, f.gcd(&g));
    }

    #[test]
    fn canonical_order_sorts_by_degree_then_top_coeffs() {
        let k = f3();
        let a = Poly::from_ints(&k, &[2, 1]); // t+2
        let b = Poly::from_ints(&k, &[0, 0, 1]); // t^2
        let c = Poly::from_ints(&k, &[1, 1]); // t+1
        let mut v = vec![b.clone(), a.clone(), c.clone()];
        v.sort_by(|x, y| x.canonical_cmp(y));
        assert_eq!(v, vec![c, a, b]);
    }
}
