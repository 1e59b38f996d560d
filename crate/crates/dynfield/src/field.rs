//! Finite fields F_q of odd characteristic, q = p^e.
//!
//! A [`FieldSpec`] fixes the prime p, the extension degree e, and (for e > 1)
//! a monic irreducible modulus over F_p whose root generates the extension.
//! Elements are coordinate vectors in the power basis of that root, written
//! `u` in textual form, so F_9 built from `u^2+1` has elements `a + b*u`.
//!
//! Everything is exact and immutable; elements carry an `Arc` to their spec
//! so values from different fields can never be silently mixed (binary ops
//! panic on a mismatch, and the parsing layer never constructs one).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Description of F_q with q = p^e, p an odd prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    e: usize,
    /// Monic irreducible modulus over F_p, little-endian, length e+1. None iff e == 1.
    modulus: Option<Vec<u64>>,
    q: u128,
}

impl FieldSpec {
    /// The prime field F_p. Rejects p = 2 and composite p.
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        check_odd_prime(p)?;
        Ok(Arc::new(FieldSpec {
            p,
            e: 1,
            modulus: None,
            q: p as u128,
        }))
    }

    /// The extension F_p[u]/(m(u)) where `modulus` is monic irreducible of
    /// degree >= 2 over F_p, given little-endian.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        check_odd_prime(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        let e = match m.len() {
            0 | 1 => return Err(Error::BadModulus("degree must be at least 2".into())),
            n => n - 1,
        };
        if e < 2 {
            return Err(Error::BadModulus("degree must be at least 2".into()));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::BadModulus("leading coefficient is not 1".into()));
        }
        if !raw_is_irreducible(&m, p) {
            return Err(Error::BadModulus(format!(
                "reducible over F_{p} (degree {e})"
            )));
        }
        let q = (p as u128)
            .checked_pow(e as u32)
            .ok_or_else(|| Error::budget(format!("field size {p}^{e} overflows")))?;
        Ok(Arc::new(FieldSpec {
            p,
            e,
            modulus: Some(m),
            q,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree e (1 for a prime field).
    pub fn ext_degree(&self) -> usize {
        self.e
    }

    /// Field size q = p^e.
    pub fn q(&self) -> u128 {
        self.q
    }

    /// Modulus coordinates (little-endian, monic), when e > 1.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    /// Canonical one-line form used in reports: "p=3" or "p=3 e=2 mod=u^2+1".
    pub fn describe(&self) -> String {
        match &self.modulus {
            None => format!("p={}", self.p),
            Some(m) => format!("p={} e={} mod={}", self.p, self.e, render_u_poly(m)),
        }
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenCharacteristic(p));
    }
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    if p % 2 == 0 {
        return Err(Error::EvenCharacteristic(p));
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return Err(Error::NotPrime(p));
        }
        d += 2;
    }
    Ok(())
}

/// Element of F_q: coordinates in the power basis of the modulus root,
/// always fully reduced (length e, entries in [0, p)).
#[derive(Clone)]
pub struct FqElem {
    field: Arc<FieldSpec>,
    coords: Vec<u64>,
}

pub trait FieldCtx {
    fn zero(&self) -> FqElem;
    fn one(&self) -> FqElem;
    /// Image of the integer n under Z -> F_q.
    fn from_int(&self, n: i64) -> FqElem;
    fn element(&self, coords: Vec<u64>) -> Result<FqElem>;
    /// The power-basis generator `u` (requires e > 1).
    fn generator(&self) -> Result<FqElem>;
    /// All q elements in canonical order (coordinate odometer, low coordinate fastest).
    fn elements(&self) -> FqIter;
}

impl FieldCtx for Arc<FieldSpec> {
    fn zero(&self) -> FqElem {
        FqElem {
            field: self.clone(),
            coords: vec![0; self.e],
        }
    }

    fn one(&self) -> FqElem {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> FqElem {
        let p = self.p as i64;
        let r = n.rem_euclid(p) as u64;
        let mut coords = vec![0; self.e];
        coords[0] = r;
        FqElem {
            field: self.clone(),
            coords,
        }
    }

    fn element(&self, coords: Vec<u64>) -> Result<FqElem> {
        if coords.len() > self.e {
            return Err(Error::input(format!(
                "{} coordinates given for an extension of degree {}",
                coords.len(),
                self.e
            )));
        }
        let mut c: Vec<u64> = coords.iter().map(|x| x % self.p).collect();
        c.resize(self.e, 0);
        Ok(FqElem {
            field: self.clone(),
            coords: c,
        })
    }

    fn generator(&self) -> Result<FqElem> {
        if self.e < 2 {
            return Err(Error::input("prime field has no extension generator u"));
        }
        let mut coords = vec![0; self.e];
        coords[1] = 1;
        Ok(FqElem {
            field: self.clone(),
            coords,
        })
    }

    fn elements(&self) -> FqIter {
        FqIter {
            field: self.clone(),
            next: Some(vec![0; self.e]),
        }
    }
}

/// Iterator over all elements of a field in canonical order.
pub struct FqIter {
    field: Arc<FieldSpec>,
    next: Option<Vec<u64>>,
}

impl Iterator for FqIter {
    type Item = FqElem;

    fn next(&mut self) -> Option<FqElem> {
        let cur = self.next.take()?;
        let out = FqElem {
            field: self.field.clone(),
            coords: cur.clone(),
        };
        let mut nxt = cur;
        let p = self.field.p;
        for d in nxt.iter_mut() {
            *d += 1;
            if *d < p {
                self.next = Some(nxt);
                return Some(out);
            }
            *d = 0;
        }
        // odometer wrapped: iteration finished
        Some(out)
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coords == other.coords
    }
}

impl Eq for FqElem {}

impl std::hash::Hash for FqElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.e.hash(state);
        self.coords.hash(state);
    }
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElem {
    /// Canonical order: numeric value of the coordinate vector read as a
    /// base-p integer (high coordinate most significant). Only meaningful
    /// within one field.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.iter().rev().cmp(other.coords.iter().rev())
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_u_poly(&self.coords))
    }
}

impl FqElem {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    fn assert_same(&self, other: &Self) {
        assert!(
            self.same_field(other),
            "operands belong to different fields"
        );
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same(other);
        let p = self.field.p;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same(other);
        let p = self.field.p;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            coords,
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        let coords = self.coords.iter().map(|a| (p - a) % p).collect();
        FqElem {
            field: self.field.clone(),
            coords,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same(other);
        let p = self.field.p;
        if self.field.e == 1 {
            return FqElem {
                field: self.field.clone(),
                coords: vec![mul_mod(self.coords[0], other.coords[0], p)],
            };
        }
        let prod = raw_mul(&self.coords, &other.coords, p);
        let rem = raw_rem(&prod, self.field.modulus.as_ref().unwrap(), p);
        let mut coords = rem;
        coords.resize(self.field.e, 0);
        FqElem {
            field: self.field.clone(),
            coords,
        }
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.field.p;
        if self.field.e == 1 {
            return Ok(FqElem {
                field: self.field.clone(),
                coords: vec![inv_mod(self.coords[0], p)],
            });
        }
        let inv = raw_inv_mod(&self.coords, self.field.modulus.as_ref().unwrap(), p);
        let mut coords = inv;
        coords.resize(self.field.e, 0);
        Ok(FqElem {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
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

    /// Whether this element is an n-th power in F_q (0 counts as one).
    ///
    /// In the cyclic group F_q^* of order q-1, a is an n-th power iff
    /// a^((q-1)/gcd(n, q-1)) = 1.
    pub fn is_nth_power(&self, n: u64) -> bool {
        if self.is_zero() {
            return true;
        }
        if n == 0 {
            return self.is_one();
        }
        let order = self.field.q - 1;
        let g = gcd_u128(n as u128, order);
        self.pow(order / g).is_one()
    }

    /// Smallest n-th root in canonical element order, if one exists.
    /// Linear scan over the field; intended for witness extraction at desk
    /// scale (guarded by the caller's budget when q is large).
    pub fn nth_root(&self, n: u64) -> Option<Self> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        self.field.elements().find(|x| x.pow(n as u128) == *self)
    }
}

/// Render a coordinate vector as a polynomial in `u`, highest power first:
/// `[1, 2]` -> "2*u+1", `[0, 0, 1]` -> "u^2", `[0]` -> "0".
fn render_u_poly(coords: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in coords.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, _) => format!("{c}"),
            (1, 1) => "u".to_string(),
            (1, _) => format!("{c}*u"),
            (_, 1) => format!("u^{i}"),
            (_, _) => format!("{c}*u^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

// ---- raw arithmetic on little-endian coefficient vectors over F_p ----
//
// Used for extension-field internals (multiplication modulo the field
// modulus, inverses, irreducibility of the modulus), keeping this module
// independent of the general polynomial layer.

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid over the integers
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of nonunit");
    s0.rem_euclid(p as i128) as u64
}

fn raw_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn raw_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    let mut v: Vec<u64> = out.into_iter().map(|c| c as u64).collect();
    raw_trim(&mut v);
    v
}

/// Remainder of `a` by the polynomial `m` over F_p.
fn raw_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    raw_divmod(a, m, p).1
}

/// Inverse of `a` modulo the monic irreducible `m` over F_p (a nonzero mod m).
fn raw_inv_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    // extended Euclid in F_p[u]
    let mut r0: Vec<u64> = m.to_vec();
    let mut r1: Vec<u64> = raw_rem(a, m, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, rem) = raw_divmod(&r0, &r1, p);
        let qs1 = raw_mul(&q, &s1, p);
        let new_s = raw_sub(&s0, &qs1, p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = new_s;
    }
    // r0 is a nonzero constant gcd; scale s0 by its inverse
    debug_assert_eq!(r0.len(), 1, "inverse of nonunit in extension field");
    let c = inv_mod(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
    out = raw_rem(&out, m, p);
    out
}

fn raw_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    raw_trim(&mut out);
    out
}

fn raw_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    let db = b.len() - 1;
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    let mut rem: Vec<u64> = a.to_vec();
    raw_trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![0u64; rem.len() - db];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = mul_mod(*rem.last().unwrap(), lead_inv, p);
        quo[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let sub = mul_mod(c, bc, p);
            rem[i + shift] = (rem[i + shift] + p - sub) % p;
        }
        raw_trim(&mut rem);
    }
    raw_trim(&mut quo);
    (quo, rem)
}

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree up to half the candidate's degree. Only used to validate field
/// moduli (small degree), where the simple quadratic scan is plenty.
fn raw_is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for dd in 1..=d / 2 {
        // odometer over monic polynomials of degree dd
        let mut cand = vec![0u64; dd + 1];
        cand[dd] = 1;
        loop {
            let (_, rem) = raw_divmod(m, &cand, p);
            if rem.is_empty() {
                return false;
            }
            let mut k = 0;
            loop {
                if k == dd {
                    break;
                }
                cand[k] += 1;
                if cand[k] < p {
                    break;
                }
                cand[k] = 0;
                k += 1;
            }
            if k == dd {
                break;
            }
        }
    }
    true
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime(3).unwrap()
    }

    fn f9() -> Arc<FieldSpec> {
        // F_9 = F_3[u]/(u^2+1)
        FieldSpec::extension(3, vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert!(matches!(
            FieldSpec::prime(2),
            Err(Error::EvenCharacteristic(2))
        ));
        assert!(matches!(FieldSpec::prime(9), Err(Error::NotPrime(9))));
        assert!(matches!(FieldSpec::prime(1), Err(Error::NotPrime(1))));
        assert!(matches!(
            FieldSpec::extension(4, vec![1, 0, 1]),
            Err(Error::EvenCharacteristic(4))
        ));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // u^2 + 2 = (u+1)(u+2) over F_3
        assert!(FieldSpec::extension(3, vec![2, 0, 1]).is_err());
        // u^2 + 1 is irreducible over F_3 but reducible over F_5
        assert!(FieldSpec::extension(3, vec![1, 0, 1]).is_ok());
        assert!(FieldSpec::extension(5, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let k = f3();
        let two = k.from_int(2);
        assert_eq!(two.add(&two), k.one());
        assert_eq!(two.mul(&two), k.one());
        assert_eq!(k.from_int(-1), two);
        assert_eq!(two.inv().unwrap(), two);
    }

    #[test]
    fn extension_square_example() {
        // (u+1)^2 = u^2 + 2u + 1 = 2u in F_9 since u^2 = -1
        let k = f9();
        let x = k.element(vec![1, 1]).unwrap();
        let sq = x.mul(&x);
        assert_eq!(sq, k.element(vec![0, 2]).unwrap());
        assert_eq!(format!("{sq}"), "2*u");
    }

    #[test]
    fn fermat_exhaustive_small_fields() {
        // a^q = a for every element of every constructed field of size <= 81
        let fields = vec![
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7).unwrap(),
            FieldSpec::prime(11).unwrap(),
            FieldSpec::extension(3, vec![1, 0, 1]).unwrap(), // F_9
            FieldSpec::extension(5, vec![2, 0, 1]).unwrap(), // F_25: u^2+2
            FieldSpec::extension(3, vec![1, 2, 0, 1]).unwrap(), // F_27: u^3+2u+1
            FieldSpec::extension(3, vec![2, 0, 0, 2, 1]).unwrap(), // F_81: u^4+2u^3+2
        ];
        for k in fields {
            let q = k.q();
            let mut count = 0u64;
            for a in k.elements() {
                assert_eq!(a.pow(q), a, "Frobenius fixed-point failed in {}", k.describe());
                count += 1;
            }
            assert_eq!(count as u128, q);
        }
    }

    #[test]
    fn inverses_roundtrip_exhaustive() {
        for k in [f3(), f9(), FieldSpec::prime(7).unwrap()] {
            for a in k.elements() {
                if a.is_zero() {
                    assert!(a.inv().is_err());
                } else {
                    assert!(a.mul(&a.inv().unwrap()).is_one());
                }
            }
        }
    }

    #[test]
    fn nth_power_detection_matches_brute_force() {
        for k in [f3(), FieldSpec::prime(5).unwrap(), f9()] {
            for n in [2u64, 3, 4, 5] {
                let mut powers: Vec<FqElem> = k.elements().map(|x| x.pow(n as u128)).collect();
                powers.sort();
                powers.dedup();
                for a in k.elements() {
                    let brute = powers.contains(&a);
                    assert_eq!(
                        a.is_nth_power(n),
                        brute,
                        "n={n} a={a} in {}",
                        k.describe()
                    );
                    if brute {
                        let r = a.nth_root(n).expect("root must exist");
                        assert_eq!(r.pow(n as u128), a);
                    } else {
                        assert!(a.nth_root(n).is_none());
                    }
                }
            }
        }
    }

    #[test]
    fn euler_criterion_examples() {
        let k3 = f3();
        assert!(!k3.from_int(2).is_nth_power(2), "2 is not a square mod 3");
        let k5 = FieldSpec::prime(5).unwrap();
        assert!(k5.from_int(4).is_nth_power(2), "4 = 2^2 mod 5");
        assert_eq!(k5.from_int(4).nth_root(2).unwrap(), k5.from_int(2));
    }

    #[test]
    fn canonical_order_is_base_p_numeric() {
        let k = f9();
        let codes: Vec<FqElem> = k.elements().collect();
        assert_eq!(codes.len(), 9);
        for w in codes.windows(2) {
            assert!(w[0] < w[1]);
        }
        // 2 (coords [2,0]) < u (coords [0,1])
        assert!(k.from_int(2) < k.generator().unwrap());
    }

    #[test]
    fn describe_roundtrips_modulus() {
        assert_eq!(f3().describe(), "p=3");
        assert_eq!(f9().describe(), "p=3 e=2 mod=u^2+1");
    }
}
