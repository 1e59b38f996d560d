//! Factorization of polynomials in F_q[t], q odd.
//!
//! The pipeline is squarefree decomposition (characteristic-p aware, taking
//! p-th roots of coefficients when the derivative vanishes), then
//! distinct-degree splitting by iterated Frobenius, then equal-degree
//! splitting by the Cantor-Zassenhaus random method. Randomness only steers
//! the search; the returned [`FactoredPoly`] is canonically sorted, so output
//! is the same for every seed.
//!
//! Also here: a Rabin irreducibility test, a sieve that enumerates or counts
//! monic irreducibles by degree, and the Moebius count of monic irreducibles
//! that the sieve is checked against.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldSpec, FqElem};
use crate::poly::{Degree, DensePoly, Poly};

/// A factored nonzero polynomial: unit times monic irreducibles with
/// exponents, sorted by degree then coefficients (highest power first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPoly {
    unit: FqElem,
    factors: Vec<(Poly, usize)>,
}

impl FactoredPoly {
    pub fn unit(&self) -> &FqElem {
        &self.unit
    }

    pub fn factors(&self) -> &[(Poly, usize)] {
        &self.factors
    }

    /// Exponent of a given monic prime in this factorization (0 if absent).
    pub fn exponent_of(&self, prime: &Poly) -> usize {
        self.factors
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, e)| *e)
    }

    /// Multiply everything back out.
    pub fn recompose(&self) -> Poly {
        let mut out = DensePoly::constant(self.unit.clone());
        for (p, e) in &self.factors {
            out = out.mul(&p.pow(*e));
        }
        out
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.unit.is_one() || self.factors.is_empty() {
            write!(f, "{}", self.unit)?;
            wrote = true;
        }
        for (p, e) in &self.factors {
            if wrote {
                write!(f, " * ")?;
            }
            wrote = true;
            if *e == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{e}")?;
            }
        }
        Ok(())
    }
}

/// Full factorization of a nonzero polynomial. The seed steers the
/// equal-degree random splitting only; results are seed-independent.
pub fn factor(f: &Poly, seed: u64) -> Result<FactoredPoly> {
    if f.is_zero() {
        return Err(Error::input("cannot factor the zero polynomial"));
    }
    let (monic, unit) = f.monic();
    if monic.is_constant() {
        return Ok(FactoredPoly {
            unit,
            factors: Vec::new(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    for (part, exp) in squarefree_decomposition(&monic)? {
        for (product, d) in distinct_degree_split(&part)? {
            for prime in equal_degree_split(&product, d, &mut rng)? {
                factors.push((prime, exp));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.canonical_cmp(b));
    Ok(FactoredPoly { unit, factors })
}

/// Squarefree decomposition of a monic nonconstant polynomial:
/// f = prod g_i^i with the g_i squarefree and pairwise coprime.
/// Returns (g_i, i) pairs for the nontrivial g_i, in increasing i.
///
/// In characteristic p the derivative can vanish (f is then a polynomial in
/// t^p and, since F_q is perfect, a p-th power); that branch recurses on the
/// p-th root and multiplies exponents by p.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::input("squarefree decomposition needs a monic input"));
    }
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let p = f.field().p() as usize;
    let deriv = f.derivative();
    if deriv.is_zero() {
        let root = pth_root(f)?;
        let inner = squarefree_decomposition(&root)?;
        return Ok(inner.into_iter().map(|(g, e)| (g, e * p)).collect());
    }
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let mut c = f.gcd(&deriv);
    let mut w = f.divmod(&c)?.0;
    let mut i = 1usize;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let fac = w.divmod(&y)?.0;
        if !fac.is_constant() {
            out.push((fac, i));
        }
        w = y;
        c = c.divmod(&w)?.0;
        i += 1;
    }
    if !c.is_constant() {
        let root = pth_root(&c)?;
        for (g, e) in squarefree_decomposition(&root)? {
            out.push((g, e * p));
        }
    }
    out.sort_by_key(|&(_, e)| e);
    Ok(out)
}

/// p-th root of a polynomial all of whose terms have exponent divisible by p.
/// Coefficientwise this is c -> c^(q/p), the inverse of Frobenius on F_q.
fn pth_root(f: &Poly) -> Result<Poly> {
    let field = f.field().clone();
    let p = field.p() as usize;
    let root_exp = field.q() / field.p() as u128;
    let deg = match f.degree() {
        Degree::MinusInfinity => return Ok(f.clone()),
        Degree::Finite(d) => d,
    };
    if deg % p != 0 {
        return Err(Error::input("polynomial is not a p-th power"));
    }
    let mut coeffs = Vec::with_capacity(deg / p + 1);
    for i in 0..=deg {
        let c = f.coeff(i);
        if i % p == 0 {
            coeffs.push(c.pow(root_exp));
        } else if !c.is_zero() {
            return Err(Error::input("polynomial is not a p-th power"));
        }
    }
    Ok(DensePoly::new(&field.zero(), coeffs))
}

/// Distinct-degree splitting of a monic squarefree polynomial: returns
/// (product of all irreducible factors of degree d, d) pairs, increasing d.
pub fn distinct_degree_split(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let q = field.q();
    let t = Poly::var(&field.zero());
    let mut rest = f.clone();
    let mut frob = t.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 0usize;
    while let Degree::Finite(n) = rest.degree() {
        if n == 0 {
            break;
        }
        d += 1;
        if 2 * d > n {
            out.push((rest.clone(), n));
            break;
        }
        frob = frob.pow_mod(q, &rest)?;
        let g = frob.sub(&t).gcd(&rest);
        if !g.is_constant() {
            out.push((g.clone(), d));
            rest = rest.divmod(&g)?.0;
            frob = frob.rem(&rest)?;
        }
    }
    Ok(out)
}

/// Equal-degree splitting (Cantor-Zassenhaus, odd q): factor a monic product
/// of distinct irreducibles all of degree d into those irreducibles.
fn equal_degree_split(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let field = f.field().clone();
    let n = f.degree().finite().expect("nonzero input");
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let qd = (field.q())
        .checked_pow(d as u32)
        .ok_or_else(|| Error::budget(format!("splitting exponent q^{d} exceeds 128 bits")))?;
    let exp = (qd - 1) / 2;
    let one = DensePoly::constant(field.one());
    loop {
        let u = random_poly(&field, n, rng);
        if u.is_constant() {
            continue;
        }
        let g0 = u.gcd(f);
        let candidate = if !g0.is_constant() && g0.degree() < f.degree() {
            g0
        } else {
            let w = u.pow_mod(exp, f)?;
            w.sub(&one).gcd(f)
        };
        if candidate.is_constant() || candidate.degree() == f.degree() {
            continue;
        }
        let rest = f.divmod(&candidate)?.0;
        let mut left = equal_degree_split(&candidate, d, rng)?;
        let mut right = equal_degree_split(&rest, d, rng)?;
        left.append(&mut right);
        return Ok(left);
    }
}

/// Uniform random polynomial of degree < n.
fn random_poly(field: &Arc<FieldSpec>, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let p = field.p();
    let e = field.ext_degree();
    let coeffs: Vec<FqElem> = (0..n)
        .map(|_| {
            let coords: Vec<u64> = (0..e).map(|_| rng.gen_range(0..p)).collect();
            field.element(coords).expect("coords in range")
        })
        .collect();
    DensePoly::new(&field.zero(), coeffs)
}

/// Rabin irreducibility test for a nonconstant polynomial (applied to its
/// monic part): f of degree n is irreducible over F_q iff t^(q^n) = t mod f
/// and, for every prime r dividing n, gcd(t^(q^(n/r)) - t, f) = 1.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        Degree::MinusInfinity | Degree::Finite(0) => return Ok(false),
        Degree::Finite(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let (f, _) = f.monic();
    let field = f.field().clone();
    let q = field.q();
    let t = Poly::var(&field.zero()).rem(&f)?;

    // frobenius_powers[k] = t^(q^k) mod f, built by iterating x -> x^q
    let mut frob = t.clone();
    let mut needed: Vec<usize> = prime_divisors(n).into_iter().map(|r| n / r).collect();
    needed.sort_unstable();
    needed.dedup();
    let mut idx = 0;
    for k in 1..=n {
        frob = frob.pow_mod(q, &f)?;
        if idx < needed.len() && needed[idx] == k {
            idx += 1;
            if !frob.sub(&t).gcd(&f).is_constant() {
                return Ok(false);
            }
        }
    }
    Ok(frob.sub(&t).is_zero())
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Number of monic irreducibles of degree exactly d over F_q, by Moebius
/// inversion of q^d = sum over e dividing d of e * (count at degree e).
pub fn necklace_count(q: u128, d: u32) -> Result<u128> {
    if d == 0 {
        return Err(Error::input("degree must be positive"));
    }
    let mut sum: i128 = 0;
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = moebius(e);
        if mu == 0 {
            continue;
        }
        let term = q
            .checked_pow(d / e)
            .ok_or_else(|| Error::budget(format!("q^{} exceeds 128 bits", d / e)))?;
        let term = i128::try_from(term)
            .map_err(|_| Error::budget(format!("q^{} exceeds 127 bits", d / e)))?;
        sum += mu as i128 * term;
    }
    debug_assert!(sum >= 0 && sum % d as i128 == 0);
    Ok((sum / d as i128) as u128)
}

fn moebius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

// ---- sieve over coded polynomials ----
//
// For small q, elements are coded 0..q in canonical order and arithmetic goes
// through two q*q lookup tables. A monic polynomial of degree d is then the
// base-q number formed by its d non-leading coefficients, which makes "cross
// off every reducible" a bit-vector walk: a monic f of degree d is reducible
// exactly when some irreducible of degree <= d/2 divides it, so marking the
// products g*h (g irreducible of low degree, h monic of complementary
// degree) leaves the irreducibles unmarked.

const SIEVE_MAX_Q: u128 = 64;
const SIEVE_MAX_BITS: u128 = 1 << 28;

struct CodeTables {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl CodeTables {
    fn build(field: &Arc<FieldSpec>) -> Result<CodeTables> {
        let q = field.q();
        if q > SIEVE_MAX_Q {
            return Err(Error::input(format!(
                "sieve supports q <= {SIEVE_MAX_Q}, got q = {q}"
            )));
        }
        let q = q as usize;
        let elems: Vec<FqElem> = field.elements().collect();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let code_of = |x: &FqElem| -> u8 {
            let p = field.p() as usize;
            let mut c = 0usize;
            for &d in x.coords().iter().rev() {
                c = c * p + d as usize;
            }
            c as u8
        };
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = code_of(&a.add(b));
                mul[i * q + j] = code_of(&a.mul(b));
            }
        }
        Ok(CodeTables { q, add, mul })
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    /// Product of coded polynomials (little-endian, no trailing-zero rule needed).
    fn poly_mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        out
    }
}

struct BitVec {
    bits: Vec<u64>,
}

impl BitVec {
    fn new(n: usize) -> BitVec {
        BitVec {
            bits: vec![0; (n + 63) / 64],
        }
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.bits[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Coded irreducibles by degree: lists[d] holds each monic irreducible of
/// degree d as its d+1 little-endian codes (leading code 1).
struct Sieve {
    tables: CodeTables,
    lists: Vec<Vec<Vec<u8>>>,
}

impl Sieve {
    fn up_to(field: &Arc<FieldSpec>, max_deg: usize) -> Result<Sieve> {
        let tables = CodeTables::build(field)?;
        let mut sieve = Sieve {
            tables,
            lists: vec![Vec::new()],
        };
        for d in 1..=max_deg {
            let marked = sieve.mark_reducible(d)?;
            let q = sieve.tables.q;
            let total = (q as u128).pow(d as u32) as usize;
            let mut list = Vec::new();
            for idx in 0..total {
                if !marked.get(idx) {
                    list.push(decode_monic(idx, d, q));
                }
            }
            sieve.lists.push(list);
        }
        Ok(sieve)
    }

    /// Bit vector over monic degree-d polynomials with reducible ones set.
    /// Requires lists for all degrees <= d/2 to be present.
    fn mark_reducible(&self, d: usize) -> Result<BitVec> {
        let q = self.tables.q;
        let total = (q as u128).pow(d as u32);
        if total > SIEVE_MAX_BITS {
            return Err(Error::budget(format!(
                "sieve needs {total} slots at degree {d}; limit is {SIEVE_MAX_BITS}"
            )));
        }
        let total = total as usize;
        let mut marked = BitVec::new(total);
        for a in 1..=d / 2 {
            for g in &self.lists[a] {
                // multiples of g once per g: c*g for each constant code c
                let scaled: Vec<Vec<u8>> = (0..q as u8)
                    .map(|c| g.iter().map(|&x| self.tables.mul(c, x)).collect())
                    .collect();
                // h = h_hi * t + c0 over monic h_hi of degree d-a-1
                let hi_total = (q as u128).pow((d - a - 1) as u32) as usize;
                let mut prod = vec![0u8; d + 1];
                for hi_idx in 0..hi_total {
                    let h_hi = decode_monic(hi_idx, d - a - 1, q);
                    let base = self.tables.poly_mul(g, &h_hi); // monic, degree d-1
                    // g*h = base shifted up once, plus c0*g on the low coeffs
                    for c0 in 0..q {
                        prod[0] = scaled[c0][0];
                        for i in 1..=d {
                            let mut v = if i - 1 < base.len() { base[i - 1] } else { 0 };
                            if i < scaled[c0].len() {
                                v = self.tables.add(v, scaled[c0][i]);
                            }
                            prod[i] = v;
                        }
                        // index ignores the leading 1
                        let mut idx = 0usize;
                        for i in (0..d).rev() {
                            idx = idx * q + prod[i] as usize;
                        }
                        marked.set(idx);
                    }
                }
            }
        }
        Ok(marked)
    }
}

fn decode_monic(mut idx: usize, d: usize, q: usize) -> Vec<u8> {
    let mut out = vec![0u8; d + 1];
    for c in out.iter_mut().take(d) {
        *c = (idx % q) as u8;
        idx /= q;
    }
    out[d] = 1;
    out
}

fn code_list_to_poly(field: &Arc<FieldSpec>, codes: &[u8], elems: &[FqElem]) -> Poly {
    DensePoly::new(
        &field.zero(),
        codes.iter().map(|&c| elems[c as usize].clone()).collect(),
    )
}

/// All monic irreducibles of degree 1..=max_deg, sorted canonically.
/// Materializes every polynomial; see [`count_monic_irreducibles`] for
/// count-only queries at sizes where that would be wasteful.
pub fn monic_irreducibles(field: &Arc<FieldSpec>, max_deg: usize) -> Result<Vec<Poly>> {
    let sieve = Sieve::up_to(field, max_deg)?;
    let elems: Vec<FqElem> = field.elements().collect();
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for codes in &sieve.lists[d] {
            out.push(code_list_to_poly(field, codes, &elems));
        }
    }
    Ok(out)
}

/// Number of monic irreducibles of degree exactly `deg`, by sieve, without
/// materializing them. Only irreducibles of degree <= deg/2 are stored.
pub fn count_monic_irreducibles(field: &Arc<FieldSpec>, deg: usize) -> Result<u64> {
    if deg == 0 {
        return Err(Error::input("degree must be positive"));
    }
    let sieve = Sieve::up_to(field, deg / 2)?;
    let marked = sieve.mark_reducible(deg)?;
    let total = (sieve.tables.q as u128).pow(deg as u32) as u64;
    Ok(total - marked.count_ones())
}
