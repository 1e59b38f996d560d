//! Expression parsing for the command surface.
//!
//! One grammar serves every input: integer literals, the variables t, x,
//! and u, the operators + - * / ^, and parentheses. ^ binds tightest, then
//! unary minus, then * and /, then + and -; exponents are nonnegative
//! integer literals. What a variable means depends on the context: t is
//! the rational-function variable, x is the map variable (maps only), and
//! u is either the modulus variable (field descriptions) or the generator
//! of an extension field (everywhere else).
//!
//! The printers on [`Poly`], [`RatFunc`], and map polynomials emit this
//! grammar back, and parse(print(parse(s))) = parse(s) for every
//! accepted input s.

use std::sync::Arc;

use crate::dynamics::PolyMap;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldSpec};
use crate::poly::{DensePoly, Poly};
use crate::ratfunc::{KPoly, RatFunc};

/// Largest accepted exponent; keeps a stray `t^9999999` from ballooning.
const EXPONENT_CAP: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int { residue: u64, exact: Option<u128> },
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

/// Integer literals are reduced mod p on the fly (so arbitrarily long
/// digit strings are fine as coefficients) and kept exactly while they
/// fit (exponents need the exact value).
fn lex(src: &str, p: u64) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let tok = match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let mut residue: u128 = 0;
                let mut exact: Option<u128> = Some(0);
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    let d = (bytes[i] - b'0') as u128;
                    residue = (residue * 10 + d) % p as u128;
                    exact = exact
                        .and_then(|e| e.checked_mul(10))
                        .and_then(|e| e.checked_add(d));
                    i += 1;
                }
                Tok::Int {
                    residue: residue as u64,
                    exact,
                }
            }
            c @ (b't' | b'x' | b'u') => {
                i += 1;
                Tok::Var(c as char)
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'/' => {
                i += 1;
                Tok::Slash
            }
            b'^' => {
                i += 1;
                Tok::Caret
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            _ => {
                let c = src[i..].chars().next().expect("in-bounds index");
                return Err(syntax(i, format!("unexpected character {c:?}")));
            }
        };
        toks.push((tok, start));
    }
    Ok(toks)
}

/// What the variables mean while evaluating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Context {
    /// t and u (extension generator); result must come out constant in x.
    Scalar,
    /// x, t, and u; the result is a polynomial in x.
    Map,
    /// u alone, standing for the modulus variable over the prime field.
    Modulus,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
    field: &'a Arc<FieldSpec>,
    context: Context,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        self.idx += 1;
        t
    }

    fn constant(&self, r: RatFunc) -> KPoly {
        DensePoly::constant(r)
    }

    fn variable(&self, name: char, pos: usize) -> Result<KPoly> {
        let k = self.field;
        match (name, self.context) {
            ('x', Context::Map) => Ok(DensePoly::var(&RatFunc::zero(k))),
            ('x', _) => Err(syntax(pos, "the variable x is only allowed in maps")),
            ('t', Context::Scalar | Context::Map) => Ok(self.constant(RatFunc::var(k))),
            ('u', Context::Scalar | Context::Map) => {
                let gen = k.generator().map_err(|_| {
                    syntax(pos, format!("u names an extension generator, but the field has only {} elements", k.q()))
                })?;
                Ok(self.constant(RatFunc::from_poly(DensePoly::constant(gen))))
            }
            ('u', Context::Modulus) => Ok(self.constant(RatFunc::var(k))),
            (_, Context::Modulus) => Err(syntax(
                pos,
                format!("a field modulus is written in u alone, not {name}"),
            )),
            _ => unreachable!("lexer only emits t, x, u"),
        }
    }

    fn expr(&mut self) -> Result<KPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<KPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.divide(acc, rhs, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, lhs: KPoly, rhs: KPoly, pos: usize) -> Result<KPoly> {
        if rhs.is_zero() {
            return Err(syntax(pos, "division by zero"));
        }
        if rhs.degree().finite() != Some(0) {
            return Err(syntax(
                pos,
                "dividing by an expression in x would leave the polynomial maps",
            ));
        }
        let inv = rhs.coeff(0).inv()?;
        Ok(lhs.scale(&inv))
    }

    fn unary(&mut self) -> Result<KPoly> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<KPoly> {
        let base = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let exp = match self.bump() {
            Some((Tok::Int { exact: Some(e), .. }, _)) if e <= EXPONENT_CAP => e as usize,
            Some((Tok::Int { .. }, _)) => {
                return Err(syntax(pos, format!("exponent exceeds the cap {EXPONENT_CAP}")))
            }
            _ => {
                return Err(syntax(
                    pos,
                    "the exponent must be a nonnegative integer literal",
                ))
            }
        };
        if matches!(self.peek(), Some(Tok::Caret)) {
            return Err(syntax(self.pos(), "chained ^ needs parentheses"));
        }
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<KPoly> {
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Int { residue, .. }, _)) => {
                Ok(self.constant(RatFunc::from_int(self.field, residue as i64)))
            }
            Some((Tok::Var(c), p)) => self.variable(c, p),
            Some((Tok::LParen, open)) => {
                let v = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(v),
                    _ => Err(syntax(open, "unclosed parenthesis")),
                }
            }
            _ => Err(syntax(pos, "expected a number, a variable, or (")),
        }
    }
}

fn evaluate(src: &str, field: &Arc<FieldSpec>, context: Context) -> Result<KPoly> {
    let toks = lex(src, field.p())?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut parser = Parser {
        toks,
        idx: 0,
        end: src.len(),
        field,
        context,
    };
    let v = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return Err(syntax(parser.pos(), "unexpected trailing input"));
    }
    Ok(v)
}

fn scalar_of(v: KPoly) -> RatFunc {
    debug_assert!(v.degree().finite().map_or(true, |d| d == 0));
    v.coeff(0)
}

/// A rational function in t, e.g. a base point: "0", "t^2+1", "1/(t+1)".
pub fn parse_ratfunc(src: &str, field: &Arc<FieldSpec>) -> Result<RatFunc> {
    Ok(scalar_of(evaluate(src, field, Context::Scalar)?))
}

/// A polynomial in t. Division is fine as long as it cancels away.
pub fn parse_poly(src: &str, field: &Arc<FieldSpec>) -> Result<Poly> {
    let r = parse_ratfunc(src, field)?;
    if !r.is_polynomial() {
        return Err(Error::input(format!("{r} is not a polynomial in t")));
    }
    Ok(r.numerator().clone())
}

/// A polynomial map in x of degree at least 2, e.g. "x^2+t", "(x-t)^2+t".
pub fn parse_map(src: &str, field: &Arc<FieldSpec>) -> Result<PolyMap> {
    PolyMap::new(evaluate(src, field, Context::Map)?)
}

/// A field description: "p=<prime>" for prime fields, with "e=<k>" and
/// "mod=<monic irreducible in u>" for extensions, e.g.
/// "p=3 e=2 mod=u^2+1". Everything after "mod=" is the modulus
/// expression, so it may contain spaces; e is optional when mod pins the
/// degree.
pub fn parse_field(src: &str) -> Result<Arc<FieldSpec>> {
    let (head, modulus_src) = match src.find("mod=") {
        Some(i) => (&src[..i], Some(src[i + 4..].trim())),
        None => (src, None),
    };
    let mut p: Option<u64> = None;
    let mut e: Option<usize> = None;
    for tok in head.split_whitespace() {
        if let Some(v) = tok.strip_prefix("p=") {
            p = Some(
                v.parse()
                    .map_err(|_| Error::input(format!("p={v} is not an integer")))?,
            );
        } else if let Some(v) = tok.strip_prefix("e=") {
            e = Some(
                v.parse()
                    .map_err(|_| Error::input(format!("e={v} is not an integer")))?,
            );
        } else {
            return Err(Error::input(format!(
                "unrecognized field token {tok:?}; expected p=, e=, or mod="
            )));
        }
    }
    let p = p.ok_or_else(|| Error::input("a field description needs p=<prime>"))?;
    match (e, modulus_src) {
        (None | Some(1), None) => FieldSpec::prime(p),
        (Some(_), None) => Err(Error::input(
            "an extension field needs mod=<monic irreducible polynomial in u>",
        )),
        (e, Some(msrc)) => {
            let prime = FieldSpec::prime(p)?;
            let modulus = evaluate(msrc, &prime, Context::Modulus)?;
            let scalar = scalar_of(modulus);
            if !scalar.is_polynomial() {
                return Err(Error::input(format!("the modulus {scalar} is not a polynomial")));
            }
            let coeffs: Vec<u64> = scalar
                .numerator()
                .coeffs()
                .iter()
                .map(|c| c.coords()[0])
                .collect();
            if coeffs.len() < 3 {
                return Err(Error::input(
                    "the modulus must have degree at least 2; use a bare p=<prime> otherwise",
                ));
            }
            if let Some(e) = e {
                if coeffs.len() != e + 1 {
                    return Err(Error::input(format!(
                        "e={e} does not match the modulus degree {}",
                        coeffs.len() - 1
                    )));
                }
            }
            FieldSpec::extension(p, coeffs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Coeff;
    use proptest::prelude::*;

    fn f3() -> Arc<FieldSpec> {
        FieldSpec::prime(3).unwrap()
    }

    fn f7() -> Arc<FieldSpec> {
        FieldSpec::prime(7).unwrap()
    }

    fn f9() -> Arc<FieldSpec> {
        FieldSpec::extension(3, vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn polynomial_example() {
        let k = f3();
        assert_eq!(
            parse_poly("t^2+2*t+1", &k).unwrap(),
            Poly::from_ints(&k, &[1, 2, 1])
        );
    }

    #[test]
    fn shifted_square_map_example() {
        let k = f3();
        let phi = parse_map("(x - t)^2 + t", &k).unwrap();
        let coeffs: Vec<RatFunc> = [&[0i64, 1, 1][..], &[0, -2], &[1]]
            .iter()
            .map(|c| RatFunc::from_poly(Poly::from_ints(&k, c)))
            .collect();
        assert_eq!(phi, PolyMap::from_coeffs(&k, coeffs).unwrap());
        let data = phi.quadratic_data().unwrap();
        assert_eq!(data.critical_point, RatFunc::var(&k));
    }

    #[test]
    fn rational_coefficients_in_maps() {
        let k = f3();
        let phi = parse_map("x^2 + 1/t", &k).unwrap();
        let c0 = phi.as_kpoly().coeff(0);
        assert_eq!(c0, RatFunc::var(&k).inv().unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        let k = f7();
        let t = RatFunc::var(&k);
        assert_eq!(
            parse_ratfunc("-t^2", &k).unwrap(),
            t.mul(&t).neg(),
            "^ binds before unary minus"
        );
        assert_eq!(
            parse_ratfunc("2+3*t^2", &k).unwrap(),
            t.mul(&t).scale_int(3).add(&RatFunc::from_int(&k, 2))
        );
        assert_eq!(
            parse_ratfunc("t-1-1", &k).unwrap(),
            t.sub(&RatFunc::from_int(&k, 2))
        );
        assert_eq!(
            parse_ratfunc("6/2/3", &k).unwrap(),
            RatFunc::from_int(&k, 1)
        );
        assert_eq!(parse_ratfunc("t^0", &k).unwrap(), RatFunc::from_int(&k, 1));
        assert_eq!(
            parse_ratfunc("2*-t", &k).unwrap(),
            t.scale_int(-2)
        );
    }

    #[test]
    fn long_literals_reduce_mod_p() {
        let k = f7();
        // 10^40 mod 7 = 4^40 mod 7 ... just compare against the field's
        // own reduction of a smaller congruent number
        let big = "9999999999999999999999999999999999999999";
        let parsed = parse_ratfunc(big, &k).unwrap();
        // 10 = 3 mod 7, and 9...9 (40 nines) = 10^40 - 1; 3^40 mod 7 = 4,
        // so the literal is 3.
        assert_eq!(parsed, RatFunc::from_int(&k, 3));
    }

    #[test]
    fn division_in_poly_context() {
        let k = f3();
        assert_eq!(
            parse_poly("(t^2+2)/(t+1)", &k).unwrap(),
            Poly::from_ints(&k, &[2, 1])
        );
        let err = parse_poly("1/t", &k).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn extension_generator_constants() {
        let k = f9();
        let u = parse_ratfunc("u", &k).unwrap();
        let g = RatFunc::from_poly(DensePoly::constant(k.generator().unwrap()));
        assert_eq!(u, g);
        // u^2 = -1 for this modulus
        assert_eq!(
            parse_ratfunc("u^2", &k).unwrap(),
            RatFunc::from_int(&k, -1)
        );
        assert!(parse_ratfunc("u", &f3()).is_err());
        let printed = format!("{}", parse_poly("(u+1)*t", &k).unwrap());
        assert_eq!(printed, "(u+1)*t");
    }

    #[test]
    fn field_descriptions() {
        assert_eq!(parse_field("p=3").unwrap().q(), 3);
        assert_eq!(parse_field("p=3 e=2 mod=u^2+1").unwrap().q(), 9);
        assert_eq!(parse_field("p=3 mod=u^2 + 1").unwrap().q(), 9);
        assert_eq!(parse_field("p=5 e=1").unwrap().q(), 5);
        for bad in [
            "p=4",
            "p=3 e=3 mod=u^2+1",
            "p=3 e=2",
            "p=3 mod=u+1",
            "p=3 q=9",
            "e=2",
            "p=3 e=2 mod=u^2+u",
        ] {
            assert!(parse_field(bad).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let k = f3();
        let cases: &[(&str, usize)] = &[
            ("t++1", 2),
            ("(t", 0),
            ("t^t", 2),
            ("t^2^3", 3),
            ("1/0", 1),
            ("2t", 1),
            ("t$", 1),
            ("", 0),
        ];
        for (src, at) in cases {
            match parse_ratfunc(src, &k) {
                Err(Error::Syntax { pos, .. }) => assert_eq!(pos, *at, "position for {src:?}"),
                other => panic!("{src:?} should be a syntax error, got {other:?}"),
            }
        }
        assert!(matches!(
            parse_ratfunc("x+1", &k),
            Err(Error::Syntax { pos: 0, .. })
        ));
    }

    #[test]
    fn maps_must_have_degree_two() {
        let k = f3();
        assert!(parse_map("x+1", &k).is_err());
        assert!(parse_map("t^2", &k).is_err());
        assert!(parse_map("x^2/x", &k).is_err());
    }

    // Division-free expressions in x and t, valid by construction.
    fn expr_strategy() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            (0u64..30).prop_map(|n| n.to_string()),
            Just("t".to_string()),
            Just("x".to_string()),
        ];
        leaf.prop_recursive(4, 48, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}+{b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}-{b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
                (inner.clone(), 0usize..5).prop_map(|(a, e)| format!("({a})^{e}")),
                inner.prop_map(|a| format!("-({a})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(src in expr_strategy()) {
            let k = f3();
            let first = evaluate(&src, &k, Context::Map).unwrap();
            let printed = format!("{first}");
            let second = evaluate(&printed, &k, Context::Map).unwrap();
            prop_assert_eq!(first, second);
        }

        #[test]
        fn ratfunc_display_round_trips(
            num in proptest::collection::vec(-8i64..8, 1..6),
            den in proptest::collection::vec(-8i64..8, 1..6),
        ) {
            let k = f3();
            let d = Poly::from_ints(&k, &den);
            prop_assume!(!d.is_zero());
            let r = RatFunc::new(Poly::from_ints(&k, &num), d).unwrap();
            let parsed = parse_ratfunc(&format!("{r}"), &k).unwrap();
            prop_assert_eq!(parsed, r);
        }
    }
}
