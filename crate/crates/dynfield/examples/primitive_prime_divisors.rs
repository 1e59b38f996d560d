//! Primitive prime divisors along an orbit: a prime is primitive at index
//! n when it divides phi^n(b) but none of the earlier orbit values, and
//! l-primitive when its multiplicity is moreover not a multiple of l.
//! The indices carrying no l-primitive prime form the set this module
//! reports; for orbits like the one below it is expected to be finite,
//! and empty as far as we scan.
//!
//! Run with: cargo run --example primitive_prime_divisors

use dynfield::field::FieldSpec;
use dynfield::parse;
use dynfield::ratfunc::RatFunc;
use dynfield::zsigmondy::{check_dn_height_bound, zsigmondy_set, ZsigOptions};

fn main() {
    let f3 = FieldSpec::prime(3).unwrap();
    let phi = parse::parse_map("x^2+t", &f3).unwrap();
    let zero = RatFunc::from_int(&f3, 0);

    let report = zsigmondy_set(&phi, &zero, 2, 8, &ZsigOptions::default()).unwrap();
    println!(
        "orbit of 0 under x^2+t over F_3, l = 2, excluded places: {}",
        report
            .excluded
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for rec in &report.records {
        let named = |ps: &[dynfield::places::Place]| {
            if ps.is_empty() {
                "(none)".to_string()
            } else {
                ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
            }
        };
        println!(
            "  n = {}: primitive {} | 2-primitive {}",
            rec.n,
            named(&rec.primitive),
            named(&rec.ell_primitive)
        );
    }
    println!(
        "indices in [1, 8] with no 2-primitive prime: {:?}",
        report.members
    );

    // Every reported index also satisfies the height bound on the
    // non-primitive part of the orbit value (trivially here: there are no
    // such indices for this orbit).
    let checks = check_dn_height_bound(&report).unwrap();
    assert!(checks.iter().all(|&(_, ok)| ok));

    // Contrast: the monomial x^2 at base t. Every orbit value is a power
    // of t, the valuations are all even, and every index lacks a
    // 2-primitive prime. The degenerate shape is why results in this area
    // exclude monomial-like maps.
    let mono = parse::parse_map("x^2", &f3).unwrap();
    let t = parse::parse_ratfunc("t", &f3).unwrap();
    let degenerate = zsigmondy_set(&mono, &t, 2, 8, &ZsigOptions::default()).unwrap();
    println!(
        "\nmonomial contrast, x^2 at t: indices with no 2-primitive prime: {:?}",
        degenerate.members
    );
    let mono_checks = check_dn_height_bound(&degenerate).unwrap();
    assert!(mono_checks.iter().all(|&(_, ok)| ok));
    println!("height bound on the non-primitive part holds at every index");
}
