//! Finite fields, polynomial factoring, and counting irreducibles.
//!
//! Run with: cargo run --example fields_and_factoring

use dynfield::factor;
use dynfield::field::FieldSpec;
use dynfield::parse;

fn main() {
    let f3 = FieldSpec::prime(3).unwrap();

    let f = parse::parse_poly("t^6+t^2", &f3).unwrap();
    let factored = factor::factor(&f, 0).unwrap();
    println!("{f} over F_3 factors as");
    for (p, e) in factored.factors() {
        println!("  ({p})^{e}");
    }
    assert!(factored.recompose().sub(&f).is_zero());

    // How many monic irreducibles are there of each degree? The count is
    // the classical necklace number (1/D) sum_{e|D} mu(e) q^(D/e).
    println!();
    for d in 1..=6 {
        let count = factor::count_monic_irreducibles(&f3, d).unwrap();
        println!("degree {d}: {count} monic irreducibles over F_3");
    }

    // Enumeration agrees with the count, and every element of the list is
    // genuinely irreducible.
    let small = factor::monic_irreducibles(&f3, 3).unwrap();
    println!("\nall {} monic irreducibles of degree <= 3:", small.len());
    for p in &small {
        assert!(factor::is_irreducible(p).unwrap());
    }
    println!(
        "  {}",
        small
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );

    // Extension fields are described by a modulus in u. Elements print
    // with u as well, so output parses back in.
    let f9 = parse::parse_field("p=3 e=2 mod=u^2+1").unwrap();
    println!("\n{} has {} elements", f9.describe(), f9.q());
    let g = parse::parse_poly("t^2+(u+1)*t+u", &f9).unwrap();
    let gfac = factor::factor(&g, 0).unwrap();
    println!("{g} over F_9 factors as");
    for (p, e) in gfac.factors() {
        println!("  ({p})^{e}");
    }
}
