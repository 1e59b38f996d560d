//! Elliptic-curve certificates for quadratic maps. Marking a point c on a
//! quadratic phi gives the cubic Y^2 = (x - c) * phi(x); its j-invariant
//! detects whether the associated double covers are isotrivial. On top of
//! that sit three checkable certificates: non-isotriviality, the orbit
//! conditions implying a finite set of indices without 2-primitive
//! primes, and membership in an explicit good family.
//!
//! Run with: cargo run --example curve_certificates

use dynfield::curves;
use dynfield::field::FieldSpec;
use dynfield::parse;

fn main() {
    let f5 = FieldSpec::prime(5).unwrap();

    // The j-invariant of the cubic marked at the critical value. For
    // x^2+t it is a nonconstant function of t.
    let generic = parse::parse_map("x^2+t", &f5).unwrap();
    let info = curves::critical_value_curve(&generic).unwrap();
    println!("x^2+t over F_5: marked cubic Y^2 = {}", info.cubic());
    println!("  j = {}  (constant: {})", info.j(), info.j().is_constant());

    // When the critical point is fixed, the curve is the degenerate one
    // with j = 1728, whatever the field.
    let fixed = parse::parse_map("(x-t)^2+t", &f5).unwrap();
    let fixed_info = curves::critical_value_curve(&fixed).unwrap();
    println!(
        "(x-t)^2+t over F_5: j = {} (equals 1728: {})",
        fixed_info.j(),
        fixed_info.j_equals_1728()
    );

    // Certificate 1: non-isotriviality via the third iterate, whose double
    // cover has genus 3, plus a nonconstant j.
    let cert = curves::certify_nonisotrivial(&generic, 64).unwrap();
    println!(
        "\nnon-isotriviality of x^2+t: genus {} cover, squarefree {}, j nonconstant {} => valid {}",
        cert.genus, cert.squarefree_ok, cert.j_nonconstant, cert.valid
    );
    let rejected = curves::certify_nonisotrivial(&fixed, 64).unwrap();
    println!(
        "non-isotriviality of (x-t)^2+t: valid {} (j is the constant {})",
        rejected.valid,
        rejected.j.as_ref().unwrap()
    );

    // Certificate 2: the orbit conditions for a monic quadratic. A
    // wandering critical orbit with no squares in it (after negating the
    // first value) and a nonconstant j certifies: only finitely many
    // indices lack a 2-primitive prime, for every wandering base point.
    let f3 = FieldSpec::prime(3).unwrap();
    let phi3 = parse::parse_map("x^2+t", &f3).unwrap();
    let cond = curves::zsigmondy_finiteness_conditions(&phi3, 6, 1000).unwrap();
    println!(
        "\norbit conditions for x^2+t over F_3: critical orbit wandering {}, no squares through \
         level 6: {}, j nonconstant {} => all hold {}",
        cond.critical_wandering,
        cond.first_square_level.is_none(),
        cond.j_nonconstant,
        cond.all_hold
    );
    println!(
        "  iterates certified irreducible for {}",
        cond.galois.certified_irreducible_through
    );

    // Certificate 3: the family (x - f*g^d)^2 + g. Its hypotheses close up
    // for arbitrary n, so acceptance certifies the whole iterate tower.
    let params = curves::FamilyParams::new(
        parse::parse_poly("t", &f3).unwrap(),
        parse::parse_poly("t", &f3).unwrap(),
        1,
    )
    .unwrap();
    let fam = curves::verify_family_instance(&params, 6, 1000).unwrap();
    println!(
        "\nfamily instance f = t, g = t, d = 1: map {} accepted {} (irreducible for {})",
        fam.map.as_kpoly(),
        fam.accepted,
        fam.galois
            .as_ref()
            .map(|g| g.certified_irreducible_through.to_string())
            .unwrap_or_default()
    );
    let bad = curves::FamilyParams::new(
        parse::parse_poly("1", &f3).unwrap(),
        parse::parse_poly("t", &f3).unwrap(),
        1,
    )
    .unwrap();
    let rejected = curves::verify_family_instance(&bad, 6, 1000).unwrap();
    println!(
        "family instance f = 1, g = t, d = 1: accepted {} ({})",
        rejected.accepted,
        rejected.reject_reason.as_deref().unwrap_or("")
    );
}
