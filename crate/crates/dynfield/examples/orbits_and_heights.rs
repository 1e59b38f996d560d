//! Orbits of a polynomial map over F_q(t): height growth, the canonical
//! height as a certified interval, and the preperiodic/wandering split.
//!
//! Run with: cargo run --example orbits_and_heights

use dynfield::dynamics::{PointClass, Rat};
use dynfield::field::FieldSpec;
use dynfield::parse;
use dynfield::ratfunc::RatFunc;

fn main() {
    let f3 = FieldSpec::prime(3).unwrap();
    let phi = parse::parse_map("x^2+t", &f3).unwrap();
    let zero = RatFunc::from_int(&f3, 0);

    // Height of a rational function is max(deg numerator, deg denominator).
    // Along a wandering orbit of a degree-d map it settles into h -> d*h.
    println!("orbit of 0 under x^2+t over F_3:");
    let mut orbit = phi.orbit(zero.clone());
    for n in 0..=6 {
        let v = orbit.value(n).unwrap();
        println!("  phi^{n}(0) = {v}   (height {})", v.height());
    }

    // The canonical height is lim h(phi^n(b)) / d^n. The interval returned
    // here is rigorous: the true limit lies inside it, and the radius
    // shrinks like 1/d^n.
    println!("\ncanonical height of 0:");
    for n in [4, 7, 10] {
        let iv = phi.canonical_height_interval(&zero, n).unwrap();
        println!(
            "  depth {n:>2}: [{}, {}] (radius {})",
            iv.lo(),
            iv.hi(),
            iv.radius
        );
    }
    let deep = phi.canonical_height_interval(&zero, 10).unwrap();
    assert!(deep.contains(Rat::new(1, 2)));
    println!("  the limit is 1/2, inside every interval above");

    // classify_point decides the orbit type with a witness index. For
    // (x-t)^2+t the critical point t is fixed; for x^2+t the point 0
    // escapes: once height growth clears the map's gap, it never returns.
    let pcf = parse::parse_map("(x-t)^2+t", &f3).unwrap();
    let t = parse::parse_ratfunc("t", &f3).unwrap();
    match pcf.classify_point(&t, 1000).unwrap() {
        PointClass::Preperiodic { preperiod, period } => {
            println!("\n(x-t)^2+t at t: preperiodic, preperiod {preperiod}, period {period}");
        }
        PointClass::Wandering { .. } => unreachable!(),
    }
    match phi.classify_point(&zero, 1000).unwrap() {
        PointClass::Wandering { escape_index } => {
            println!("x^2+t at 0: wandering, escape certified at step {escape_index}");
        }
        PointClass::Preperiodic { .. } => unreachable!(),
    }

    // Quadratic maps carry a normal form x^2 + c after conjugation.
    let data = pcf.quadratic_data().unwrap();
    println!(
        "(x-t)^2+t has normal form x^2 + c with c = {}; conjugate to x^2: {}",
        data.normal_c,
        data.conjugate_to_square()
    );
}
