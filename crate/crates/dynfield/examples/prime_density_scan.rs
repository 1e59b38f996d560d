//! How many primes divide some value of an orbit? For each monic
//! irreducible pi up to a degree bound, reduce the orbit modulo pi and
//! walk it with Brent's cycle finder; the residue orbit either hits zero
//! (pi divides an orbit value) or closes up without doing so. The scan
//! reports exact per-degree proportions. For orbits certified by the
//! conditions in this crate, the proportion tends to zero as the degree
//! bound grows.
//!
//! Run with: cargo run --example prime_density_scan

use dynfield::density::{density_scan, orbit_hits_zero_mod_p, HitStatus};
use dynfield::field::FieldSpec;
use dynfield::parse;
use dynfield::places::Place;
use dynfield::ratfunc::RatFunc;

fn main() {
    let f3 = FieldSpec::prime(3).unwrap();
    let phi = parse::parse_map("x^2+t", &f3).unwrap();
    let zero = RatFunc::from_int(&f3, 0);

    // A single prime first. The orbit of 0 is t, t^2+t, ... and t+1
    // divides the second value.
    let place = Place::finite(parse::parse_poly("t+1", &f3).unwrap()).unwrap();
    let record = orbit_hits_zero_mod_p(&phi, &zero, &place, 10_000).unwrap();
    match record.status {
        HitStatus::Hit(n) => println!("t+1 divides phi^{n}(0), found in {} residue steps", record.steps_used),
        HitStatus::Miss => println!("t+1 divides no orbit value"),
        HitStatus::Bad(why) => println!("bad reduction: {why}"),
    }

    // The full scan over every monic irreducible of degree <= 6 (196 of
    // them). The residue walk for a degree-D prime needs at most 3^D + 1
    // steps, so the whole scan is exact and fast; pass Some(k) to spread
    // it over k threads (the report does not change).
    let report = density_scan(&phi, &zero, 6, 10_000, None).unwrap();
    println!("\n deg  primes  hits  proportion");
    for row in &report.rows {
        println!(
            "{:>4}  {:>6}  {:>4}  {}",
            row.deg,
            row.primes_total,
            row.hits,
            row.proportion
                .map(|p| p.to_string())
                .unwrap_or_else(|| "-".into())
        );
    }
    println!(
        "natural proportion of hitting primes up to degree 6: {}",
        report.natural.unwrap()
    );
    println!(
        "weighted by 1/q^deg (the measure under which density is defined): {}",
        report.weighted.unwrap()
    );

    // Contrast: the critical point of (x-t)^2+t is fixed, so its orbit is
    // the single value t and exactly one prime ever divides it. A finite
    // orbit has finite prime support; the interesting case above is a
    // wandering orbit that keeps acquiring new primes at every index and
    // still thins out by degree.
    let pcf = parse::parse_map("(x-t)^2+t", &f3).unwrap();
    let t = parse::parse_ratfunc("t", &f3).unwrap();
    let pcf_report = density_scan(&pcf, &t, 6, 10_000, None).unwrap();
    println!(
        "\ncontrast, (x-t)^2+t at its fixed critical point t: natural proportion {}",
        pcf_report.natural.unwrap()
    );
}
