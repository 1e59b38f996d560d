//! Empirical density of the primes dividing an orbit: for each monic
//! irreducible p up to a degree bound, decide whether p divides some orbit
//! value phi^n(b) with n past the zero-avoiding shift, and aggregate the
//! answers into per-degree proportions.
//!
//! The workhorse is reduction mod p. When the map and base are p-integral
//! the reduced orbit lives in the finite residue field, so Brent's cycle
//! walk answers hit-or-miss exactly in at most q^deg(p) + 1 steps. Primes
//! of bad reduction fall back to inspecting a bounded prefix of the exact
//! orbit and are reported separately when that stays inconclusive.

use std::sync::Arc;

use crate::dynamics::{PointClass, PolyMap, Rat};
use crate::error::{Error, Result};
use crate::factor::monic_irreducibles;
use crate::field::FieldSpec;
use crate::places::Place;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Exact orbit values inspected per bad-reduction prime before giving up.
const BAD_PRIME_CAP: usize = 32;

/// Divisibility outcome for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HitStatus {
    /// p divides phi^n(b), and n is the smallest such index at or past
    /// the shift.
    Hit(usize),
    /// p divides no orbit value (certified by a closed residue walk).
    Miss,
    /// Bad reduction at p and the exact-orbit fallback was inconclusive.
    Bad(String),
}

impl HitStatus {
    pub fn is_hit(&self) -> bool {
        matches!(self, HitStatus::Hit(_))
    }

    pub fn is_bad(&self) -> bool {
        matches!(self, HitStatus::Bad(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeHitRecord {
    pub prime: Place,
    pub deg: usize,
    pub status: HitStatus,
    /// Orbit positions inspected for this prime; at most q^deg + 1.
    pub steps_used: usize,
}

/// Where the scan starts and whether zero recurs in the orbit.
///
/// The shift is the smallest s with phi^n(b) != 0 for every n >= s, so
/// divisibility questions are asked only of nonzero values. Zero can occur
/// at most once outside of one degenerate shape: if the orbit reaches 0
/// and 0 is periodic, no shift exists. `degenerate` then records the first
/// zero index; that value is divisible by every prime at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitShift {
    pub shift: usize,
    pub degenerate: Option<usize>,
    pub base_class: PointClass,
}

pub fn orbit_shift(phi: &PolyMap, base: &RatFunc, max_steps: usize) -> Result<OrbitShift> {
    let class = phi.classify_point(base, max_steps)?;
    // Zeros can only appear among the finitely many small values: past the
    // escape index heights grow strictly from a positive floor, and a
    // preperiodic orbit shows everything within one tail plus one cycle.
    let scan_end = match class {
        PointClass::Wandering { escape_index } => escape_index,
        PointClass::Preperiodic { preperiod, period } => preperiod + period,
    };
    let mut orbit = phi.orbit(base.clone());
    let mut first_zero = None;
    for n in 0..scan_end {
        if orbit.value(n)?.is_zero() {
            first_zero = Some(n);
            break;
        }
    }
    let info = match (first_zero, &class) {
        (None, _) => OrbitShift {
            shift: 0,
            degenerate: None,
            base_class: class,
        },
        (Some(z), PointClass::Preperiodic { preperiod, .. }) if z >= *preperiod => OrbitShift {
            shift: 0,
            degenerate: Some(z),
            base_class: class,
        },
        (Some(z), _) => OrbitShift {
            shift: z + 1,
            degenerate: None,
            base_class: class,
        },
    };
    Ok(info)
}

/// q^deg(p) + 1, saturating; the worst-case length of a closed residue walk.
fn residue_walk_bound(field: &Arc<FieldSpec>, deg: usize) -> u128 {
    field
        .q()
        .checked_pow(deg as u32)
        .and_then(|n| n.checked_add(1))
        .unwrap_or(u128::MAX)
}

/// The residue of x at the finite place pi, as a polynomial representative
/// of degree < deg(pi). Requires v_pi(x) >= 0.
fn residue_mod(x: &RatFunc, pi: &Poly) -> Result<Poly> {
    let num = x.numerator().rem(pi)?;
    let den = x.denominator().rem(pi)?;
    if den.is_one() {
        return Ok(num);
    }
    let (g, u, _) = den.ext_gcd(pi);
    debug_assert!(g.is_one(), "denominator must be a unit mod pi");
    num.mul(&u).rem(pi)
}

struct ReducedMap {
    coeffs: Vec<Poly>,
    modulus: Poly,
}

impl ReducedMap {
    fn step(&self, x: &Poly) -> Result<Poly> {
        let mut acc = self.coeffs.last().expect("degree >= 2").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c).rem(&self.modulus)?;
        }
        Ok(acc)
    }
}

/// Why a prime has bad reduction, or None when the residue walk is sound.
fn bad_reduction_reason(phi: &PolyMap, base: &RatFunc, place: &Place) -> Option<String> {
    let coeffs = phi.as_kpoly().coeffs();
    for (i, c) in coeffs.iter().enumerate() {
        if let Some(v) = place.valuation(c) {
            if v < 0 {
                return Some(format!("coefficient of x^{i} has a pole at the prime"));
            }
            if i == coeffs.len() - 1 && v > 0 {
                return Some("the leading coefficient vanishes at the prime".to_string());
            }
        }
    }
    match place.valuation(base) {
        Some(v) if v < 0 => Some("the base point has a pole at the prime".to_string()),
        _ => None,
    }
}

/// Hit-or-miss for one finite prime, given the precomputed shift.
fn hit_record_with_shift(
    phi: &PolyMap,
    base: &RatFunc,
    place: &Place,
    shift: &OrbitShift,
    max_steps: usize,
) -> Result<PrimeHitRecord> {
    let Place::Finite(pi) = place else {
        return Err(Error::input(
            "divisibility scans run over finite primes; the infinite place has no residue ring",
        ));
    };
    let deg = place.degree();
    let bound = residue_walk_bound(phi.field(), deg);
    if bound > max_steps as u128 {
        return Err(Error::budget(format!(
            "residue walk for a degree-{deg} prime may need {bound} steps, over the budget {max_steps}"
        )));
    }
    if let Some(z) = shift.degenerate {
        // The orbit attains 0 exactly, and every prime divides that value.
        return Ok(PrimeHitRecord {
            prime: place.clone(),
            deg,
            status: HitStatus::Hit(z),
            steps_used: 1,
        });
    }
    if let Some(reason) = bad_reduction_reason(phi, base, place) {
        return bad_prime_fallback(phi, base, place, shift.shift, bound, reason);
    }

    let s = shift.shift;
    let reduced = ReducedMap {
        coeffs: phi
            .as_kpoly()
            .coeffs()
            .iter()
            .map(|c| residue_mod(c, pi))
            .collect::<Result<_>>()?,
        modulus: pi.clone(),
    };
    let start = residue_mod(&phi.iterate_value(base, s)?, pi)?;

    // Brent's algorithm on the residue orbit x_0, x_1, ... First find the
    // cycle length lambda, then walk tortoise and hare in lockstep to the
    // cycle entry mu; the tortoise passes indices 0, 1, ..., mu in order,
    // so the first zero it sees is the first zero overall. If the tail is
    // clean, one lap around the cycle settles the rest.
    let mut power = 1usize;
    let mut lambda = 1usize;
    let mut tortoise = start.clone();
    let mut hare = reduced.step(&start)?;
    while tortoise != hare {
        if power == lambda {
            tortoise = hare.clone();
            power *= 2;
            lambda = 0;
        }
        hare = reduced.step(&hare)?;
        lambda += 1;
    }

    tortoise = start.clone();
    hare = start;
    for _ in 0..lambda {
        hare = reduced.step(&hare)?;
    }
    let mut mu = 0usize;
    while tortoise != hare {
        if tortoise.is_zero() {
            return Ok(PrimeHitRecord {
                prime: place.clone(),
                deg,
                status: HitStatus::Hit(s + mu),
                steps_used: mu + 1,
            });
        }
        tortoise = reduced.step(&tortoise)?;
        hare = reduced.step(&hare)?;
        mu += 1;
    }
    for j in 0..lambda {
        if tortoise.is_zero() {
            return Ok(PrimeHitRecord {
                prime: place.clone(),
                deg,
                status: HitStatus::Hit(s + mu + j),
                steps_used: mu + j + 1,
            });
        }
        tortoise = reduced.step(&tortoise)?;
    }
    Ok(PrimeHitRecord {
        prime: place.clone(),
        deg,
        status: HitStatus::Miss,
        steps_used: mu + lambda + 1,
    })
}

/// Inspect exact orbit values at a prime where reduction is unsound. Finds
/// genuine hits; a clean prefix proves nothing, so the outcome is Bad.
fn bad_prime_fallback(
    phi: &PolyMap,
    base: &RatFunc,
    place: &Place,
    s: usize,
    walk_bound: u128,
    reason: String,
) -> Result<PrimeHitRecord> {
    let cap = (BAD_PRIME_CAP as u128).min(walk_bound) as usize;
    let mut orbit = phi.orbit(base.clone());
    let deg = place.degree();
    for i in 0..cap {
        match orbit.value(s + i) {
            Ok(v) => {
                if matches!(place.valuation(&v), Some(val) if val > 0) {
                    return Ok(PrimeHitRecord {
                        prime: place.clone(),
                        deg,
                        status: HitStatus::Hit(s + i),
                        steps_used: i + 1,
                    });
                }
            }
            Err(_) => {
                return Ok(PrimeHitRecord {
                    prime: place.clone(),
                    deg,
                    status: HitStatus::Bad(format!(
                        "{reason}; orbit heights blew the budget after {i} exact values"
                    )),
                    steps_used: i,
                });
            }
        }
    }
    Ok(PrimeHitRecord {
        prime: place.clone(),
        deg,
        status: HitStatus::Bad(format!(
            "{reason}; no hit among {cap} exact values and the walk cannot be closed"
        )),
        steps_used: cap,
    })
}

/// Does the prime divide some orbit value phi^n(b) at or past the shift?
/// Self-contained entry point for a single prime; scans share the shift
/// computation instead.
pub fn orbit_hits_zero_mod_p(
    phi: &PolyMap,
    base: &RatFunc,
    place: &Place,
    max_steps: usize,
) -> Result<PrimeHitRecord> {
    let shift = orbit_shift(phi, base, max_steps)?;
    hit_record_with_shift(phi, base, place, &shift, max_steps)
}

/// One degree's worth of aggregated outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRow {
    pub deg: usize,
    pub primes_total: usize,
    pub hits: usize,
    pub bad: usize,
    /// hits / (total - bad); None when every prime of the degree was bad.
    pub proportion: Option<Rat>,
    /// Running hits / running conclusive primes over degrees <= this one.
    pub cumulative: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub d_max: usize,
    pub shift: OrbitShift,
    pub rows: Vec<DegreeRow>,
    pub records: Vec<PrimeHitRecord>,
    /// Final cumulative proportion: every conclusive prime counts once.
    pub natural: Option<Rat>,
    /// Degree-weighted truncation: each prime p is weighted q^(d_max -
    /// deg p), mimicking the Dirichlet density's bias toward small primes.
    pub weighted: Option<Rat>,
}

/// Scan all finite primes of degree <= d_max. `jobs` caps the worker
/// threads (None picks the rayon default); the output is identical either
/// way because every record is a pure function of its prime and results
/// are kept in the canonical prime order.
pub fn density_scan(
    phi: &PolyMap,
    base: &RatFunc,
    d_max: usize,
    max_steps: usize,
    jobs: Option<usize>,
) -> Result<DensityReport> {
    let field = phi.field().clone();
    let bound = residue_walk_bound(&field, d_max);
    if d_max > 0 && bound > max_steps as u128 {
        return Err(Error::budget(format!(
            "residue walks for degree-{d_max} primes may need {bound} steps, over the budget {max_steps}"
        )));
    }
    let shift = orbit_shift(phi, base, max_steps)?;
    let primes = if d_max == 0 {
        Vec::new()
    } else {
        monic_irreducibles(&field, d_max)?
    };

    let compute = || -> Result<Vec<PrimeHitRecord>> {
        use rayon::prelude::*;
        primes
            .par_iter()
            .map(|p| {
                let place = Place::Finite(p.clone());
                hit_record_with_shift(phi, base, &place, &shift, max_steps)
            })
            .collect()
    };
    let records = match jobs {
        None => compute()?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::input(format!("cannot build a {n}-thread pool: {e}")))?
            .install(compute)?,
    };

    let mut rows = Vec::with_capacity(d_max);
    let mut cum_hits = 0usize;
    let mut cum_good = 0usize;
    for deg in 1..=d_max {
        let of_deg = records.iter().filter(|r| r.deg == deg);
        let (mut total, mut hits, mut bad) = (0usize, 0usize, 0usize);
        for r in of_deg {
            total += 1;
            if r.status.is_hit() {
                hits += 1;
            } else if r.status.is_bad() {
                bad += 1;
            }
        }
        let good = total - bad;
        cum_hits += hits;
        cum_good += good;
        rows.push(DegreeRow {
            deg,
            primes_total: total,
            hits,
            bad,
            proportion: (good > 0).then(|| Rat::new(hits as i128, good as i128)),
            cumulative: (cum_good > 0).then(|| Rat::new(cum_hits as i128, cum_good as i128)),
        });
    }

    let q = field.q() as i128;
    let mut w_hit: i128 = 0;
    let mut w_good: i128 = 0;
    for r in &records {
        if r.status.is_bad() {
            continue;
        }
        let w = q.pow((d_max - r.deg) as u32);
        w_good += w;
        if r.status.is_hit() {
            w_hit += w;
        }
    }
    Ok(DensityReport {
        d_max,
        shift,
        natural: (cum_good > 0).then(|| Rat::new(cum_hits as i128, cum_good as i128)),
        weighted: (w_good > 0).then(|| Rat::new(w_hit, w_good)),
        rows,
        records,
    })
}
