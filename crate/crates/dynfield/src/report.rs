//! Report shapes for the command surface.
//!
//! Every command produces a [`Report`]: the tool version, the full echoed
//! input in canonical form, and a typed result. JSON serialization follows
//! struct declaration order and draws on nothing but the inputs, so equal
//! invocations give byte-identical output. Rational numbers are rendered
//! as "numerator/denominator" strings; field elements, polynomials, and
//! places use the same expression grammar the parser accepts.

use std::fmt::Write as _;

use serde::Serialize;

use crate::density::{DensityReport, HitStatus};
use crate::dynamics::{HeightInterval, PointClass, Rat};
use crate::factor::FactoredPoly;
use crate::zsigmondy::ZsigReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn opt_rat(r: &Option<Rat>) -> Option<String> {
    r.as_ref().map(rat_str)
}

/// Canonical echo of everything the invocation consumed.
#[derive(Debug, Clone, Default, Serialize)]
pub struct InputSpec {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dexp: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s_extra: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_only: Option<bool>,
    pub seed: u64,
    pub max_degree: usize,
    pub max_steps: usize,
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub version: &'static str,
    pub input: InputSpec,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(input: InputSpec, result: T) -> Report<T> {
        Report {
            version: VERSION,
            input,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

// ---- factor ----

#[derive(Debug, Serialize)]
pub struct FactorEntry {
    pub prime: String,
    pub degree: usize,
    pub exponent: usize,
}

#[derive(Debug, Serialize)]
pub struct FactorResult {
    pub poly: String,
    pub unit: String,
    pub factors: Vec<FactorEntry>,
}

impl FactorResult {
    pub fn build(poly: &crate::poly::Poly, factored: &FactoredPoly) -> FactorResult {
        FactorResult {
            poly: poly.to_string(),
            unit: factored.unit().to_string(),
            factors: factored
                .factors()
                .iter()
                .map(|(p, e)| FactorEntry {
                    prime: p.to_string(),
                    degree: p.degree().finite().unwrap_or(0),
                    exponent: *e,
                })
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{} = {}", self.poly, self.unit);
        for f in &self.factors {
            let _ = write!(out, " * ({})", f.prime);
            if f.exponent > 1 {
                let _ = write!(out, "^{}", f.exponent);
            }
        }
        out.push('\n');
        out
    }
}

// ---- orbit ----

#[derive(Debug, Serialize)]
pub struct OrbitRow {
    pub n: usize,
    pub value: String,
    pub height: usize,
}

#[derive(Debug, Serialize)]
pub struct OrbitResult {
    pub rows: Vec<OrbitRow>,
}

impl OrbitResult {
    pub fn render_text(&self) -> String {
        let mut out = String::from("   n  height  value\n");
        for r in &self.rows {
            let _ = writeln!(out, "{:>4}  {:>6}  {}", r.n, r.height, r.value);
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("n,height,value\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.n, r.height, r.value);
        }
        out
    }
}

// ---- zsigmondy ----

#[derive(Debug, Serialize)]
pub struct ZsigRow {
    pub n: usize,
    pub value: String,
    pub primitive: Vec<String>,
    pub ell_primitive: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ZsigResult {
    pub ell: u64,
    pub horizon: usize,
    pub shift: usize,
    pub shifted_base: String,
    pub excluded: Vec<String>,
    pub finite_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_wandering: Option<bool>,
    /// Indices <= horizon with no l-primitive prime outside the excluded
    /// set: the reported slice of the Zsigmondy set.
    pub members: Vec<usize>,
    /// Same with plain primitivity (no l-divisibility condition).
    pub plain_members: Vec<usize>,
    pub rows: Vec<ZsigRow>,
}

impl ZsigResult {
    pub fn build(report: &ZsigReport) -> ZsigResult {
        ZsigResult {
            ell: report.ell,
            horizon: report.horizon,
            shift: report.shift,
            shifted_base: report.shifted_base.to_string(),
            excluded: report.excluded.iter().map(|p| p.to_string()).collect(),
            finite_only: report.finite_only,
            base_wandering: report.base_wandering,
            members: report.members.clone(),
            plain_members: report.plain_members.clone(),
            rows: report
                .records
                .iter()
                .map(|r| ZsigRow {
                    n: r.n,
                    value: r.value.to_string(),
                    primitive: r.primitive.iter().map(|p| p.to_string()).collect(),
                    ell_primitive: r.ell_primitive.iter().map(|p| p.to_string()).collect(),
                })
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "l = {}, horizon {}, shift {} (base moved to {})",
            self.ell, self.horizon, self.shift, self.shifted_base
        );
        let _ = writeln!(out, "excluded places: {}", self.excluded.join(", "));
        for r in &self.rows {
            let _ = writeln!(
                out,
                "n = {}: {} l-primitive ({}), {} primitive; value {}",
                r.n,
                r.ell_primitive.len(),
                if r.ell_primitive.is_empty() {
                    "-".to_string()
                } else {
                    r.ell_primitive.join(", ")
                },
                r.primitive.len(),
                r.value,
            );
        }
        let members = if self.members.is_empty() {
            "empty".to_string()
        } else {
            format!("{:?}", self.members)
        };
        let _ = writeln!(out, "indices with no l-primitive prime: {members}");
        out
    }
}

// ---- height ----

#[derive(Debug, Serialize)]
pub struct HeightResult {
    pub n: usize,
    pub orbit_value_height: usize,
    pub degree_power: String,
    pub center: String,
    pub radius: String,
    pub lo: String,
    pub hi: String,
}

impl HeightResult {
    pub fn build(n: usize, value_height: usize, dn: i128, iv: &HeightInterval) -> HeightResult {
        HeightResult {
            n,
            orbit_value_height: value_height,
            degree_power: dn.to_string(),
            center: rat_str(&iv.center),
            radius: rat_str(&iv.radius),
            lo: rat_str(&iv.lo()),
            hi: rat_str(&iv.hi()),
        }
    }

    pub fn render_text(&self) -> String {
        format!(
            "canonical height from step {}: center {} (= {} / {}), radius {}\n  certified range [{}, {}]\n",
            self.n,
            self.center,
            self.orbit_value_height,
            self.degree_power,
            self.radius,
            self.lo,
            self.hi
        )
    }
}

// ---- classify ----

#[derive(Debug, Serialize)]
pub struct ClassifyResult {
    pub point: String,
    pub point_is_critical: bool,
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preperiod: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escape_index: Option<usize>,
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form_c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugate_to_square: Option<bool>,
}

impl ClassifyResult {
    pub fn render_text(&self) -> String {
        let mut out = format!("{} is {}: {}\n", self.point, self.class, self.witness);
        if let (Some(c), Some(sq)) = (&self.normal_form_c, self.conjugate_to_square) {
            let _ = writeln!(
                out,
                "normal form x^2 + c with c = {c}{}",
                if sq { " (conjugate to x^2)" } else { "" }
            );
        }
        out
    }
}

pub fn class_name(class: &PointClass) -> &'static str {
    match class {
        PointClass::Preperiodic { .. } => "preperiodic",
        PointClass::Wandering { .. } => "wandering",
    }
}

// ---- jinv ----

#[derive(Debug, Serialize)]
pub struct CurveResult {
    pub marked_point: String,
    pub cubic: String,
    pub c4: String,
    pub c6: String,
    pub discriminant: String,
    pub j: String,
    pub j_equals_1728: bool,
    pub j_constant: bool,
}

impl CurveResult {
    pub fn build(marked: &crate::ratfunc::RatFunc, info: &crate::curves::EllipticCurveInfo) -> CurveResult {
        CurveResult {
            marked_point: marked.to_string(),
            cubic: info.cubic().to_string(),
            c4: info.c4().to_string(),
            c6: info.c6().to_string(),
            discriminant: info.discriminant().to_string(),
            j: info.j().to_string(),
            j_equals_1728: info.j_equals_1728(),
            j_constant: info.j().is_constant(),
        }
    }

    pub fn render_text(&self) -> String {
        format!(
            "Y^2 = {}\n  c4 = {}\n  c6 = {}\n  disc = {}\n  j = {}{}\n",
            self.cubic,
            self.c4,
            self.c6,
            self.discriminant,
            self.j,
            if self.j_equals_1728 { " (= 1728)" } else { "" }
        )
    }
}

// ---- genus ----

#[derive(Debug, Serialize)]
pub struct GenusResult {
    pub branch_degree: u64,
    pub ell: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic: Option<u64>,
    pub genus: u64,
}

impl GenusResult {
    pub fn render_text(&self) -> String {
        format!(
            "genus of y^{} = f(x), deg f = {} squarefree: {}\n",
            self.ell, self.branch_degree, self.genus
        )
    }
}

// ---- certify ----

#[derive(Debug, Serialize)]
pub struct LevelRow {
    pub n: usize,
    pub value: String,
    pub nonsquare: bool,
}

#[derive(Debug, Serialize)]
pub struct OrbitConditionsResult {
    pub valid: bool,
    pub critical_point: String,
    pub critical_class: String,
    pub critical_wandering: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_square_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    pub j_nonconstant: bool,
    pub levels: Vec<LevelRow>,
    pub certified_irreducible_through: String,
    pub conclusion: String,
}

impl OrbitConditionsResult {
    pub fn build(cond: &crate::curves::OrbitConditions) -> OrbitConditionsResult {
        let conclusion = if cond.all_hold {
            "for every wandering base point: all but finitely many orbit indices carry a \
             2-primitive prime, the splitting fields of the iterates give a finite-index \
             arboreal image, and the orbit's prime support has density zero"
                .to_string()
        } else {
            "hypotheses not verified; no conclusion".to_string()
        };
        OrbitConditionsResult {
            valid: cond.all_hold,
            critical_point: cond.critical_point.to_string(),
            critical_class: class_name(&cond.critical_class).to_string(),
            critical_wandering: cond.critical_wandering,
            first_square_level: cond.first_square_level,
            j: cond.j.as_ref().map(|j| j.to_string()),
            j_nonconstant: cond.j_nonconstant,
            levels: cond
                .galois
                .levels
                .iter()
                .map(|l| LevelRow {
                    n: l.n,
                    value: l.value.to_string(),
                    nonsquare: l.nonsquare,
                })
                .collect(),
            certified_irreducible_through: cond
                .galois
                .certified_irreducible_through
                .to_string(),
            conclusion,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "critical point {} is {}\n",
            self.critical_point, self.critical_class
        );
        for l in &self.levels {
            let _ = writeln!(
                out,
                "  level {}: {} is {}a square",
                l.n,
                l.value,
                if l.nonsquare { "not " } else { "" }
            );
        }
        if let Some(j) = &self.j {
            let _ = writeln!(
                out,
                "marked cubic j = {j} ({}constant)",
                if self.j_nonconstant { "non" } else { "" }
            );
        }
        let _ = writeln!(
            out,
            "iterates certified irreducible for {}",
            self.certified_irreducible_through
        );
        let _ = writeln!(
            out,
            "verdict: {}\n{}",
            if self.valid { "conditions hold" } else { "conditions NOT verified" },
            self.conclusion
        );
        out
    }
}

#[derive(Debug, Serialize)]
pub struct FamilyResult {
    pub f: String,
    pub g: String,
    pub dexp: usize,
    pub map: String,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_witness: Option<String>,
    pub unit_degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_irreducible_through: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix_conditions_hold: Option<bool>,
}

impl FamilyResult {
    pub fn build(cert: &crate::curves::FamilyCert) -> FamilyResult {
        FamilyResult {
            f: cert.params.f.to_string(),
            g: cert.params.g.to_string(),
            dexp: cert.params.dexp,
            map: cert.map.as_kpoly().to_string(),
            accepted: cert.accepted,
            reject_reason: cert.reject_reason.clone(),
            square_witness: cert.square_witness.as_ref().map(|w| w.to_string()),
            unit_degenerate: cert.unit_degenerate,
            j: cert.j.as_ref().map(|j| j.to_string()),
            certified_irreducible_through: cert
                .galois
                .as_ref()
                .map(|g| g.certified_irreducible_through.to_string()),
            prefix_conditions_hold: cert.conditions.as_ref().map(|c| c.all_hold),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "family member (x - f*g^{})^2 + g with f = {}, g = {}\n  map: {}\n",
            self.dexp, self.f, self.g, self.map
        );
        if self.accepted {
            let _ = writeln!(
                out,
                "accepted: iterates irreducible for {}; finite Zsigmondy set for every \
                 wandering base point; orbit prime density zero",
                self.certified_irreducible_through.as_deref().unwrap_or("all n")
            );
        } else {
            let _ = writeln!(
                out,
                "rejected: {}",
                self.reject_reason.as_deref().unwrap_or("hypotheses fail")
            );
            if let Some(w) = &self.square_witness {
                let _ = writeln!(out, "  ({w})^2 = -g");
            }
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SeparabilityRow {
    pub n: usize,
    pub separable: bool,
}

#[derive(Debug, Serialize)]
pub struct StabilityResult {
    pub degree: usize,
    pub coefficients_nonconstant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_conjugate_to_power_map: Option<bool>,
    pub degree_coprime_to_field_order: bool,
    pub separable_levels: Vec<SeparabilityRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_inseparable: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_hold: Option<bool>,
}

impl StabilityResult {
    pub fn build(h: &crate::curves::StabilityHypotheses) -> StabilityResult {
        StabilityResult {
            degree: h.degree,
            coefficients_nonconstant: h.coefficients_nonconstant,
            not_conjugate_to_power_map: h.not_conjugate_to_power_map,
            degree_coprime_to_field_order: h.degree_coprime_to_field_order,
            separable_levels: h
                .separable_levels
                .iter()
                .map(|&(n, separable)| SeparabilityRow { n, separable })
                .collect(),
            first_inseparable: h.first_inseparable,
            all_hold: h.all_hold,
        }
    }

    pub fn render_text(&self) -> String {
        let verdict = match self.all_hold {
            Some(true) => "all hypotheses hold",
            Some(false) => "a hypothesis fails",
            None => "undetermined (conjugacy test unavailable for this degree)",
        };
        let mut out = format!(
            "degree {} map: coefficients nonconstant: {}; degree coprime to q: {}\n",
            self.degree, self.coefficients_nonconstant, self.degree_coprime_to_field_order
        );
        if let Some(nc) = self.not_conjugate_to_power_map {
            let _ = writeln!(out, "not conjugate to x^d: {nc}");
        }
        for r in &self.separable_levels {
            let _ = writeln!(out, "  iterate {} separable: {}", r.n, r.separable);
        }
        let _ = writeln!(out, "verdict: {verdict}");
        out
    }
}

#[derive(Debug, Serialize)]
pub struct NonIsotrivialityResult {
    pub valid: bool,
    pub ell: u64,
    pub iterate: usize,
    pub genus: u64,
    pub iterate_squarefree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    pub j_nonconstant: bool,
}

impl NonIsotrivialityResult {
    pub fn build(cert: &crate::curves::NonIsotrivialityCert) -> NonIsotrivialityResult {
        NonIsotrivialityResult {
            valid: cert.valid,
            ell: cert.ell,
            iterate: cert.m,
            genus: cert.genus,
            iterate_squarefree: cert.squarefree_ok,
            j: cert.j.as_ref().map(|j| j.to_string()),
            j_nonconstant: cert.j_nonconstant,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "double cover of iterate {}: genus {}, squarefree: {}\n",
            self.iterate, self.genus, self.iterate_squarefree
        );
        match (&self.j, self.valid) {
            (Some(j), true) => {
                let _ = writeln!(
                    out,
                    "j = {j} is nonconstant: the cover is not isotrivial, over any constant extension"
                );
            }
            (Some(j), false) => {
                let _ = writeln!(out, "j = {j}; certificate NOT established");
            }
            (None, _) => {
                let _ = writeln!(out, "marked cubic degenerate; certificate NOT established");
            }
        }
        out
    }
}

// ---- density ----

#[derive(Debug, Serialize)]
pub struct DensityRowOut {
    pub deg: usize,
    pub primes: usize,
    pub hits: usize,
    pub bad: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proportion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cumulative: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct PrimeHitOut {
    pub prime: String,
    pub deg: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hit_at: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub steps_used: usize,
}

#[derive(Debug, Serialize)]
pub struct DensityResult {
    pub d_max: usize,
    pub shift: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate_zero_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub natural: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted: Option<String>,
    pub rows: Vec<DensityRowOut>,
    pub primes: Vec<PrimeHitOut>,
}

impl DensityResult {
    pub fn build(report: &DensityReport) -> DensityResult {
        DensityResult {
            d_max: report.d_max,
            shift: report.shift.shift,
            degenerate_zero_index: report.shift.degenerate,
            natural: opt_rat(&report.natural),
            weighted: opt_rat(&report.weighted),
            rows: report
                .rows
                .iter()
                .map(|r| DensityRowOut {
                    deg: r.deg,
                    primes: r.primes_total,
                    hits: r.hits,
                    bad: r.bad,
                    proportion: opt_rat(&r.proportion),
                    cumulative: opt_rat(&r.cumulative),
                })
                .collect(),
            primes: report
                .records
                .iter()
                .map(|r| {
                    let (status, hit_at, reason) = match &r.status {
                        HitStatus::Hit(n) => ("hit", Some(*n), None),
                        HitStatus::Miss => ("miss", None, None),
                        HitStatus::Bad(why) => ("bad", None, Some(why.clone())),
                    };
                    PrimeHitOut {
                        prime: r.prime.to_string(),
                        deg: r.deg,
                        status: status.to_string(),
                        hit_at,
                        reason,
                        steps_used: r.steps_used,
                    }
                })
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(z) = self.degenerate_zero_index {
            let _ = writeln!(
                out,
                "orbit reaches 0 at index {z} and 0 is periodic: every prime divides that value"
            );
        } else if self.shift > 0 {
            let _ = writeln!(out, "scan starts at orbit index {} (skipping zeros)", self.shift);
        }
        out.push_str(" deg  primes  hits  bad  proportion  cumulative\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {:>6}  {:>4}  {:>3}  {:>10}  {:>10}",
                r.deg,
                r.primes,
                r.hits,
                r.bad,
                r.proportion.as_deref().unwrap_or("-"),
                r.cumulative.as_deref().unwrap_or("-"),
            );
        }
        if let Some(n) = &self.natural {
            let _ = writeln!(out, "natural proportion: {n}");
        }
        if let Some(w) = &self.weighted {
            let _ = writeln!(out, "weighted proportion: {w}");
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("deg,primes,hits,bad,proportion,cumulative\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.deg,
                r.primes,
                r.hits,
                r.bad,
                r.proportion.as_deref().unwrap_or(""),
                r.cumulative.as_deref().unwrap_or(""),
            );
        }
        out
    }
}
