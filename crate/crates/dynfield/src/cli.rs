//! Command-line surface: one subcommand per capability, shared flags,
//! deterministic reports.
//!
//! Exit codes: 0 success (including certificates whose verdict is "not
//! established"), 2 rejected input, 3 blown budget. `--format` picks the
//! stdout rendering; `--out` additionally writes the JSON report to a
//! file. All randomness (only polynomial factoring uses any) flows from
//! `--seed`, so equal invocations produce byte-identical reports.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::curves;
use crate::density;
use crate::dynamics::{PointClass, PolyMap};
use crate::error::{Error, Result};
use crate::factor;
use crate::field::FieldSpec;
use crate::parse;
use crate::places::{standard_excluded_places, Place};
use crate::ratfunc::RatFunc;
use crate::report::{
    class_name, ClassifyResult, CurveResult, DensityResult, FactorResult, FamilyResult,
    GenusResult, HeightResult, InputSpec, NonIsotrivialityResult, OrbitConditionsResult,
    OrbitResult, OrbitRow, Report, StabilityResult, ZsigResult,
};
use crate::zsigmondy::{self, ZsigOptions};

pub const DEFAULT_MAX_DEGREE: usize = 64;
/// 3^10 + 1: permits residue fields up to 3^10 elements.
pub const DEFAULT_MAX_STEPS: usize = 59_050;

#[derive(Debug, Parser)]
#[command(
    name = "dynfield",
    version,
    about = "Orbits, primitive prime divisors, and certificates for polynomial maps over F_q(t)"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct CommonOpts {
    /// Field description: "p=3" or "p=3 e=2 mod=u^2+1"
    #[arg(long)]
    field: Option<String>,

    /// Polynomial map in x, degree >= 2, e.g. "x^2+t"
    #[arg(long)]
    map: Option<String>,

    /// Expression in t: the base point (for factor: the polynomial)
    #[arg(long)]
    base: Option<String>,

    /// Marked x-value for jinv; defaults to the map's critical value
    #[arg(long)]
    c: Option<String>,

    /// Power-free exponent l (zsigmondy) or cover degree (genus)
    #[arg(long)]
    ell: Option<u64>,

    /// Horizon / iterate index / branch degree, depending on the command
    #[arg(long = "N")]
    n: Option<usize>,

    /// Largest prime degree in a density scan
    #[arg(long = "Dmax")]
    d_max: Option<usize>,

    /// Family parameter f (certify family), a polynomial in t
    #[arg(long)]
    f: Option<String>,

    /// Family parameter g (certify family), a polynomial in t
    #[arg(long)]
    g: Option<String>,

    /// Family exponent d >= 1 (certify family)
    #[arg(long)]
    dexp: Option<usize>,

    /// Extra place to exclude (monic irreducible in t); repeatable
    #[arg(long = "s-extra")]
    s_extra: Vec<String>,

    /// Ignore the infinite place entirely
    #[arg(long)]
    finite_only: bool,

    /// Seed for randomized factoring; everything else is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Also write the JSON report to this path
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for density scans (does not affect the output)
    #[arg(long)]
    jobs: Option<usize>,

    /// Degree cap for composed iterates
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,

    /// Step cap for orbit classification and residue walks
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Factor a polynomial in t over F_q
    Factor(CommonOpts),
    /// Print orbit values and their heights
    Orbit(CommonOpts),
    /// Primitive and l-primitive prime divisors along an orbit
    Zsigmondy(CommonOpts),
    /// Certified canonical-height interval for a point
    Height(CommonOpts),
    /// Decide preperiodic vs wandering, with a witness
    Classify(CommonOpts),
    /// Verify checkable certificate hypotheses
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Proportion of primes dividing some orbit value, by degree
    Density(CommonOpts),
    /// j-invariant of the marked cubic Y^2 = (x - c) * phi(x)
    Jinv(CommonOpts),
    /// Genus of the smooth superelliptic cover y^ell = f(x)
    Genus(CommonOpts),
}

#[derive(Debug, Subcommand)]
enum CertifyCmd {
    /// Wandering critical orbit + no squares in it + nonconstant j
    Cor1(CommonOpts),
    /// Membership and hypotheses for the family (x - f*g^d)^2 + g
    Family(CommonOpts),
    /// Checkable prerequisites of the general finiteness statement
    Conjecture(CommonOpts),
    /// Nonconstant j on a genus >= 2 iterate cover
    Nonisotrivial(CommonOpts),
}

impl Cmd {
    fn common(&self) -> &CommonOpts {
        match self {
            Cmd::Factor(o)
            | Cmd::Orbit(o)
            | Cmd::Zsigmondy(o)
            | Cmd::Height(o)
            | Cmd::Classify(o)
            | Cmd::Density(o)
            | Cmd::Jinv(o)
            | Cmd::Genus(o) => o,
            Cmd::Certify(c) => c.common(),
        }
    }
}

impl CertifyCmd {
    fn common(&self) -> &CommonOpts {
        match self {
            CertifyCmd::Cor1(o)
            | CertifyCmd::Family(o)
            | CertifyCmd::Conjecture(o)
            | CertifyCmd::Nonisotrivial(o) => o,
        }
    }
}

struct Rendered {
    json: String,
    text: String,
    csv: Option<String>,
}

fn render<T: serde::Serialize>(report: &Report<T>, text: String, csv: Option<String>) -> Rendered {
    Rendered {
        json: report.to_json(),
        text,
        csv,
    }
}

fn require<'a>(opt: &'a Option<String>, flag: &str, why: &str) -> Result<&'a str> {
    opt.as_deref()
        .ok_or_else(|| Error::input(format!("--{flag} ({why}) is required for this command")))
}

impl CommonOpts {
    fn field(&self) -> Result<Arc<FieldSpec>> {
        parse::parse_field(require(&self.field, "field", "the coefficient field")?)
    }

    fn map(&self, field: &Arc<FieldSpec>) -> Result<PolyMap> {
        parse::parse_map(require(&self.map, "map", "the polynomial map")?, field)
    }

    fn base(&self, field: &Arc<FieldSpec>, why: &str) -> Result<RatFunc> {
        parse::parse_ratfunc(require(&self.base, "base", why)?, field)
    }

    /// InputSpec skeleton with the flags every command shares.
    fn input(&self, command: &str) -> InputSpec {
        InputSpec {
            command: command.to_string(),
            seed: self.seed,
            max_degree: self.max_degree,
            max_steps: self.max_steps,
            ..InputSpec::default()
        }
    }
}

fn cmd_factor(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let poly = parse::parse_poly(
        require(&o.base, "base", "the polynomial to factor")?,
        &field,
    )?;
    let factored = factor::factor(&poly, o.seed)?;
    let mut input = o.input("factor");
    input.field = Some(field.describe());
    input.base = Some(poly.to_string());
    let result = FactorResult::build(&poly, &factored);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_orbit(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let base = o.base(&field, "the starting point")?;
    let n = o.n.unwrap_or(8);
    let mut orbit = map.orbit(base.clone());
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let value = orbit.value(i)?;
        rows.push(OrbitRow {
            n: i,
            height: value.height(),
            value: value.to_string(),
        });
    }
    let mut input = o.input("orbit");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.base = Some(base.to_string());
    input.n = Some(n);
    let result = OrbitResult { rows };
    let text = result.render_text();
    let csv = result.render_csv();
    Ok(render(&Report::new(input, result), text, Some(csv)))
}

fn cmd_zsigmondy(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let base = o.base(&field, "the starting point")?;
    let ell = o.ell.unwrap_or(2);
    let n = o.n.unwrap_or(8);
    let mut options = ZsigOptions {
        excluded: None,
        finite_only: o.finite_only,
    };
    if !o.s_extra.is_empty() {
        let mut set = standard_excluded_places(map.as_kpoly(), &base)?;
        for src in &o.s_extra {
            set.insert(Place::finite(parse::parse_poly(src, &field)?)?);
        }
        options.excluded = Some(set);
    }
    let report = zsigmondy::zsigmondy_set(&map, &base, ell, n, &options)?;
    let mut input = o.input("zsigmondy");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.base = Some(base.to_string());
    input.ell = Some(ell);
    input.n = Some(n);
    input.s_extra = o.s_extra.clone();
    input.finite_only = Some(o.finite_only);
    let result = ZsigResult::build(&report);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_height(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let base = o.base(&field, "the point whose height is estimated")?;
    let n = o.n.unwrap_or(10);
    let interval = map.canonical_height_interval(&base, n)?;
    let value = map.iterate_value(&base, n)?;
    let dn = (map.degree() as i128)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::budget(format!("d^{n} overflows the interval arithmetic")))?;
    let mut input = o.input("height");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.base = Some(base.to_string());
    input.n = Some(n);
    let result = HeightResult::build(n, value.height(), dn, &interval);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_classify(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let quadratic = (map.degree() == 2)
        .then(|| map.quadratic_data())
        .transpose()?;
    let point = match &o.base {
        Some(src) => parse::parse_ratfunc(src, &field)?,
        None => {
            let data = quadratic
                .as_ref()
                .ok_or_else(|| Error::input("--base is required for maps of degree > 2"))?;
            data.critical_point.clone()
        }
    };
    let class = map.classify_point(&point, o.max_steps)?;
    let witness = match class {
        PointClass::Preperiodic { preperiod, period } => {
            let v = map.iterate_value(&point, preperiod)?;
            format!(
                "the value {v} at step {preperiod} recurs at step {}",
                preperiod + period
            )
        }
        PointClass::Wandering { escape_index } => {
            let v = map.iterate_value(&point, escape_index)?;
            format!(
                "height {} at step {escape_index} clears the threshold {}/{}; heights grow strictly from there",
                v.height(),
                map.height_gap(),
                map.degree() - 1
            )
        }
    };
    let point_is_critical = quadratic
        .as_ref()
        .map(|d| d.critical_point == point)
        .unwrap_or(false);
    let (preperiod, period, escape_index) = match class {
        PointClass::Preperiodic { preperiod, period } => (Some(preperiod), Some(period), None),
        PointClass::Wandering { escape_index } => (None, None, Some(escape_index)),
    };
    let mut input = o.input("classify");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.base = Some(point.to_string());
    let result = ClassifyResult {
        point: point.to_string(),
        point_is_critical,
        class: class_name(&class).to_string(),
        preperiod,
        period,
        escape_index,
        witness,
        normal_form_c: quadratic.as_ref().map(|d| d.normal_c.to_string()),
        conjugate_to_square: quadratic.as_ref().map(|d| d.conjugate_to_square()),
    };
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_certify_cor1(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let n = o.n.unwrap_or(8);
    let cond = curves::zsigmondy_finiteness_conditions(&map, n, o.max_steps)?;
    let mut input = o.input("certify cor1");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.n = Some(n);
    let result = OrbitConditionsResult::build(&cond);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_certify_family(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let f = parse::parse_poly(require(&o.f, "f", "the family parameter f")?, &field)?;
    let g = parse::parse_poly(require(&o.g, "g", "the family parameter g")?, &field)?;
    let dexp = o.dexp.unwrap_or(1);
    let n = o.n.unwrap_or(6);
    let params = curves::FamilyParams::new(f, g, dexp)?;
    let cert = curves::verify_family_instance(&params, n, o.max_steps)?;
    let mut input = o.input("certify family");
    input.field = Some(field.describe());
    input.f = Some(params.f.to_string());
    input.g = Some(params.g.to_string());
    input.dexp = Some(dexp);
    input.n = Some(n);
    let result = FamilyResult::build(&cert);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_certify_conjecture(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let n = o.n.unwrap_or(3);
    let hypotheses = curves::stability_hypotheses(&map, n, o.max_degree)?;
    let mut input = o.input("certify conjecture");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.n = Some(n);
    let result = StabilityResult::build(&hypotheses);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_certify_nonisotrivial(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let cert = curves::certify_nonisotrivial(&map, o.max_degree)?;
    let mut input = o.input("certify nonisotrivial");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    let result = NonIsotrivialityResult::build(&cert);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_density(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let base = o.base(&field, "the starting point")?;
    let d_max = o
        .d_max
        .ok_or_else(|| Error::input("--Dmax (largest prime degree) is required"))?;
    let report = density::density_scan(&map, &base, d_max, o.max_steps, o.jobs)?;
    let mut input = o.input("density");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.base = Some(base.to_string());
    input.d_max = Some(d_max);
    let result = DensityResult::build(&report);
    let text = result.render_text();
    let csv = result.render_csv();
    Ok(render(&Report::new(input, result), text, Some(csv)))
}

fn cmd_jinv(o: &CommonOpts) -> Result<Rendered> {
    let field = o.field()?;
    let map = o.map(&field)?;
    let marked = match &o.c {
        Some(src) => parse::parse_ratfunc(src, &field)?,
        None => {
            let data = map.quadratic_data()?;
            map.apply(&data.critical_point)
        }
    };
    let info = curves::marked_cubic_curve(&map, &marked)?;
    let mut input = o.input("jinv");
    input.field = Some(field.describe());
    input.map = Some(map.as_kpoly().to_string());
    input.c = Some(marked.to_string());
    let result = CurveResult::build(&marked, &info);
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn cmd_genus(o: &CommonOpts) -> Result<Rendered> {
    let n = o
        .n
        .ok_or_else(|| Error::input("--N (the branch polynomial degree) is required"))?
        as u64;
    let ell = o.ell.unwrap_or(2);
    let (field_desc, char_p) = match &o.field {
        Some(src) => {
            let field = parse::parse_field(src)?;
            (Some(field.describe()), Some(field.p()))
        }
        None => (None, None),
    };
    let genus = curves::genus_superelliptic(n, ell, char_p)?;
    let mut input = o.input("genus");
    input.field = field_desc;
    input.ell = Some(ell);
    input.n = Some(n as usize);
    let result = GenusResult {
        branch_degree: n,
        ell,
        characteristic: char_p,
        genus,
    };
    let text = result.render_text();
    Ok(render(&Report::new(input, result), text, None))
}

fn dispatch(cmd: &Cmd) -> Result<Rendered> {
    match cmd {
        Cmd::Factor(o) => cmd_factor(o),
        Cmd::Orbit(o) => cmd_orbit(o),
        Cmd::Zsigmondy(o) => cmd_zsigmondy(o),
        Cmd::Height(o) => cmd_height(o),
        Cmd::Classify(o) => cmd_classify(o),
        Cmd::Certify(CertifyCmd::Cor1(o)) => cmd_certify_cor1(o),
        Cmd::Certify(CertifyCmd::Family(o)) => cmd_certify_family(o),
        Cmd::Certify(CertifyCmd::Conjecture(o)) => cmd_certify_conjecture(o),
        Cmd::Certify(CertifyCmd::Nonisotrivial(o)) => cmd_certify_nonisotrivial(o),
        Cmd::Density(o) => cmd_density(o),
        Cmd::Jinv(o) => cmd_jinv(o),
        Cmd::Genus(o) => cmd_genus(o),
    }
}

fn emit(o: &CommonOpts, rendered: Rendered) -> Result<()> {
    let stdout = match o.format {
        Format::Json => rendered.json.clone(),
        Format::Text => rendered.text,
        Format::Csv => rendered.csv.ok_or_else(|| {
            Error::input("--format csv is only available for density and orbit")
        })?,
    };
    if let Some(path) = &o.out {
        std::fs::write(path, &rendered.json)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{stdout}");
    Ok(())
}

/// Parse argv, run the command, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(&cli.command).and_then(|rendered| emit(cli.command.common(), rendered)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
