//! `amalgam`: command-line front end for the duplication toolkit.
//!
//! Every subcommand reads an algebra bundle (a JSON file, `-` for stdin, or
//! one of the built-in fixture names `fix1`..`fix4`) and prints a report.
//! Exit codes: 0 on success, 1 when a check fails or the input is invalid,
//! 2 on a usage error.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amalgam::algebra::{validate_algebra, ValidationReport};
use amalgam::bundle::{algebra_to_json, parse_bundle, parse_subspace};
use amalgam::checks;
use amalgam::derivations::{
    amenability_predicates, cohomology, cyclic_quadruple_space, property_h,
    quadruple_space as derivation_quadruples, CohomologyReport,
};
use amalgam::duals::{arens_products, dual_actions, second_dual_iso_defect, topological_centres};
use amalgam::ideals::{
    ideal_witness, is_maximal_ideal, product_ideal_test, product_subspace, project_components,
    Side,
};
use amalgam::linalg::{unflatten, Subspace};
use amalgam::multipliers::{corollary_form_check, decompose_multiplier, left_multiplier_space, quadruple_space};
use amalgam::report::{Report, Row, Status};
use amalgam::spectrum::{duplication_spectrum, gelfand_semisimple};
use amalgam::{fixtures, Triple, C64};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "amalgam", version, about = "Amalgamated duplications of finite-dimensional algebras")]
struct Cli {
    /// Numerical tolerance for ranks, defects and comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    TwoSided,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
            SideArg::TwoSided => Side::TwoSided,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Algebra, module and compatibility axioms.
    Validate { bundle: String },
    /// The duplication as a single-algebra JSON object.
    Duplicate { bundle: String },
    /// Characters of the duplication, tagged E (from A) or F (from F).
    Spectrum { bundle: String },
    /// Semisimplicity of the factors and the duplication.
    Semisimple { bundle: String },
    /// Ideal tests for a subspace of the duplication.
    Ideals {
        bundle: String,
        /// JSON file `{"vectors": [...]}` in duplication coordinates.
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Left multipliers of the duplication and their block form.
    Multipliers { bundle: String },
    /// Arens products and the second-dual isomorphism.
    Arens { bundle: String },
    /// Topological centres and the product formula.
    Centres { bundle: String },
    /// First cohomology into the level-n dual.
    Derivations {
        bundle: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Cyclic derivations and cyclic amenability.
    Cyclic { bundle: String },
    /// Property H at level 2n+1.
    PropertyH {
        bundle: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
    /// Weak and cyclic amenability of the factors and the duplication.
    Amenability {
        bundle: String,
        #[arg(long, default_value_t = 2)]
        max_level: usize,
    },
    /// The full check suite, plus per-bundle checks when a bundle is given.
    CheckPaper {
        bundle: Option<String>,
        /// Trials per randomized suite; the pinned sizes when omitted.
        #[arg(long)]
        trials: Option<usize>,
    },
}

/// Failures that end a command before a report exists.
enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<amalgam::Error> for Failure {
    fn from(e: amalgam::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn read_input(arg: &str) -> std::result::Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn load(arg: &str) -> std::result::Result<(String, Triple), Failure> {
    if !Path::new(arg).exists() {
        if let Some(t) = fixtures::by_name(arg) {
            return Ok((arg.to_ascii_lowercase(), t));
        }
    }
    let b = parse_bundle(&read_input(arg)?)?;
    Ok((b.name.clone(), b.to_triple()?))
}

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn vjson<'a>(v: impl IntoIterator<Item = &'a C64>) -> Value {
    Value::Array(v.into_iter().copied().map(cjson).collect())
}

fn validation_json(r: &ValidationReport) -> Value {
    let defects: serde_json::Map<String, Value> =
        r.defects.iter().map(|d| (d.name.to_string(), json!(d.value))).collect();
    json!({
        "passed": r.passed,
        "defects": defects,
        "submultiplicativity": r.submultiplicativity,
        "symmetric": r.symmetric,
    })
}

fn cohomology_json(c: &CohomologyReport) -> Value {
    let mut v = json!({
        "level": c.level,
        "Z1": c.dim_z1,
        "B1": c.dim_b1,
        "H1": c.dim_h1,
        "weakly_amenable": c.weakly_amenable(),
    });
    if let (Some(z), Some(h)) = (c.dim_z1_cyclic, c.dim_h1_cyclic) {
        v["Z1_cyclic"] = json!(z);
        v["H1_cyclic"] = json!(h);
        v["cyclically_amenable"] = json!(h == 0);
    }
    v
}

fn subspace_json(s: &Subspace) -> Value {
    let basis: Vec<Value> = s.vectors().iter().map(|v| vjson(v.iter())).collect();
    json!({"dim": s.dim(), "basis": basis})
}

/// Validates the triple, returning the failing report if it does not hold.
fn require_valid(command: &str, t: &Triple, tol: f64) -> std::result::Result<(), Report> {
    let (a, f, act) = t.validate(tol).map_err(|e| {
        let mut r = Report::new(command);
        r.push(Row::check("validate", false, e.to_string()));
        r
    })?;
    if a.passed && f.passed && act.passed {
        return Ok(());
    }
    let mut r = Report::new(command);
    r.push(
        Row::check("validate", false, "the bundle fails its axioms; run `validate` for details")
            .with_defect(a.max_defect().max(f.max_defect()).max(act.max_defect())),
    );
    Err(r)
}

macro_rules! valid_or_return {
    ($cmd:expr, $t:expr, $tol:expr) => {
        if let Err(r) = require_valid($cmd, $t, $tol) {
            return Ok(r);
        }
    };
}

fn validate(arg: &str, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    let a = validate_algebra(&t.a, tol);
    let f = validate_algebra(&t.f, tol);
    let (_, _, act) = t.validate(tol)?;
    let mut r = Report::new("validate").with_data(json!({
        "name": name,
        "dims": {"a": t.a_dim(), "f": t.f_dim(), "duplication": t.dup_dim()},
        "algebra_a": validation_json(&a),
        "algebra_f": validation_json(&f),
        "action": validation_json(&act),
    }));
    r.push(Row::check("algebra_a", a.passed, "associativity").with_defect(a.max_defect()));
    r.push(Row::check("algebra_f", f.passed, "associativity").with_defect(f.max_defect()));
    r.push(Row::check("action", act.passed, "bimodule and compatibility identities").with_defect(act.max_defect()));
    if a.passed && f.passed && act.passed {
        let d = t.duplicate_unchecked(tol).associativity_defect();
        r.push(Row::check("duplication", d <= tol * t.a.scale().max(t.f.scale()).max(1.0).powi(3), "associativity").with_defect(d));
    }
    Ok(r)
}

fn spectrum(arg: &str, tol: f64, seed: u64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("spectrum", &t, tol);
    let mut r = Report::new("spectrum");
    let s = match duplication_spectrum(&t, tol, seed) {
        Ok(s) => s,
        Err(e) => {
            r.push(Row::check("spectrum", false, e.to_string()));
            return Ok(r);
        }
    };
    let mut chars = Vec::new();
    for (tag, list) in [("E", &s.e), ("F", &s.f)] {
        for ch in list.iter() {
            let (a, f) = t.split(&ch.phi);
            let mut v = json!({"tag": tag, "a": vjson(a.iter()), "f": vjson(f.iter()), "residual": ch.residual});
            if let Some(tl) = &ch.tilde {
                v["tilde"] = vjson(tl.iter());
            }
            chars.push(v);
        }
    }
    let mut r = r.with_data(json!({
        "name": name,
        "count": {"E": s.e.len(), "F": s.f.len(), "direct": s.sigma.len()},
        "characters": chars,
    }));
    r.push(Row::check(
        "spectrum",
        true,
        format!("{} direct characters match E u F with E n F empty", s.sigma.len()),
    ));
    Ok(r)
}

fn semisimple(arg: &str, tol: f64, seed: u64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("semisimple", &t, tol);
    let dup = t.duplicate(tol)?;
    let mut r = Report::new("semisimple");
    let (a, f, d) = match (
        gelfand_semisimple(&t.a, tol, seed),
        gelfand_semisimple(&t.f, tol, seed),
        gelfand_semisimple(&dup, tol, seed),
    ) {
        (Ok(a), Ok(f), Ok(d)) => (a, f, d),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            r.push(Row::check("semisimple", false, e.to_string()));
            return Ok(r);
        }
    };
    let mut r = r.with_data(json!({"name": name, "algebra_a": a, "algebra_f": f, "duplication": d}));
    r.push(Row::check("transfer", d == (a && f), "duplication semisimple iff both factors are"));
    Ok(r)
}

fn ideals(arg: &str, file: &Path, side: Side, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("ideals", &t, tol);
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let n = parse_subspace(&text, t.dup_dim(), tol)?;
    let dup = t.duplicate(tol)?;
    let bound = tol * dup.scale();
    let mut closure = serde_json::Map::new();
    for (key, s) in [("left", Side::Left), ("right", Side::Right), ("two_sided", Side::TwoSided)] {
        let w = ideal_witness(&dup, &n, s)?;
        closure.insert(key.into(), json!({"ideal": w.defect <= bound, "defect": w.defect}));
    }
    let is_side_ideal = ideal_witness(&dup, &n, side)?.defect <= bound;
    let maximal = if is_side_ideal && !n.is_full() {
        Some(is_maximal_ideal(&dup, &n, side, tol)?)
    } else {
        None
    };
    let (i, j) = project_components(t.a_dim(), t.f_dim(), &n)?;
    let is_product = product_subspace(&t, &i, &j, tol)?.equals(&n)?;
    let mut data = json!({
        "name": name,
        "dim": n.dim(),
        "ambient": n.ambient_dim(),
        "closure": closure,
        "maximal": maximal,
        "projections": {"a": i.dim(), "f": j.dim()},
        "product_shaped": is_product,
    });
    let mut r = Report::new("ideals");
    if is_product {
        let p = product_ideal_test(&t, &i, &j, tol)?;
        data["product_test"] = json!({
            "i_left_ideal": p.i_left_ideal,
            "j_left_ideal": p.j_left_ideal,
            "i_submodule": p.i_submodule,
            "a_dot_j_in_i": p.a_dot_j_in_i,
            "conjunction": p.conjunction,
            "direct": p.direct,
        });
        r.push(Row::check("product-ideal", p.agrees(), "component conditions against the direct test"));
    }
    Ok(r.with_data(data))
}

fn multipliers(arg: &str, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("multipliers", &t, tol);
    let dup = t.duplicate(tol)?;
    let direct = left_multiplier_space(&dup, tol)?;
    let quads = quadruple_space(&t, tol)?.dim();
    let k = dup.dim();
    let mut worst: f64 = 0.0;
    let mut decomposed = true;
    for v in direct.vectors() {
        let op = unflatten(&v, k, k);
        match decompose_multiplier(&t, &op, tol) {
            Ok(q) => worst = worst.max((q.assemble() - op).camax()),
            Err(_) => decomposed = false,
        }
    }
    let cor = corollary_form_check(&t, tol)?;
    let mut r = Report::new("multipliers").with_data(json!({
        "name": name,
        "dim_direct": direct.dim(),
        "dim_quadruples": quads,
        "block_form": {"hypothesis": cor.hypothesis, "conclusion": cor.conclusion, "defect": cor.defect},
    }));
    r.push(Row::check("dimension", direct.dim() == quads, format!("direct {}, quadruples {quads}", direct.dim())));
    r.push(Row::check("roundtrip", decomposed && worst <= tol, "decompose then assemble on a basis").with_defect(worst));
    if let Some(ok) = cor.conclusion {
        r.push(Row::check("block-form", ok, "T2_A = 0 and T1_A a left multiplier").with_defect(cor.defect));
    }
    Ok(r)
}

fn arens(arg: &str, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("arens", &t, tol);
    let dup = t.duplicate(tol)?;
    let mut r = Report::new("arens");
    let mut data = json!({"name": name});
    for (key, alg) in [("algebra_a", &t.a), ("algebra_f", &t.f), ("duplication", &dup)] {
        let row = match arens_products(alg, tol) {
            Ok(s) => {
                data[key] = json!(s.defect);
                Row::check(format!("arens-{key}"), true, "both Arens tensors equal the product").with_defect(s.defect)
            }
            Err(e) => Row::check(format!("arens-{key}"), false, e.to_string()),
        };
        r.push(row);
    }
    r.push(match dual_actions(&t, tol) {
        Ok(d) => Row::check("dual-actions", true, "extended actions equal the action").with_defect(d.defect),
        Err(e) => Row::check("dual-actions", false, e.to_string()),
    });
    r.push(match second_dual_iso_defect(&t, tol) {
        Ok(d) => Row::check("second-dual", d <= tol, "second dual against the duplication of second duals").with_defect(d),
        Err(e) => Row::check("second-dual", false, e.to_string()),
    });
    Ok(r.with_data(data))
}

fn centres(arg: &str, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("centres", &t, tol);
    let c = topological_centres(&t, tol)?;
    let mut r = Report::new("centres").with_data(json!({
        "name": name,
        "duplication": subspace_json(&c.zt_dup),
        "algebra_a": subspace_json(&c.zt_a),
        "algebra_f": subspace_json(&c.zt_f),
        "f_on_a": subspace_json(&c.z_f_on_a),
        "a_on_f": subspace_json(&c.z_a_on_f),
    }));
    r.push(Row::check("product-formula", c.product_formula, "centre of the duplication as a product"));
    Ok(r)
}

fn derivations(arg: &str, level: usize, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("derivations", &t, tol);
    let dup = t.duplicate(tol)?;
    let d = cohomology(&dup, level, tol)?;
    let quads = derivation_quadruples(&t, level, tol)?.dim();
    let mut r = Report::new("derivations").with_data(json!({
        "name": name,
        "level": level,
        "duplication": cohomology_json(&d),
        "algebra_a": cohomology_json(&cohomology(&t.a, level, tol)?),
        "algebra_f": cohomology_json(&cohomology(&t.f, level, tol)?),
        "dim_quadruples": quads,
    }));
    r.push(Row::check("decomposition", d.dim_z1 == quads, format!("Z1 {}, quadruples {quads}", d.dim_z1)));
    Ok(r)
}

fn cyclic(arg: &str, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("cyclic", &t, tol);
    let dup = t.duplicate(tol)?;
    let d = cohomology(&dup, 1, tol)?;
    let a = cohomology(&t.a, 1, tol)?;
    let f = cohomology(&t.f, 1, tol)?;
    let quads = cyclic_quadruple_space(&t, tol)?.dim();
    let z = d.dim_z1_cyclic.unwrap_or(0);
    let mut r = Report::new("cyclic").with_data(json!({
        "name": name,
        "duplication": cohomology_json(&d),
        "algebra_a": cohomology_json(&a),
        "algebra_f": cohomology_json(&f),
        "dim_cyclic_quadruples": quads,
    }));
    r.push(Row::check("decomposition", z == quads, format!("Z1_cyclic {z}, cyclic quadruples {quads}")));
    Ok(r)
}

fn property(arg: &str, n: usize, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("property-h", &t, tol);
    let h = property_h(&t, n, tol)?;
    let mut r = Report::new("property-h")
        .with_data(json!({"name": name, "n": n, "level": 2 * n + 1, "property_h": h}));
    r.push(Row::new(
        "property-h",
        Status::Info,
        format!(
            "{} derivation into level {} extends to a quadruple",
            if h { "every" } else { "not every" },
            2 * n + 1
        ),
    ));
    Ok(r)
}

fn amenability(arg: &str, max_level: usize, tol: f64) -> Outcome {
    let (name, t) = load(arg)?;
    valid_or_return!("amenability", &t, tol);
    let tab = amenability_predicates(&t, max_level, tol)?;
    let rows: Vec<Value> = tab
        .rows
        .iter()
        .map(|x| {
            json!({
                "level": x.level,
                "algebra_a": x.a_weak,
                "algebra_f": x.f_weak,
                "duplication": x.dup_weak,
                "squares_full": x.squares_full,
                "essential": x.essential,
                "property_h": x.property_h,
                "a_unital": x.a_unital,
            })
        })
        .collect();
    let mut r = Report::new("amenability").with_data(json!({
        "name": name,
        "weak": rows,
        "cyclic": {"algebra_a": tab.a_cyclic, "algebra_f": tab.f_cyclic, "duplication": tab.dup_cyclic},
        "property_h1": tab.property_h1,
    }));
    match checks::transfer_violations(&t, tol) {
        Ok(v) => r.push(Row::check("transfer", v.total() == 0, format!("{v:?}"))),
        Err(e) => r.push(Row::check("transfer", false, e.to_string())),
    }
    Ok(r)
}

fn check_paper(arg: Option<&str>, trials: Option<usize>, seed: u64, tol: f64) -> Outcome {
    let mut r = Report::new("check-paper");
    let mut data = json!({"seed": seed, "trials": trials});
    if let Some(arg) = arg {
        let (name, t) = load(arg)?;
        data["name"] = json!(name);
        for mut row in checks::triple_checks(&t, tol, seed) {
            row.id = format!("bundle/{}", row.id);
            r.push(row);
        }
    }
    let headline = match trials {
        Some(n) => checks::headline_uniform(n, seed, tol),
        None => checks::headline(1.0, seed, tol),
    };
    for (k, mut row) in headline.into_iter().enumerate() {
        row.id = format!("{:02}/{}", k + 1, row.id);
        r.push(row);
    }
    for row in checks::supplementary(trials.unwrap_or(50), seed, tol) {
        r.push(row);
    }
    Ok(r.with_data(data))
}

fn duplicate(arg: &str, tol: f64) -> std::result::Result<String, Failure> {
    let (_, t) = load(arg)?;
    if let Err(r) = require_valid("duplicate", &t, tol) {
        return Err(Failure::Invalid(r.rows[0].detail.clone()));
    }
    Ok(algebra_to_json(&t.duplicate(tol)?))
}

fn run(cli: &Cli) -> Outcome {
    let (tol, seed) = (cli.tol, cli.seed);
    match &cli.command {
        Command::Validate { bundle } => validate(bundle, tol),
        Command::Duplicate { .. } => unreachable!("handled before reports"),
        Command::Spectrum { bundle } => spectrum(bundle, tol, seed),
        Command::Semisimple { bundle } => semisimple(bundle, tol, seed),
        Command::Ideals { bundle, subspace, side } => ideals(bundle, subspace, (*side).into(), tol),
        Command::Multipliers { bundle } => multipliers(bundle, tol),
        Command::Arens { bundle } => arens(bundle, tol),
        Command::Centres { bundle } => centres(bundle, tol),
        Command::Derivations { bundle, level } => derivations(bundle, *level, tol),
        Command::Cyclic { bundle } => cyclic(bundle, tol),
        Command::PropertyH { bundle, n } => property(bundle, *n, tol),
        Command::Amenability { bundle, max_level } => amenability(bundle, *max_level, tol),
        Command::CheckPaper { bundle, trials } => check_paper(bundle.as_deref(), *trials, seed, tol),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Duplicate { .. } => "duplicate",
        Command::Spectrum { .. } => "spectrum",
        Command::Semisimple { .. } => "semisimple",
        Command::Ideals { .. } => "ideals",
        Command::Multipliers { .. } => "multipliers",
        Command::Arens { .. } => "arens",
        Command::Centres { .. } => "centres",
        Command::Derivations { .. } => "derivations",
        Command::Cyclic { .. } => "cyclic",
        Command::PropertyH { .. } => "property-h",
        Command::Amenability { .. } => "amenability",
        Command::CheckPaper { .. } => "check-paper",
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        eprintln!("error: --tol must be a positive finite number");
        return ExitCode::from(2);
    }
    let outcome = match &cli.command {
        Command::Duplicate { bundle } => match duplicate(bundle, cli.tol) {
            Ok(text) => {
                emit(&format!("{text}\n"));
                return ExitCode::SUCCESS;
            }
            Err(e) => Err(e),
        },
        _ => run(&cli),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Invalid(msg)) => {
            let mut r = Report::new(command_name(&cli.command));
            r.push(Row::check("input", false, msg.clone()));
            eprintln!("error: {msg}");
            r
        }
    };
    match cli.format {
        Format::Json => emit(&format!("{}\n", report.to_json())),
        Format::Text => emit(&report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}
