//! `blaschke`: batch driver for the model-space library.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors, 2 when a
//! verification (a suite, or `model validate`) fails.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use blaschke_core::basin::straighten;
use blaschke_core::blaschke::{conformal_barycenter, normalize_critically_centered, normalize_fixed_point_centered};
use blaschke_core::circle::{build_coordinate_table, invariant_measure, verify_balanced};
use blaschke_core::model::{
    act, boundary_markings, conjugacy_equivalent, default_probes, kernel_n0, orbit, random_member, sample,
    sample_symmetric,
};
use blaschke_core::random::seeded;
use blaschke_core::schema::{automorphism_group, enumerate_schemata, rotation_group_order, symmetry_group};
use blaschke_core::symmetric::{from_monic, to_monic};
use blaschke_core::tol::{set_tolerances, tolerances};
use blaschke_core::{
    ArcInterval, BasinSystem, BlaschkeProduct, Complex, Error, MappingSchema, ModelMap, Suite, SuiteOptions,
};

use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "blaschke", version, about = "Blaschke-product model spaces: normal forms, circle dynamics, markings, straightening")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override, `name=value` (repeatable).
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Depth of circle tables and preimage samples, or iteration budget for orbits.
    #[arg(long, global = true)]
    depth: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mapping schemata and their symmetry groups.
    #[command(subcommand)]
    Schema(SchemaCmd),
    /// Single Blaschke products.
    #[command(subcommand)]
    Blaschke(BlaschkeCmd),
    /// Boundary dynamics on the circle.
    #[command(subcommand)]
    Circle(CircleCmd),
    /// Members of the model space.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Disk-union dynamics and straightening.
    #[command(subcommand)]
    Basin(BasinCmd),
    /// Debugging helpers.
    #[command(subcommand)]
    Util(UtilCmd),
    /// Run a property suite and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum SchemaCmd {
    Validate { file: PathBuf },
    /// Orders of Aut(S), N(S), G(S), the kernel N0(S) and the effective group.
    Groups { file: PathBuf },
    Enumerate {
        #[arg(long)]
        weight: u32,
    },
}

#[derive(Subcommand, Debug)]
enum BlaschkeCmd {
    Eval {
        file: PathBuf,
        /// Evaluation point `re,im` (repeatable).
        #[arg(long = "at", required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        at: Vec<Complex>,
    },
    FixedPoints { file: PathBuf },
    Critical { file: PathBuf },
    NormalizeFpc { file: PathBuf },
    NormalizeCc { file: PathBuf },
    /// Conformal barycenter of a JSON list of `[re, im]` points.
    Barycenter { file: PathBuf },
}

#[derive(Args, Debug)]
struct ArcArg {
    /// Arc `start,end` in radians, counterclockwise.
    #[arg(long, value_parser = parse_arc, allow_hyphen_values = true)]
    arc: ArcInterval,
}

#[derive(Subcommand, Debug)]
enum CircleCmd {
    Table {
        #[arg(long)]
        degree_map: PathBuf,
        /// Which boundary fixed point (by argument) anchors t = 0.
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    Measure {
        #[arg(long)]
        degree_map: PathBuf,
        #[command(flatten)]
        arc: ArcArg,
    },
    Balanced {
        #[arg(long)]
        degree_map: PathBuf,
        #[command(flatten)]
        arc: ArcArg,
    },
}

#[derive(Subcommand, Debug)]
enum ModelCmd {
    Center {
        #[arg(long)]
        schema: PathBuf,
    },
    /// A member from a parameter file, or a random one.
    Sample {
        #[arg(long)]
        schema: PathBuf,
        /// JSON list of 2w reals.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Read the parameters in the symmetric-function chart.
        #[arg(long)]
        symmetric: bool,
    },
    Validate { file: PathBuf },
    Markings { file: PathBuf },
    Pcf { file: PathBuf },
    Orbit { file: PathBuf },
    Act {
        file: PathBuf,
        /// Index into G(S), automorphism-major.
        #[arg(long)]
        element: usize,
    },
    Equivalent {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        within: f64,
    },
}

#[derive(Subcommand, Debug)]
enum BasinCmd {
    DeriveSchema {
        file: PathBuf,
    },
    Straighten {
        file: PathBuf,
        #[arg(long, conflicts_with = "first")]
        all: bool,
        #[arg(long)]
        first: bool,
    },
}

#[derive(Subcommand, Debug)]
enum UtilCmd {
    #[command(subcommand)]
    Sym(SymCmd),
}

#[derive(Subcommand, Debug)]
enum SymCmd {
    /// Roots (JSON `[[re, im], ...]`) to monic coefficients `c1 ... cn`.
    ToMonic { file: PathBuf },
    /// Monic coefficients back to sorted roots.
    FromMonic { file: PathBuf },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name.
    #[arg(value_parser = parse_suite)]
    suite: Option<Suite>,
    /// Run every suite.
    #[arg(long, conflicts_with = "suite")]
    all: bool,
    /// Random maps or samples per case, replacing the suite default.
    #[arg(long)]
    trials: Option<usize>,
    /// Degree to test (repeatable).
    #[arg(long = "degree")]
    degrees: Vec<usize>,
    /// Largest total schema weight to enumerate.
    #[arg(long)]
    weight: Option<u32>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let value: f64 = value.parse().map_err(|e| format!("{e}"))?;
    Ok((name.to_string(), value))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected two comma-separated numbers")?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn parse_complex(s: &str) -> Result<Complex, String> {
    parse_pair(s).map(|(re, im)| Complex::new(re, im))
}

fn parse_arc(s: &str) -> Result<ArcInterval, String> {
    let (a, b) = parse_pair(s)?;
    ArcInterval::new(a, b).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}`; expected one of: {}", names.join(", "))
    })
}

/// Failures that map to an exit code.
enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Output, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn data<T: Serialize>(value: &T) -> CmdResult {
    Ok(Output::json(value))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let mut tol = tolerances();
    for (name, value) in &g.tol {
        tol.set(name, *value)?;
    }
    set_tolerances(tol);
    if g.depth == Some(0) {
        return Err(Failure::Usage("--depth must be positive".into()));
    }
    eprintln!("# seed {}", g.seed);

    let out = dispatch(&cli.command, g)?;
    let failed = out.failed;
    out.emit(g.format, g.seed, g.out.as_deref()).map_err(Failure::Usage)?;
    if failed {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn dispatch(cmd: &Command, g: &Global) -> CmdResult {
    match cmd {
        Command::Schema(c) => schema_cmd(c, g),
        Command::Blaschke(c) => blaschke_cmd(c),
        Command::Circle(c) => circle_cmd(c, g),
        Command::Model(c) => model_cmd(c, g),
        Command::Basin(c) => basin_cmd(c),
        Command::Util(UtilCmd::Sym(c)) => sym_cmd(c),
        Command::Verify(v) => verify_cmd(v, g),
    }
}

fn schema_cmd(cmd: &SchemaCmd, g: &Global) -> CmdResult {
    match cmd {
        SchemaCmd::Validate { file } => {
            let s: MappingSchema = read_json(file)?;
            let cycles: Vec<Vec<&str>> =
                s.cycles().iter().map(|c| c.vertices.iter().map(|&v| s.id(v)).collect()).collect();
            Ok(Output::json(&json!({
                "valid": true,
                "vertices": s.len(),
                "total_weight": s.total_weight(),
                "cycles": cycles,
            })))
        }
        SchemaCmd::Groups { file } => {
            let s: MappingSchema = read_json(file)?;
            let aut = automorphism_group(&s).len() as u64;
            let n = rotation_group_order(&s);
            let probes = default_probes(&s, g.seed)?;
            let n0 = kernel_n0(&s, &probes, tolerances().eval)?.len() as u64;
            Ok(Output::json(&json!({ "aut": aut, "n": n, "g": aut * n, "n0": n0, "g_bar": aut * n / n0 })))
        }
        SchemaCmd::Enumerate { weight } => data(&enumerate_schemata(*weight)?),
    }
}

fn blaschke_cmd(cmd: &BlaschkeCmd) -> CmdResult {
    match cmd {
        BlaschkeCmd::Eval { file, at } => {
            let f: BlaschkeProduct = read_json(file)?;
            let values = at.iter().map(|&z| f.eval(z)).collect::<Result<Vec<_>, _>>()?;
            data(&values)
        }
        BlaschkeCmd::FixedPoints { file } => data(&read_json::<BlaschkeProduct>(file)?.fixed_points()?),
        BlaschkeCmd::Critical { file } => data(&read_json::<BlaschkeProduct>(file)?.critical_points()?),
        BlaschkeCmd::NormalizeFpc { file } => {
            let out = normalize_fixed_point_centered(&read_json(file)?)?;
            data(&out.iter().map(|(b, h)| json!({ "product": b, "conjugacy": h })).collect::<Vec<_>>())
        }
        BlaschkeCmd::NormalizeCc { file } => {
            let out = normalize_critically_centered(&read_json(file)?)?;
            data(&out.iter().map(|(b, h)| json!({ "product": b, "precomposition": h })).collect::<Vec<_>>())
        }
        BlaschkeCmd::Barycenter { file } => data(&conformal_barycenter(&read_json::<Vec<Complex>>(file)?)?),
    }
}

const DEFAULT_DEPTH: u32 = 10;

fn circle_cmd(cmd: &CircleCmd, g: &Global) -> CmdResult {
    let depth = g.depth.unwrap_or(DEFAULT_DEPTH);
    match cmd {
        CircleCmd::Table { degree_map, base } => {
            let f: BlaschkeProduct = read_json(degree_map)?;
            let table = build_coordinate_table(&f, depth, *base)?;
            let mut csv = Vec::new();
            table.write_csv(&mut csv)?;
            Ok(Output::json(&table).with_csv(String::from_utf8(csv).expect("csv output is UTF-8")))
        }
        CircleCmd::Measure { degree_map, arc } => {
            let f: BlaschkeProduct = read_json(degree_map)?;
            data(&invariant_measure(&f, &arc.arc, depth)?)
        }
        CircleCmd::Balanced { degree_map, arc } => {
            let f: BlaschkeProduct = read_json(degree_map)?;
            data(&verify_balanced(&f, &arc.arc, depth)?)
        }
    }
}

fn model_cmd(cmd: &ModelCmd, g: &Global) -> CmdResult {
    match cmd {
        ModelCmd::Center { schema } => data(&ModelMap::center(&read_json(schema)?)),
        ModelCmd::Sample { schema, params, symmetric } => {
            let s: MappingSchema = read_json(schema)?;
            let m = match (params, symmetric) {
                (Some(p), false) => sample(&s, &read_json::<Vec<f64>>(p)?)?,
                (Some(p), true) => sample_symmetric(&s, &read_json::<Vec<f64>>(p)?)?,
                (None, false) => random_member(&s, &mut seeded(g.seed))?,
                (None, true) => return Err(Failure::Usage("--symmetric needs --params".into())),
            };
            data(&m)
        }
        ModelCmd::Validate { file } => {
            let m: ModelMap = read_json(file)?;
            Ok(match m.validate_membership() {
                Ok(()) => Output::json(&json!({ "member": true })),
                Err(e @ Error::Membership { .. }) => Output::json(&json!({ "member": false, "reason": e.to_string() })).failing(),
                Err(e) => return Err(e.into()),
            })
        }
        ModelCmd::Markings { file } => data(&boundary_markings(&read_json(file)?)?),
        ModelCmd::Pcf { file } => {
            let m: ModelMap = read_json(file)?;
            let orbits = m.critical_orbits(tolerances().pcf, g.depth.unwrap_or(100) as usize)?;
            data(&json!({ "post_critically_finite": m.is_post_critically_finite(), "critical_orbits": orbits }))
        }
        ModelCmd::Orbit { file } => {
            let images = orbit(&read_json(file)?)?;
            data(&images.iter().map(|(g, m)| json!({ "element": g, "model": m })).collect::<Vec<_>>())
        }
        ModelCmd::Act { file, element } => {
            let m: ModelMap = read_json(file)?;
            let group = symmetry_group(m.schema());
            let g = group
                .get(*element)
                .ok_or_else(|| Failure::Usage(format!("element {element} out of range; |G(S)| = {}", group.len())))?;
            data(&act(g, &m)?)
        }
        ModelCmd::Equivalent { first, second, within } => {
            let witness = conjugacy_equivalent(&read_json(first)?, &read_json(second)?, *within)?;
            data(&json!({ "equivalent": witness.is_some(), "element": witness }))
        }
    }
}

fn basin_cmd(cmd: &BasinCmd) -> CmdResult {
    match cmd {
        BasinCmd::DeriveSchema { file } => data(&read_json::<BasinSystem>(file)?.derive_schema()?),
        BasinCmd::Straighten { file, first, .. } => {
            let b: BasinSystem = read_json(file)?;
            let mut out = straighten(&b)?;
            if *first {
                out.truncate(1);
                return data(&out[0]);
            }
            data(&out)
        }
    }
}

fn sym_cmd(cmd: &SymCmd) -> CmdResult {
    match cmd {
        SymCmd::ToMonic { file } => data(&to_monic(&read_json::<Vec<Complex>>(file)?)?),
        SymCmd::FromMonic { file } => data(&from_monic(&read_json::<Vec<Complex>>(file)?)?),
    }
}

fn verify_cmd(v: &VerifyArgs, g: &Global) -> CmdResult {
    let suites: Vec<Suite> = match (v.suite, v.all) {
        (Some(s), false) => vec![s],
        (None, true) => Suite::ALL.to_vec(),
        _ => return Err(Failure::Usage("name a suite or pass --all".into())),
    };
    let options = SuiteOptions {
        seed: g.seed,
        trials: v.trials,
        degrees: (!v.degrees.is_empty()).then(|| v.degrees.clone()),
        depth: g.depth,
        max_weight: v.weight,
    };
    let reports = suites.iter().map(|s| s.run(&options)).collect::<Result<Vec<_>, _>>()?;
    let failed = reports.iter().any(|r| !r.passed);
    let text: String = reports.iter().map(|r| r.to_string()).collect();
    let out = Output::json(&reports).with_text(text).prefer_text();
    Ok(if failed { out.failing() } else { out })
}
