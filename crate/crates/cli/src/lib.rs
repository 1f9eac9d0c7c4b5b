//! Command-line driver: argument parsing, dispatch and run reports.

pub mod error;
pub mod report;
pub mod suites;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use flopkit::detgeo::DeterminantalInstance;
use flopkit::fourfold::{
    check_involution, extend_to_fourfold, sample_line, scroll_incidence_report, tolerance, CubicFourfold,
};
use flopkit::lattice::{chamber_locate, nef_test, orbit_classes, represents, transfer_k_to_j, LatticeClass, OrbitKind};
use flopkit::par::Exec;
use flopkit::poly::{int, Rational};
use flopkit::schubert::{fano_degree, line_family_degrees};
use flopkit::segre3::SegreVariant;

pub use error::{CliError, CliResult};
pub use report::RunReport;
pub use suites::{Ctx, Samples};
pub use svg::emit_cone_svg;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const PRECISION_ENV: &str = "FLOPKIT_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "flopkit", version, about = "Lattice chambers, determinantal cubics and their lines")]
pub struct Cli {
    /// Emit the run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Working precision in bits for numerical steps.
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The rank-2 lattice, its (−10)-classes and chambers.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Determinantal cubic threefolds with six nodes.
    #[command(subcommand)]
    Instance(InstanceCmd),
    /// The 27 lines on a cubic surface.
    #[command(subcommand)]
    Surf27(Surf27Cmd),
    /// The Segre cubic and the six-point maps.
    #[command(subcommand)]
    Segre(SegreCmd),
    /// The cubic fourfold and the involution on its lines.
    #[command(subcommand)]
    Fourfold(FourfoldCmd),
    /// Schubert calculus on G(2, n).
    #[command(subcommand)]
    Schubert(SchubertCmd),
    /// Every suite for one seed.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Rho,
    RhoDual,
    Alpha,
    AlphaDual,
}

impl From<KindArg> for OrbitKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rho => OrbitKind::Rho,
            KindArg::RhoDual => OrbitKind::RhoDual,
            KindArg::Alpha => OrbitKind::Alpha,
            KindArg::AlphaDual => OrbitKind::AlphaDual,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Classes of a ρ or α sequence.
    Orbit {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Chamber containing x·g + y·τ, and the nef test against a model.
    Chamber {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
        #[arg(long, allow_negative_numbers = true)]
        y: i64,
        /// Also test nefness on model k.
        #[arg(long, allow_negative_numbers = true)]
        model: Option<i64>,
    },
    /// Whether n is the square of a class.
    Represent {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = flopkit::lattice::DEFAULT_SEARCH_BOUND)]
        bound: u64,
    },
    /// Transfer [[3,a],[a,t]] to the (g, τ) lattice.
    Transfer {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
    },
    /// Chamber picture with rays ray(−k) … ray(k).
    Svg {
        #[arg(long, default_value_t = 2)]
        k: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Where an instance comes from: a JSON file, or a seed.
#[derive(Debug, Clone, Args)]
pub struct InstanceSource {
    /// Instance JSON written by `instance new`; overrides `--seed`.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Seed of a freshly generated instance.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum InstanceCmd {
    /// Generate an instance and write it as JSON.
    New {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify an instance and the three families of special lines.
    Check {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, default_value_t = 3)]
        lines_per_kind: usize,
    },
    /// Lines through a seeded random smooth point.
    Lines {
        #[command(flatten)]
        source: InstanceSource,
        /// Index (1-based) into the instance's stream of smooth points.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        seed_point: u64,
    },
    /// Projection from a node (1-based); all nodes when omitted.
    Project {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        node: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Surf27Cmd {
    /// Line classes, disjoint sextuples and double-sixes.
    Enumerate {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Printed,
    Cyclic,
}

#[derive(Debug, Subcommand)]
pub enum SegreCmd {
    /// Expand the quintic relation; both variants when none is given.
    Identity {
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Compare the two six-tuples at random points of S°.
    Jmap {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FourfoldCmd {
    /// Extend Y to a cubic fourfold X = F + x₅·Q.
    Extend {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply ι to a seeded line of X.
    Iota {
        #[command(flatten)]
        source: InstanceSource,
        /// A fourfold written by `fourfold extend`.
        #[arg(long, conflicts_with = "instance")]
        fourfold: Option<PathBuf>,
        /// Seed of the sampled line.
        #[arg(long, default_value_t = 1)]
        line_seed: u64,
        /// Also apply ι twice and compare with the original line.
        #[arg(long)]
        check_involution: bool,
        /// Vector v (comma separated) whose scroll T_v is tested.
        #[arg(long, allow_hyphen_values = true)]
        check_scroll: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchubertCmd {
    /// Degree of the Fano variety of lines via c₄(Sym³S∨).
    DegFano {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(4..=5))]
        ambient: u32,
    },
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Rendered output and exit status of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => render(&cli, &report),
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn render(cli: &Cli, report: &RunReport) -> Outcome {
    let stdout = if cli.json || wants_json(&cli.command) {
        match report.to_json(cli.timings) {
            Ok(s) => s + "\n",
            Err(e) => return Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_FAILURE },
        }
    } else {
        report.to_text(cli.timings)
    };
    Outcome { stdout, stderr: String::new(), code: report.exit_code() }
}

fn wants_json(cmd: &Command) -> bool {
    matches!(cmd, Command::Surf27(Surf27Cmd::Enumerate { format: Format::Json }))
}

fn ctx(cli: &Cli, seed: u64) -> Ctx {
    Ctx {
        seed,
        precision: cli.precision as usize,
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_instance(cli: &Cli, source: &InstanceSource) -> CliResult<DeterminantalInstance> {
    match &source.instance {
        Some(path) => DeterminantalInstance::from_json(&read(path)?)
            .map_err(|e| CliError::Usage(format!("{}: not an instance: {e}", path.display()))),
        None => suites::build_instance(ctx(cli, source.seed)),
    }
}

fn parse_vector(s: &str) -> CliResult<Vec<Rational>> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map(int).map_err(|_| suites::parse_err("vector", s)))
        .collect::<CliResult<Vec<_>>>()?;
    if v.len() != 3 || v.iter().all(num_traits::Zero::is_zero) {
        return Err(CliError::Usage(format!("expected a nonzero vector of length 3, got {s:?}")));
    }
    Ok(v)
}

pub fn execute(cli: &Cli) -> CliResult<RunReport> {
    let report = match &cli.command {
        Command::Lattice(cmd) => lattice(cli, cmd)?,
        Command::Instance(cmd) => instance(cli, cmd)?,
        Command::Surf27(Surf27Cmd::Enumerate { .. }) => {
            let mut r = suites::surf27_suite(ctx(cli, 1))?;
            r.data("enumeration", flopkit::surf27::enumerate())?;
            r
        }
        Command::Segre(cmd) => segre(cli, cmd)?,
        Command::Fourfold(cmd) => fourfold(cli, cmd)?,
        Command::Schubert(SchubertCmd::DegFano { ambient }) => {
            let c = ctx(cli, 1);
            let d = fano_degree(*ambient)?;
            let mut r = RunReport::new("schubert deg-fano", None, c.precision);
            let expected = if *ambient == 4 { 27 } else { 45 };
            r.check_detail("degree", d.degree == expected, d.degree.to_string());
            if *ambient == 5 {
                let split: Vec<i64> = line_family_degrees().iter().map(|p| p.1).collect();
                r.check_detail("family_split", split.iter().sum::<i64>() == d.degree, format!("{split:?}"));
                r.data("families", line_family_degrees())?;
            }
            r.line(format!("∫ {} = {}", d.integrand, d.degree));
            r.data("degree", d.degree)?;
            r.data("trace", &d)?;
            r.finish()
        }
        Command::Reproduce(args) => {
            if !args.all {
                return Err(CliError::Usage("reproduce needs --all".into()));
            }
            suites::reproduce_all(ctx(cli, args.seed), Samples::default())?
        }
    };
    Ok(report)
}

fn lattice(cli: &Cli, cmd: &LatticeCmd) -> CliResult<RunReport> {
    let precision = cli.precision as usize;
    Ok(match cmd {
        LatticeCmd::Orbit { kind, count } => {
            let classes = orbit_classes((*kind).into(), *count);
            let mut r = RunReport::new("lattice orbit", None, precision);
            let want = if matches!(kind, KindArg::Rho | KindArg::RhoDual) { -10 } else { 6 };
            r.check(format!("squares_{want}"), classes.iter().all(|c| c.square() == want.into()));
            let coords: Vec<[serde_json::Number; 2]> = classes
                .iter()
                .map(|c| [c.x.to_string().parse().expect("integer"), c.y.to_string().parse().expect("integer")])
                .collect();
            r.data("classes", coords)?;
            for (j, c) in classes.iter().enumerate() {
                r.line(format!("{}: {c}", j + 1));
            }
            r.finish()
        }
        LatticeCmd::Chamber { x, y, model } => {
            let v = LatticeClass::j12(*x, *y);
            let loc = chamber_locate(&v)?;
            let mut r = RunReport::new("lattice chamber", None, precision);
            r.line(format!("{v} lies in chamber {}", loc.k));
            if let Some(k) = model {
                let nef = nef_test(&v, *k)?;
                r.line(format!("nef on model {k}: {nef}"));
                r.data("nef", nef)?;
            }
            r.data("location", &loc)?;
            r.finish()
        }
        LatticeCmd::Represent { n, bound } => {
            let rep = represents(*n, *bound);
            let mut r = RunReport::new("lattice represent", None, precision);
            let decided = !matches!(rep, flopkit::lattice::Representation::Inconclusive { .. });
            r.check("decided", decided);
            r.line(serde_json::to_string(&rep)?);
            r.data("result", &rep)?;
            r.finish()
        }
        LatticeCmd::Transfer { a, t } => {
            let out = transfer_k_to_j([[3, *a], [*a, *t]])?;
            let mut r = RunReport::new("lattice transfer", None, precision);
            r.check("determinant_identity", out.det == -2 * (3 * t - a * a));
            r.line(format!("{:?}, det {}", out.gram, out.det));
            r.data("transfer", &out)?;
            r.finish()
        }
        LatticeCmd::Svg { k, out } => {
            let svg = emit_cone_svg(*k)?;
            let mut r = RunReport::new("lattice svg", None, precision);
            r.data("k", k)?;
            match out {
                Some(path) => {
                    write(path, &svg)?;
                    r.artifact(path.display().to_string());
                }
                None => {
                    r.data("svg", &svg)?;
                    r.line(svg.trim_end());
                }
            }
            r.finish()
        }
    })
}

fn instance(cli: &Cli, cmd: &InstanceCmd) -> CliResult<RunReport> {
    Ok(match cmd {
        InstanceCmd::New { seed, out } => {
            let c = ctx(cli, *seed);
            let inst = suites::build_instance(c)?;
            let mut r = suites::instance_suite(c, &inst, Samples { special_lines: 0, ..Samples::default() })?;
            r.command = "instance new".into();
            r.data("attempts", inst.attempts)?;
            match out {
                Some(path) => {
                    write(path, &inst.to_json()?)?;
                    r.artifact(path.display().to_string());
                }
                None => {
                    r.data("instance", &inst)?;
                }
            }
            r
        }
        InstanceCmd::Check { source, lines_per_kind } => {
            let inst = load_instance(cli, source)?;
            let samples = Samples { special_lines: *lines_per_kind, ..Samples::default() };
            suites::instance_suite(ctx(cli, inst.seed), &inst, samples)?
        }
        InstanceCmd::Lines { source, seed_point } => {
            let inst = load_instance(cli, source)?;
            suites::lines_suite(ctx(cli, inst.seed), &inst, &[*seed_point as usize - 1])?
        }
        InstanceCmd::Project { source, node } => {
            let inst = load_instance(cli, source)?;
            let nodes: Vec<usize> = match node {
                Some(i) => vec![*i as usize - 1],
                None => (0..inst.nodes.len()).collect(),
            };
            suites::project_suite(ctx(cli, inst.seed), &inst, &nodes)?
        }
    })
}

fn segre(cli: &Cli, cmd: &SegreCmd) -> CliResult<RunReport> {
    match cmd {
        SegreCmd::Identity { variant: None } => suites::segre_suite(ctx(cli, 1)),
        SegreCmd::Identity { variant: Some(v) } => {
            let v = match v {
                VariantArg::Printed => SegreVariant::Printed,
                VariantArg::Cyclic => SegreVariant::Cyclic,
            };
            suites::segre_identity_suite(ctx(cli, 1), &[v])
        }
        SegreCmd::Jmap { source, samples } => {
            let inst = load_instance(cli, source)?;
            suites::jmap_suite(ctx(cli, inst.seed), &inst, *samples)
        }
    }
}

fn fourfold(cli: &Cli, cmd: &FourfoldCmd) -> CliResult<RunReport> {
    match cmd {
        FourfoldCmd::Extend { source, out } => {
            let inst = load_instance(cli, source)?;
            let c = ctx(cli, source.seed);
            let x = extend_to_fourfold(&inst, c.seed)?;
            let mut r = RunReport::new("fourfold extend", Some(c.seed), c.precision);
            r.check("restricts_to_y", x.restriction_to_hyperplane() == inst.cubic_y);
            r.check("smooth_at_nodes_and_samples", x.spot_check_smoothness(x.seed).is_ok());
            r.line(format!("Q = {}", x.quadric));
            r.data("quadric", x.quadric.to_string())?;
            r.data("attempts", x.attempts)?;
            if let Some(path) = out {
                write(path, &serde_json::to_string_pretty(&x)?)?;
                r.artifact(path.display().to_string());
            }
            Ok(r.finish())
        }
        FourfoldCmd::Iota { source, fourfold, line_seed, check_involution: involution, check_scroll } => {
            let x: CubicFourfold = match fourfold {
                Some(path) => serde_json::from_str(&read(path)?)
                    .map_err(|e| CliError::Usage(format!("{}: not a fourfold: {e}", path.display())))?,
                None => extend_to_fourfold(&load_instance(cli, source)?, source.seed)?,
            };
            let c = ctx(cli, x.seed);
            let mut r = RunReport::new("fourfold iota", Some(c.seed), c.precision);
            let m = sample_line(&x, *line_seed, c.precision)?;
            let tol = tolerance(c.precision).to_f64().value();
            let bound = suites::residual_bound(c.precision);
            r.check_detail("line_on_x", m.residual < bound, format!("{:.3e}", m.residual));
            let image = flopkit::fourfold::iota(&x, &m)?;
            r.check("plane_contains_both_lines", image.in_plane && image.meets_l_dual);
            r.check_detail("image_on_x", image.line.residual < tol, format!("{:.3e}", image.line.residual));
            r.data("line", &m)?;
            r.data("image", &image)?;
            if *involution {
                let inv = check_involution(&x, &m)?;
                r.check_detail("involution", inv.distance < tol, format!("{:.3e}", inv.distance));
                r.data("involution_distance", inv.distance)?;
            }
            if let Some(v) = check_scroll {
                let v = parse_vector(v)?;
                let rep = scroll_incidence_report(&x, &m, &v)?;
                r.check_detail(
                    "scroll_incidence_invariant",
                    rep.invariant,
                    format!("meets {} / {}", rep.m_meets, rep.image_meets),
                );
                r.data("scroll", &rep)?;
            }
            Ok(r.finish())
        }
    }
}
