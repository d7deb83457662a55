//! `meshsig`: signatures and congruence decisions for planar point meshes.

mod io;
mod plot;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use meshsig_core::{
    affine, audit, congruence, counterexample, decide_affine, decide_dist_angle, decide_eq1,
    decide_eq2_angle_type, decide_eq2_signed, decide_eq3, decide_eq4, decide_host, geometry,
    host, sa_signature_with, se_signature_with, signature, AffineSpacing, AffineVariant,
    CounterexampleId, DecideOptions, EndpointCondition, Error, Group, MatchMode, Mesh,
    NeighborhoodSpec, Scheme, Signature, Tolerances, Verdict,
};

use crate::io::Failure;

const EXIT_CODES: &str = "\
Exit codes:
  0  success / Congruent
  1  NotCongruent (or selfcheck failures)
  2  parse error, bad flags or unreadable input
  3  mesh does not fit the requested scheme (spacing, length, convexity)
  4  HypothesesNotMet
  5  group does not match the scheme or decision procedure

Indices are 0-based: the first mesh point is index 0.";

#[derive(Parser)]
#[command(name = "meshsig", version, about, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a signature and write it as CSV (and optionally an SVG plot).
    Signature(SignatureArgs),
    /// Decide whether two meshes are congruent.
    Congruent(CongruentArgs),
    /// Write a pair of meshes with equal invariants and an expected-verdict report.
    Counterexample(CounterexampleArgs),
    /// Step traversal of an n-cycle, Euler's phi and candidate steps.
    Host(HostArgs),
    /// Run the randomized invariance audit.
    Selfcheck(SelfcheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SigGroup {
    Se,
    Sa,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Se,
    E,
    Sa,
    Abar,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Se => Group::SE,
            GroupArg::E => Group::E,
            GroupArg::Sa => Group::SA,
            GroupArg::Abar => Group::Abar,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Via {
    Oracle,
    #[value(name = "thm4.9")]
    Thm4_9,
    #[value(name = "thm4.14")]
    Thm4_14,
    #[value(name = "thm4.15")]
    Thm4_15,
    #[value(name = "thm4.18")]
    Thm4_18,
    #[value(name = "thm4.20")]
    Thm4_20,
    #[value(name = "thm4.25")]
    Thm4_25,
    #[value(name = "thm4.26")]
    Thm4_26,
    #[value(name = "thm5.7")]
    Thm5_7,
    #[value(name = "thm5.8")]
    Thm5_8,
    #[value(name = "cor5.9")]
    Cor5_9,
    #[value(name = "thm3.3")]
    Thm3_3,
    Host,
}

impl Via {
    /// Group decided by the procedure, `None` for the oracle.
    fn group(self) -> Option<Group> {
        match self {
            Via::Oracle => None,
            Via::Thm5_7 | Via::Thm5_8 | Via::Cor5_9 => Some(Group::SA),
            _ => Some(Group::SE),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// q[i] = g p[i]
    Index,
    /// any cyclic shift of the second mesh (closed meshes)
    Cyclic,
    /// cyclic shifts of the second mesh and of its reversal
    Reversal,
}

impl From<ModeArg> for MatchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Index => MatchMode::IndexAligned,
            ModeArg::Cyclic => MatchMode::Cyclic,
            ModeArg::Reversal => MatchMode::CyclicWithReversal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EndpointArg {
    /// |signed angle| >= pi/2 at index 3 of both meshes
    Obtuse,
    /// equal signed angles at indices 3 and n-4
    EqualEnds,
}

impl From<EndpointArg> for EndpointCondition {
    fn from(e: EndpointArg) -> Self {
        match e {
            EndpointArg::Obtuse => EndpointCondition::ObtuseAt4,
            EndpointArg::EqualEnds => EndpointCondition::EqualEndAngles,
        }
    }
}

#[derive(Args)]
struct SignatureArgs {
    /// Mesh file: CSV "x,y" lines or JSON {"points", "closed", "label"}
    input: PathBuf,
    #[arg(long, value_enum, default_value = "se")]
    group: SigGroup,
    /// Scheme 1-4 (se) or 5-8 (sa)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
    scheme: u8,
    #[arg(long, default_value_t = 1)]
    m1: usize,
    #[arg(long, default_value_t = 1)]
    m2: usize,
    /// Treat CSV input as a closed mesh
    #[arg(long)]
    closed: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG plot of (kappa, kappa_s)
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Relative tolerance for equal Euclidean spacing (schemes 1, 2)
    #[arg(long, default_value_t = geometry::SPACING_TOL)]
    spacing_tol: f64,
    /// Relative tolerance for equal affine arc lengths (schemes 5, 6)
    #[arg(long, default_value_t = affine::AFFINE_SPACING_TOL)]
    affine_spacing_tol: f64,
}

#[derive(Args)]
struct CongruentArgs {
    input1: PathBuf,
    input2: PathBuf,
    #[arg(long, value_enum, default_value = "se")]
    group: GroupArg,
    /// Index correspondence tried by the oracle
    #[arg(long, value_enum, default_value = "index")]
    mode: ModeArg,
    /// Decision procedure
    #[arg(long, value_enum, default_value = "oracle")]
    via: Via,
    /// Treat CSV inputs as closed meshes
    #[arg(long)]
    closed: bool,
    /// End condition for thm4.26 on open meshes
    #[arg(long, value_enum)]
    endpoint: Option<EndpointArg>,
    /// Alignment tolerance, relative to mesh diameter
    #[arg(long, default_value_t = congruence::CONGRUENCE_TOL)]
    tol: f64,
    /// Relative tolerance for signatures, curvatures and lengths
    #[arg(long, default_value_t = signature::SIGNATURE_TOL)]
    sig_tol: f64,
    /// Half-width of the right-angle band in radians
    #[arg(long, default_value_t = geometry::RIGHT_ANGLE_TOL)]
    right_angle_tol: f64,
    #[arg(long, default_value_t = geometry::SPACING_TOL)]
    spacing_tol: f64,
    #[arg(long, default_value_t = affine::AFFINE_SPACING_TOL)]
    affine_spacing_tol: f64,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, value_parser = parse_counterexample)]
    id: CounterexampleId,
    #[arg(long, default_value = ".")]
    outdir: PathBuf,
    /// Alignment tolerance used for the oracle verdicts in the report
    #[arg(long, default_value_t = congruence::CONGRUENCE_TOL)]
    tol: f64,
}

fn parse_counterexample(s: &str) -> Result<CounterexampleId, String> {
    s.parse()
}

#[derive(Args)]
#[command(group(ArgGroup::new("query").required(true).args(["m", "count", "candidates"])))]
struct HostArgs {
    /// Cycle length
    #[arg(long)]
    n: usize,
    /// Step size to traverse with
    #[arg(long)]
    m: Option<usize>,
    /// Print phi(n) and the complete step sizes
    #[arg(long)]
    count: bool,
    /// Comma-separated step sizes to filter, e.g. 3,4,5 or 2,3,5
    #[arg(long, value_delimiter = ',')]
    candidates: Option<Vec<usize>>,
}

#[derive(Args)]
struct SelfcheckArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

fn color() -> bool {
    std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

fn paint(text: &str, code: &str) -> String {
    if color() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn library(code: i32, e: Error) -> Failure {
    Failure::new(code, e.to_string())
}

/// Index ranges of an open mesh with no full stencil.
fn omitted(n: usize, sig: &Signature) -> Vec<String> {
    let kept = sig.indices();
    let (Some(&first), Some(&last)) = (kept.first(), kept.last()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if first > 0 {
        out.push(format!("0..={}", first - 1));
    }
    if last + 1 < n {
        out.push(format!("{}..={}", last + 1, n - 1));
    }
    out
}

fn cmd_signature(args: SignatureArgs) -> Result<(), Failure> {
    let scheme = Scheme::from_number(args.scheme).expect("range checked by clap");
    let mesh = io::read_mesh(&args.input, args.closed)?;
    let group = match (args.group, scheme.is_euclidean()) {
        (SigGroup::Se, true) => "se",
        (SigGroup::Sa, false) => "sa",
        (SigGroup::Se, false) => {
            return Err(Failure::new(5, format!("{scheme} is an sa scheme, use --group sa")))
        }
        (SigGroup::Sa, true) => {
            return Err(Failure::new(5, format!("{scheme} is an se scheme, use --group se")))
        }
    };
    let spec = NeighborhoodSpec::new(args.m1, args.m2).map_err(|e| library(2, e))?;
    let (sig, tolerance) = if scheme.is_euclidean() {
        let sig = se_signature_with(&mesh, scheme, spec, args.spacing_tol);
        (sig, format!("spacing {:e}", args.spacing_tol))
    } else {
        if spec != NeighborhoodSpec::ONE {
            return Err(Failure::parse("--m1/--m2 apply to se schemes only"));
        }
        let spacing = AffineSpacing::Affine(args.affine_spacing_tol);
        let sig = sa_signature_with(&mesh, scheme, spacing);
        (sig, format!("affine spacing {:e}", args.affine_spacing_tol))
    };
    let sig = sig.map_err(|e| library(3, e))?;

    let gaps = omitted(mesh.len(), &sig);
    if !gaps.is_empty() {
        eprintln!(
            "warning: indices {} have no full {scheme} stencil and are omitted",
            gaps.join(" and ")
        );
    }
    if sig.extrapolated {
        eprintln!("warning: arc lengths were evaluated outside the fitted five-point neighborhood");
    }

    let provenance = [
        format!(
            "meshsig signature: group {group}, scheme {scheme}, neighborhood ({}, {})",
            sig.spec.m1, sig.spec.m2
        ),
        format!("tolerance: {tolerance}"),
        "indices are 0-based".to_string(),
    ];
    let table = io::signature_csv(&sig, &provenance);
    match &args.out {
        Some(path) => io::write(path, &table)?,
        None => print!("{table}"),
    }
    if let Some(path) = &args.plot {
        io::write(path, &plot::signature_svg(&sig, &format!("{scheme} signature")))?;
    }
    Ok(())
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Congruent(_) => 0,
        Verdict::NotCongruent { .. } => 1,
        Verdict::HypothesesNotMet(_) => 4,
    }
}

fn print_verdict(v: &Verdict) {
    let colored = match v {
        Verdict::Congruent(_) => paint(v.name(), "32"),
        Verdict::NotCongruent { .. } => paint(v.name(), "31"),
        Verdict::HypothesesNotMet(_) => paint(v.name(), "33"),
    };
    println!("verdict: {colored}");
    match v {
        Verdict::Congruent(w) => {
            let m = &w.motion.linear;
            println!("group: {}", w.motion.group);
            println!("matrix: [[{:.12}, {:.12}], [{:.12}, {:.12}]]", m[0][0], m[0][1], m[1][0], m[1][1]);
            println!(
                "translation: [{:.12}, {:.12}]",
                w.motion.translation[0], w.motion.translation[1]
            );
            println!("shift: {}  reversed: {}", w.shift, w.reversed);
            println!("max deviation: {:.3e}", w.max_deviation);
        }
        Verdict::NotCongruent {
            reason,
            oracle_disagreement,
        } => {
            println!("reason: {reason}");
            if *oracle_disagreement {
                println!("note: the procedure's hypotheses held but the oracle found no motion");
            }
        }
        Verdict::HypothesesNotMet(reason) => println!("reason: {reason}"),
    }
}

fn cmd_congruent(args: CongruentArgs) -> Result<i32, Failure> {
    let group = Group::from(args.group);
    if let Some(decided) = args.via.group() {
        if decided != group {
            return Err(Failure::new(
                5,
                format!("this procedure decides {decided} congruence, not {group}"),
            ));
        }
    }
    let m1 = io::read_mesh(&args.input1, args.closed)?;
    let m2 = io::read_mesh(&args.input2, args.closed)?;
    let opts = DecideOptions {
        tol: Tolerances {
            congruence: args.tol,
            signature: args.sig_tol,
            right_angle: args.right_angle_tol,
            spacing: args.spacing_tol,
            affine_spacing: args.affine_spacing_tol,
        },
        fine: args.via == Via::Thm4_15,
        curvature_only: args.via == Via::Thm4_20,
        endpoint: args.endpoint.map(Into::into),
        ..DecideOptions::default()
    };
    let run = |m1: &Mesh, m2: &Mesh| match args.via {
        Via::Oracle => congruence::align(m1, m2, group, args.mode.into(), args.tol),
        Via::Thm4_9 => decide_eq1(m1, m2, &opts),
        Via::Thm4_14 | Via::Thm4_15 => decide_eq2_angle_type(m1, m2, &opts),
        Via::Thm4_18 | Via::Thm4_20 => decide_eq2_signed(m1, m2, &opts),
        Via::Thm4_25 => decide_eq3(m1, m2, &opts),
        Via::Thm4_26 => decide_eq4(m1, m2, &opts),
        Via::Thm5_7 => decide_affine(m1, m2, AffineVariant::Thm57, &opts),
        Via::Thm5_8 => decide_affine(m1, m2, AffineVariant::Thm58, &opts),
        Via::Cor5_9 => decide_affine(m1, m2, AffineVariant::Cor59, &opts),
        Via::Thm3_3 => decide_dist_angle(m1, m2, &opts),
        Via::Host => decide_host(m1, m2, &opts),
    };
    let verdict = match run(&m1, &m2) {
        Ok(v) => v,
        Err(e @ Error::LengthMismatch(..)) => return Err(library(2, e)),
        Err(e) => Verdict::HypothesesNotMet(e.to_string()),
    };
    print_verdict(&verdict);
    Ok(verdict_code(&verdict))
}

fn cmd_counterexample(args: CounterexampleArgs) -> Result<(), Failure> {
    let c = counterexample(args.id).map_err(|e| library(2, e))?;
    std::fs::create_dir_all(&args.outdir)
        .map_err(|e| Failure::parse(format!("{}: {e}", args.outdir.display())))?;
    let name = args.id.name();
    let report = c.report(args.tol).map_err(|e| library(2, e))?;
    let (pa, pb) = (
        args.outdir.join(format!("{name}a.csv")),
        args.outdir.join(format!("{name}b.csv")),
    );
    io::write(&pa, &io::mesh_csv(&c.a))?;
    io::write(&pb, &io::mesh_csv(&c.b))?;
    io::write(&args.outdir.join(format!("{name}_report.txt")), &report)?;
    print!("{report}");
    println!("wrote {} and {}", pa.display(), pb.display());
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_host(args: HostArgs) -> Result<(), Failure> {
    let n = args.n;
    if let Some(m) = args.m {
        let t = host::traverse(n, m).map_err(|e| library(2, e))?;
        println!("order: {}", join(&t.order));
        if t.complete {
            println!("complete after {} steps", t.steps());
        } else {
            println!(
                "incomplete after {} steps ({} of {n} points visited)",
                t.steps(),
                t.steps()
            );
        }
    } else if args.count {
        println!("phi({n}) = {}", host::phi(n as u64));
        println!("complete steps: {}", join(&host::valid_steps(n)));
    } else if let Some(options) = &args.candidates {
        let ok = host::candidates(n, options);
        if ok.is_empty() {
            println!("n = {n}: no candidate among {} is coprime to n", join(options));
        } else {
            println!("n = {n}: complete candidates {}", join(&ok));
        }
    }
    Ok(())
}

fn cmd_selfcheck(args: SelfcheckArgs) -> i32 {
    let report = audit::run(args.seed, args.trials);
    for s in &report.suites {
        let mark = if s.failed == 0 {
            paint("ok  ", "32")
        } else {
            paint("FAIL", "31")
        };
        println!("{mark} {s}");
    }
    println!(
        "selfcheck seed {} trials {}: {} passed, {} failures",
        args.seed,
        args.trials,
        report.passes(),
        report.failures()
    );
    i32::from(report.failures() > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Signature(a) => cmd_signature(a).map(|()| 0),
        Command::Congruent(a) => cmd_congruent(a),
        Command::Counterexample(a) => cmd_counterexample(a).map(|()| 0),
        Command::Host(a) => cmd_host(a).map(|()| 0),
        Command::Selfcheck(a) => Ok(cmd_selfcheck(a)),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
