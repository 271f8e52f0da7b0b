//! Subcommands. Each one reads its inputs, calls a single library operation
//! and returns the artifact text plus a one-line summary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use flatchain_core::coeffgroup::{dyadic_length_profile, Alpha, GroupKind};
use flatchain_core::experiments::{
    ball_growth_check, build_nonrectifiable_chain, classification_report, dyadic_path_samples, slice_statistics,
    BallGrowthInstance, ClassificationWitness, DiffuseLevel,
};
use flatchain_core::flatnorm::{flat_bracket, flat_distance, FlatBracket};
use flatchain_core::numeric::{distance, format_rational, int, parse_rational};
use flatchain_core::sizefunc::{flat_size, phi_mass, WeightFunction};
use flatchain_core::slicing::{deformation_sample, slice_by_plane, slice_fiber};
use flatchain_core::zerochain::{canonical_representation, chain_to_measure, cone_flat_bound, measure_to_chain_dyadic};
use flatchain_core::{Chain, CoordinateProjection, GMeasure, GridSpec, Group, Point, Rational, ZeroChain};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::io::{self, ChainFile};
use crate::report::{Cell, Format, Table};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "flatchain", version, about = "Polyhedral flat chains over normed coefficient groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input file (chain, 0-chain, measure or sampled path JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Artifact destination; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true)]
    pub level: Option<u32>,
    /// Grid spacing, a rational such as `1/4`.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    /// Grid offset, comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub offset: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Group kind, e.g. `Reals` or `RealsAlphaNorm`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Point for `cone-bound` and `ball-growth`, comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub vertex: Option<String>,
    /// Plane JSON for `slice`.
    #[arg(long, global = true)]
    pub plane: Option<PathBuf>,
    /// Coordinate axes of a projection, e.g. `0,2`.
    #[arg(long, global = true)]
    pub axes: Option<String>,
    /// Fiber parameter for `slice --axes`, comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Weight JSON or a builtin name (`flat-size`, `group-norm`).
    #[arg(long, global = true)]
    pub weight: Option<String>,
    /// Second chain for `flatnorm`: bracket `F(input − against)`.
    #[arg(long, global = true)]
    pub against: Option<PathBuf>,
    /// Where `flatnorm` and `cone-bound` write their witness chain.
    #[arg(long, global = true)]
    pub witness: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Mass of a chain, 0-chain or measure.
    Mass,
    /// Boundary of a k-chain, k ≥ 1.
    Boundary,
    /// Augmentation of a 0-chain.
    Chi,
    /// Canonical form; for 0-chains, atoms by nonincreasing norm.
    Canonical,
    /// Cone flat bound of a 0-chain from `--vertex` (default: centroid).
    ConeBound,
    /// Slice by `--plane`, or by the fiber of `--axes` over `--at`.
    Slice,
    /// Random coordinate fibers: atom counts and norms.
    SliceStats,
    /// Grid deformation with spacing `--eps` and `--offset` (or a seeded one).
    Deform,
    /// Certified flat-norm bracket.
    Flatnorm,
    /// Dyadic chains and connectors of a measure.
    MeasureBuild,
    /// Measure to chains and back, level by level.
    MeasureRoundtrip,
    /// Flat size.
    Size,
    /// Weighted area for `--weight`.
    PhiMass,
    /// Length lower bound of a sampled path, or the dyadic profile of t ↦ t.
    PathLength,
    /// Rectifiability verdicts with witnesses.
    Classify,
    /// Ball growth inequality at seeded random radii.
    BallGrowth,
    /// Dyadic chains of the path t ↦ t in the reals.
    NonrectDemo,
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub artifact: String,
    pub summary: String,
    pub warnings: Vec<String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_point(text: &str, flag: &str) -> Result<Point, CliError> {
    text.split(',')
        .map(|c| parse_rational(c).map_err(|_| usage(format!("--{flag}: {c:?} is not a rational"))))
        .collect()
}

fn point_text(p: &[Rational]) -> String {
    p.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

fn element_text(g: &flatchain_core::GroupElement) -> String {
    format_rational(g.value())
}

struct Context<'a> {
    cli: &'a Cli,
    warnings: Vec<String>,
}

impl Context<'_> {
    fn input(&mut self) -> Result<ChainFile, CliError> {
        let path = self.cli.input.as_ref().ok_or_else(|| usage("--input is required"))?;
        let parsed = io::parse_chain_file(path)?;
        self.warnings.extend(parsed.warnings.into_iter().map(|w| format!("{}: {w}", path.display())));
        Ok(parsed.value)
    }

    fn chain(&mut self) -> Result<Chain, CliError> {
        match self.input()? {
            ChainFile::Chain(a) => Ok(a),
            ChainFile::ZeroChain(z) => Ok(z.to_chain()),
            ChainFile::Measure(_) => Err(usage("expected a chain, found a measure")),
        }
    }

    fn zero_chain(&mut self) -> Result<ZeroChain, CliError> {
        match self.input()? {
            ChainFile::ZeroChain(z) => Ok(z),
            ChainFile::Chain(a) => Err(usage(format!("expected a 0-chain, found a {}-chain", a.dim()))),
            ChainFile::Measure(_) => Err(usage("expected a 0-chain, found a measure")),
        }
    }

    fn measure(&mut self) -> Result<GMeasure, CliError> {
        match self.input()? {
            ChainFile::Measure(nu) => Ok(nu),
            _ => Err(usage("expected a measure file (with \"cubes\")")),
        }
    }

    fn seed(&self) -> Result<u64, CliError> {
        self.cli.seed.ok_or_else(|| usage("--seed is required for randomized commands"))
    }

    fn table(&self, table: &Table) -> String {
        table.render(self.cli.format)
    }

    fn chain_artifact(&self, a: &Chain) -> String {
        match self.cli.format {
            Format::Json => io::to_text(&io::chain_to_json(a)),
            Format::Csv => {
                let mut t = Table::new(vec!["term", "coeff", "vertices"]);
                for (i, (g, s)) in a.terms().iter().enumerate() {
                    let vs = s.vertices().iter().map(|p| point_text(p)).collect::<Vec<_>>().join("; ");
                    t.push(vec![i.into(), element_text(g).into(), vs.into()]);
                }
                t.to_csv()
            }
        }
    }
}

fn write_witness(path: Option<&Path>, chain: &Chain) -> Result<(), CliError> {
    match path {
        Some(p) => crate::report::write_text(p, &io::to_text(&io::chain_to_json(chain))),
        None => Ok(()),
    }
}

fn diffuse_table(levels: &[DiffuseLevel]) -> Table {
    let mut t = Table::new(vec!["level", "atoms", "max_atom_norm", "mass", "cauchy_bound", "connector_ok"]);
    for lv in levels {
        t.push(vec![
            lv.level.into(),
            lv.atoms.into(),
            lv.max_atom_norm.into(),
            lv.mass.into(),
            lv.cauchy_bound.into(),
            lv.connector_ok.into(),
        ]);
    }
    t
}

fn bracket_artifact(cx: &Context, b: &FlatBracket) -> String {
    match cx.cli.format {
        Format::Json => io::to_text(&json!({
            "lower": Cell::Real(b.lower).json(),
            "upper": Cell::Real(b.upper).json(),
            "witness_mass": Cell::Real(b.witness_mass()).json(),
            "strategy": b.strategy,
        })),
        Format::Csv => {
            let mut t = Table::new(vec!["lower", "upper", "witness_mass", "strategy"]);
            t.push(vec![b.lower.into(), b.upper.into(), b.witness_mass().into(), b.strategy.into()]);
            t.to_csv()
        }
    }
}

fn witness_text(w: &ClassificationWitness) -> String {
    use crate::report::format_real as f;
    match w {
        ClassificationWitness::FinitePath { length, level, max_atom_norm } => {
            format!("path length {}; level {level} max atom norm {}", f(*length), f(*max_atom_norm))
        }
        ClassificationWitness::LengthGrowth { levels, slope, expected } => {
            format!("dyadic slope {} after {levels} levels (1 - alpha = {})", f(*slope), f(*expected))
        }
        ClassificationWitness::NormGap { min_nonzero_norm } => format!("min nonzero norm {}", f(*min_nonzero_norm)),
        ClassificationWitness::NormValues { values } => {
            format!("norms of p^k: {}", values.iter().map(|v| f(*v)).collect::<Vec<_>>().join(" "))
        }
        ClassificationWitness::UnitSeparation => "distinct elements at distance >= 1".to_string(),
    }
}

fn cli_alpha(cli: &Cli) -> Result<Option<Alpha>, CliError> {
    cli.alpha.as_deref().map(|a| Alpha::parse(a).map_err(|e| usage(format!("--alpha: {e}")))).transpose()
}

fn random_offset(rng: &mut ChaCha8Rng, n: usize, eps: &Rational) -> Point {
    let scale = Rational::from_integer(BigInt::from(1u64 << 32));
    let half = Rational::new(1.into(), 2.into());
    (0..n)
        .map(|_| {
            let u = (Rational::from_integer(BigInt::from(rng.gen::<u32>())) + &half) / &scale;
            eps * (u - &half)
        })
        .collect()
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut cx = Context { cli, warnings: Vec::new() };
    let (artifact, summary) = dispatch(&mut cx)?;
    Ok(Outcome { artifact, summary, warnings: cx.warnings })
}

fn dispatch(cx: &mut Context) -> Result<(String, String), CliError> {
    let cli = cx.cli;
    match cli.command {
        Command::Mass => {
            let (mass, terms, dim, ambient) = match cx.input()? {
                ChainFile::Chain(a) => (a.mass(), a.len(), Cell::from(a.dim()), a.ambient()),
                ChainFile::ZeroChain(z) => (z.mass(), z.len(), Cell::from(0usize), z.ambient()),
                ChainFile::Measure(nu) => (nu.total_variation(), nu.cubes().len() + nu.atoms().len(), Cell::Missing, nu.ambient()),
            };
            let mut t = Table::new(vec!["mass", "terms", "dim", "ambient"]);
            t.push(vec![mass.into(), terms.into(), dim, ambient.into()]);
            Ok((cx.table(&t), format!("mass {}", crate::report::format_real(mass))))
        }
        Command::Boundary => {
            let a = cx.chain()?;
            if a.dim() == 0 {
                return Err(usage("the boundary of a 0-chain is not defined here"));
            }
            let b = a.boundary()?;
            Ok((cx.chain_artifact(&b), format!("boundary: {} terms, mass {}", b.len(), crate::report::format_real(b.mass()))))
        }
        Command::Chi => {
            let z = cx.zero_chain()?;
            let chi = z.chi();
            let mut t = Table::new(vec!["chi", "norm"]);
            t.push(vec![element_text(&chi).into(), chi.norm().into()]);
            Ok((cx.table(&t), format!("chi = {}", element_text(&chi))))
        }
        Command::Canonical => match cx.input()? {
            ChainFile::ZeroChain(z) => {
                let mut t = Table::new(vec!["rank", "coeff", "norm", "point"]);
                for (i, (g, x)) in canonical_representation(&z).iter().enumerate() {
                    t.push(vec![i.into(), element_text(g).into(), g.norm().into(), point_text(x).into()]);
                }
                Ok((cx.table(&t), format!("{} atoms", z.len())))
            }
            ChainFile::Chain(a) => Ok((cx.chain_artifact(&a), format!("{} terms", a.len()))),
            ChainFile::Measure(nu) => {
                Ok((io::to_text(&io::measure_to_json(&nu)), format!("{} cubes", nu.cubes().len())))
            }
        },
        Command::ConeBound => {
            let z = cx.zero_chain()?;
            let vertex = match &cli.vertex {
                Some(v) => parse_point(v, "vertex")?,
                None => z.centroid().unwrap_or_else(|| vec![int(0); z.ambient()]),
            };
            if vertex.len() != z.ambient() {
                return Err(usage(format!("--vertex needs {} coordinates", z.ambient())));
            }
            let c = cone_flat_bound(&z, &vertex)?;
            write_witness(cli.witness.as_deref(), &c.cone)?;
            let mut t = Table::new(vec!["bound", "chi", "mass", "vertex"]);
            t.push(vec![c.bound.into(), element_text(&c.chi).into(), z.mass().into(), point_text(&vertex).into()]);
            Ok((cx.table(&t), format!("cone bound {}", crate::report::format_real(c.bound))))
        }
        Command::Slice => {
            let a = cx.chain()?;
            let s = match (&cli.plane, &cli.axes) {
                (Some(p), None) => slice_by_plane(&a, &io::plane_from_json(&io::read_json(p)?)?)?,
                (None, Some(axes)) => {
                    let axes = axes
                        .split(',')
                        .map(|i| i.trim().parse().map_err(|_| usage(format!("--axes: bad index {i:?}"))))
                        .collect::<Result<Vec<usize>, _>>()?;
                    let at = parse_point(cli.at.as_deref().ok_or_else(|| usage("--axes needs --at"))?, "at")?;
                    slice_fiber(&a, &CoordinateProjection::new(a.ambient(), axes)?, &at)?
                }
                _ => return Err(usage("slice needs exactly one of --plane or --axes")),
            };
            Ok((cx.chain_artifact(&s), format!("slice: {} terms, mass {}", s.len(), crate::report::format_real(s.mass()))))
        }
        Command::SliceStats => {
            let a = cx.chain()?;
            let seed = cx.seed()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let stats = slice_statistics(&a, cli.samples.unwrap_or(100), &mut rng)?;
            let mut t = Table::new(vec!["axes", "x", "atoms", "norm_sum", "max_norm"]).with_seed(Some(seed));
            for r in &stats.records {
                let axes = r.axes.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
                t.push(vec![axes.into(), point_text(&r.x).into(), r.atoms.into(), r.norm_sum.into(), r.max_norm.into()]);
            }
            let summary = format!(
                "{} fibers, all atomic: {}, max atoms {}, resamples {}",
                stats.records.len(),
                stats.all_atomic,
                stats.max_atoms,
                stats.resamples
            );
            Ok((cx.table(&t), summary))
        }
        Command::Deform => {
            let a = cx.chain()?;
            let eps = parse_rational(cli.eps.as_deref().ok_or_else(|| usage("--eps is required"))?)
                .map_err(|_| usage("--eps must be a rational"))?;
            let offset = match (&cli.offset, cli.seed) {
                (Some(z), _) => parse_point(z, "offset")?,
                (None, Some(seed)) => random_offset(&mut ChaCha8Rng::seed_from_u64(seed), a.ambient(), &eps),
                (None, None) => return Err(usage("deform needs --offset or --seed")),
            };
            let grid = GridSpec::new(eps, offset.clone())?;
            let d = deformation_sample(&a, &grid)?;
            Ok((cx.chain_artifact(&d), format!("deformed: {} terms, offset {}", d.len(), point_text(&offset))))
        }
        Command::Flatnorm => {
            let a = cx.chain()?;
            let b = match &cli.against {
                Some(p) => {
                    let parsed = io::parse_chain_file(p)?;
                    cx.warnings.extend(parsed.warnings);
                    Some(match parsed.value {
                        ChainFile::Chain(c) => c,
                        ChainFile::ZeroChain(z) => z.to_chain(),
                        ChainFile::Measure(_) => return Err(usage("--against must be a chain")),
                    })
                }
                None => None,
            };
            let bracket = match &b {
                Some(b) => flat_distance(&a, b)?,
                None => flat_bracket(&a)?,
            };
            if let Some(w) = &bracket.witness {
                write_witness(cli.witness.as_deref(), &w.filling)?;
            }
            let summary = format!(
                "flat norm in [{}, {}] ({})",
                crate::report::format_real(bracket.lower),
                crate::report::format_real(bracket.upper),
                bracket.strategy
            );
            Ok((bracket_artifact(cx, &bracket), summary))
        }
        Command::MeasureBuild => {
            let nu = cx.measure()?;
            let n_max = cli.level.unwrap_or(nu.level());
            let levels = measure_to_chain_dyadic(&nu, n_max)?;
            let mut t = Table::new(vec!["level", "atoms", "mass", "max_atom_norm", "cauchy_bound"]);
            for lv in &levels {
                let cauchy = lv.connector.as_ref().map(|_| lv.cauchy_bound);
                t.push(vec![
                    lv.level.into(),
                    lv.chain.len().into(),
                    lv.chain.mass().into(),
                    lv.chain.max_norm().into(),
                    cauchy.into(),
                ]);
            }
            Ok((cx.table(&t), format!("{} levels", levels.len())))
        }
        Command::MeasureRoundtrip => {
            let nu = cx.measure()?;
            let n_max = cli.level.unwrap_or(nu.level());
            let levels = measure_to_chain_dyadic(&nu, n_max)?;
            let mut t = Table::new(vec!["level", "cubes", "matches"]);
            let mut failed = Vec::new();
            for lv in &levels {
                let expected = nu.aggregate(lv.level)?;
                let back = chain_to_measure(&lv.chain, lv.level)?;
                let ok = back.cubes() == &expected;
                if !ok {
                    failed.push(lv.level);
                }
                t.push(vec![lv.level.into(), expected.len().into(), ok.into()]);
            }
            if !failed.is_empty() {
                return Err(CliError::Violation(format!("roundtrip differs at levels {failed:?}")));
            }
            Ok((cx.table(&t), format!("roundtrip exact at levels 0..={n_max}")))
        }
        Command::Size => {
            let a = cx.chain()?;
            let size = flat_size(&a);
            let mut t = Table::new(vec!["flat_size", "terms"]);
            t.push(vec![size.into(), a.len().into()]);
            Ok((cx.table(&t), format!("flat size {}", crate::report::format_real(size))))
        }
        Command::PhiMass => {
            let a = cx.chain()?;
            let phi = match cli.weight.as_deref() {
                None | Some("group-norm") => WeightFunction::GroupNorm,
                Some("flat-size") => WeightFunction::FlatSize,
                Some(path) => io::weight_from_json(a.group(), &io::read_json(Path::new(path))?)?,
            };
            let value = phi_mass(&a, &phi)?;
            let mut t = Table::new(vec!["phi_mass", "weight"]);
            t.push(vec![value.into(), phi.name().into()]);
            Ok((cx.table(&t), format!("{} mass {}", phi.name(), crate::report::format_real(value))))
        }
        Command::PathLength => match &cli.input {
            Some(path) => {
                let samples = io::path_from_json(&io::read_json(path)?)?;
                let length = samples.length_lower_bound();
                let mut t = Table::new(vec!["samples", "length"]);
                t.push(vec![samples.len().into(), length.into()]);
                Ok((cx.table(&t), format!("length >= {}", crate::report::format_real(length))))
            }
            None => {
                let kind = GroupKind::from_name(cli.group.as_deref().unwrap_or("Reals"))
                    .map_err(|e| usage(format!("--group: {e}")))?;
                let group = Group::new(kind, cli.p, cli_alpha(cli)?).map_err(|e| usage(e.to_string()))?;
                let levels = cli.level.unwrap_or(10);
                let gamma = |t: &Rational| group.element(t.clone()).expect("t is rational");
                if !group.divisible_by(1 << levels.min(62)) {
                    return Err(usage(format!("{group} does not contain the dyadic points of [0, 1]")));
                }
                let profile = dyadic_length_profile(group, gamma, &int(0), &int(1), levels)?;
                let mut t = Table::new(vec!["level", "length", "slope"]);
                for ((n, len), slope) in profile.lengths.iter().zip(&profile.slopes) {
                    t.push(vec![(*n).into(), (*len).into(), (*slope).into()]);
                }
                let summary = format!(
                    "{group}: dyadic slope {}",
                    profile.final_slope().map_or("undefined".to_string(), crate::report::format_real)
                );
                Ok((cx.table(&t), summary))
            }
        },
        Command::Classify => {
            let alpha = cli_alpha(cli)?.unwrap_or(Alpha::new(1, 2).expect("1/2"));
            let p = cli.p.unwrap_or(3);
            Group::new(GroupKind::IntegersModP, Some(p), None).map_err(|e| usage(format!("--p: {e}")))?;
            let rows = classification_report(p, alpha, cli.level.unwrap_or(10))?;
            let mut t = Table::new(vec!["group", "weight", "rectifiable", "rationale", "witness"]);
            for r in &rows {
                t.push(vec![
                    r.group.to_string().into(),
                    r.weight.into(),
                    r.rectifiable.into(),
                    r.rationale.into(),
                    witness_text(&r.witness).into(),
                ]);
            }
            let flags = rows.iter().map(|r| format!("{}:{}", r.group, if r.rectifiable { "T" } else { "F" }));
            Ok((cx.table(&t), flags.collect::<Vec<_>>().join(" ")))
        }
        Command::BallGrowth => {
            let t = cx.chain()?;
            let seed = cx.seed()?;
            let a = match &cli.vertex {
                Some(v) => parse_point(v, "vertex")?,
                None => t.support_points().into_iter().next().ok_or_else(|| usage("the chain is empty"))?,
            };
            if a.len() != t.ambient() {
                return Err(usage(format!("--vertex needs {} coordinates", t.ambient())));
            }
            let reach = t.support_points().iter().map(|x| distance(x, &a)).fold(0.0, f64::max);
            let r_max = if reach > 0.0 { 1.25 * reach } else { 1.0 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut radii: Vec<f64> = (0..cli.samples.unwrap_or(50)).map(|_| rng.gen::<f64>() * r_max).collect();
            radii.sort_by(f64::total_cmp);
            let inst = BallGrowthInstance::new(t, a, radii)?;
            let rows = ball_growth_check(&inst)?;
            let mut table = Table::new(vec![
                "radius",
                "mass_in_ball",
                "boundary_mass_in_ball",
                "lower_bound",
                "chi_integral",
                "margin",
            ])
            .with_seed(Some(seed));
            for r in &rows {
                table.push(vec![
                    r.radius.into(),
                    r.mass_in_ball.into(),
                    r.boundary_mass_in_ball.into(),
                    r.lower_bound.into(),
                    r.chi_integral.into(),
                    r.margin.into(),
                ]);
            }
            let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
            if worst < -1e-12 {
                return Err(CliError::Violation(format!("ball growth fails: margin {worst}")));
            }
            Ok((cx.table(&table), format!("{} radii, min margin {}", rows.len(), crate::report::format_real(worst))))
        }
        Command::NonrectDemo => {
            let n = cli.level.unwrap_or(12);
            let r = Group::Reals;
            let path = dyadic_path_samples(r, |t| r.element(t.clone()).expect("rational"), &int(0), &int(1), n)?;
            let report = build_nonrectifiable_chain(&path, n)?;
            let summary = format!(
                "path length {}, finest max atom norm {}",
                crate::report::format_real(report.path_length),
                crate::report::format_real(report.levels.last().map_or(0.0, |l| l.max_atom_norm))
            );
            Ok((cx.table(&diffuse_table(&report.levels)), summary))
        }
    }
}
