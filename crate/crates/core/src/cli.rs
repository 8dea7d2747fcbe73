//! Command-line front end: subcommands, point-set files and JSON reports.
//!
//! Point-set files are JSON objects
//! `{"dimension": 2, "points": [["1/2", "0"], ...], "labels": [0, 1, ...]}`
//! where `labels` is optional and groups points into classes or families.
//! Every report carries `schema_version` and an echo of the invocation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructions::{
    antipodal_triple_3d, cube_arc_points, perturb_nonparallel, verify_cube_arc, AntipodalFamily,
    CubeArcConfig, UnitBallCertificate, DEFAULT_HALVINGS,
};
use crate::error::{Error, Result};
use crate::extremal::{compute_e, compute_e_circ, compute_m, DEFAULT_CAP};
use crate::forbidden::{
    conjecture_search, halman5_check, random_independent_five, refute_k22222, FivePairConfig,
};
use crate::geom::{ExactPoint, PointSet};
use crate::norms::{
    covering_extract, distance_census, theorem3_census, verify_strict_antipodality,
    AntipodalityVerdict, Norm,
};
use crate::rational::{parse_rational, Rational};
use crate::reductions::{claim1_reduce, claim2_reduce, claim3_reduce, equivalence_report};

pub const SCHEMA_VERSION: u32 = 1;

/// Default search budget for `conjecture-search`.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Computed, every certificate verified.
    Verified = 0,
    /// A certified negative result (failed verification, counterexample).
    Negative = 1,
    Usage = 2,
    Inconsistency = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Verified
        } else {
            Self::Negative
        }
    }
}

impl From<&Error> for Outcome {
    fn from(e: &Error) -> Self {
        match e {
            Error::CertificationFailed(_) | Error::BudgetExhausted(_) => Outcome::Negative,
            Error::Inconsistency(_) => Outcome::Inconsistency,
            _ => Outcome::Usage,
        }
    }
}

/// A point set on disk, with optional class labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub dimension: usize,
    pub points: Vec<ExactPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

impl PointSetFile {
    pub fn from_set(set: &PointSet, labels: Option<Vec<usize>>) -> Self {
        Self {
            dimension: set.dimension,
            points: set.points.clone(),
            labels,
        }
    }

    pub fn to_set(&self) -> Result<PointSet> {
        PointSet::new(self.dimension, self.points.clone())
    }

    /// Points grouped by label, in increasing label order.
    pub fn classes(&self) -> Result<Vec<PointSet>> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("file needs a labels field".into()))?;
        if labels.len() != self.points.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} points",
                labels.len(),
                self.points.len()
            )));
        }
        let mut groups: BTreeMap<usize, Vec<ExactPoint>> = BTreeMap::new();
        for (l, p) in labels.iter().zip(&self.points) {
            groups.entry(*l).or_default().push(p.clone());
        }
        groups
            .into_values()
            .map(|pts| PointSet::new(self.dimension, pts))
            .collect()
    }

    pub fn from_classes(classes: &[PointSet]) -> Self {
        let dimension = classes.first().map_or(2, |c| c.dimension);
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (i, c) in classes.iter().enumerate() {
            points.extend(c.points.iter().cloned());
            labels.extend(std::iter::repeat_n(i, c.len()));
        }
        Self {
            dimension,
            points,
            labels: Some(labels),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "convind",
    version,
    about = "Exact certificates for convex position, midpoints, and unit distances"
)]
pub struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "CONVIND_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Point-set file.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct TwoSets {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
}

#[derive(Debug, Args)]
pub struct Reduction {
    #[command(flatten)]
    pub sets: TwoSets,
    /// Convexly independent subset of P + Q.
    #[arg(long)]
    pub s: PathBuf,
}

#[derive(Debug, Args)]
pub struct RandomOrFile {
    /// Labeled point-set file; otherwise random instances are generated.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the three cube-edge arcs as a labeled point set.
    ConstructCubearc {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/4", value_parser = rational_arg)]
        delta: Rational,
        /// Point-set output (defaults to the report).
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Certify the 3k² cross midpoints of the cube arcs.
    VerifyCubearc {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/4", value_parser = rational_arg)]
        delta: Rational,
        #[arg(long, default_value_t = DEFAULT_HALVINGS)]
        halvings: u32,
    },
    /// Most pairs with convexly independent midpoints.
    ComputeE {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Largest convexly independent subset of P + Q.
    ComputeM {
        #[command(flatten)]
        sets: TwoSets,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Most pairs with distinct concyclic midpoints (planar).
    ComputeEcirc {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Unit and diameter pairs under the Euclidean norm or a polytope norm.
    Census {
        #[command(flatten)]
        input: Input,
        /// Unit-ball vertex file; Euclidean when absent.
        #[arg(long)]
        ball: Option<PathBuf>,
        /// Append a CSV row (n,U,W,D,diameter,runtime_ms).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check strict antipodality of a labeled family.
    AntipodalVerify {
        #[command(flatten)]
        input: Input,
    },
    /// Build and verify a strictly antipodal triple of m-point arcs in R³.
    AntipodalBuild {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Unit/diameter/nonparallel census of the antipodal triple.
    Theorem3 {
        /// A single m or a range `a..b` (inclusive).
        #[arg(long, default_value = "1..10")]
        m: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pairs of P ∪ Q whose midpoints are S / 2.
    ReduceClaim1(Reduction),
    /// Nonparallel unit pairs from half of S (planar).
    ReduceClaim2(Reduction),
    /// Largest block of C after halving P and Q.
    ReduceClaim3 {
        #[command(flatten)]
        sets: TwoSets,
        /// Convexly independent subset of P + Q.
        #[arg(long)]
        c: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// M(P, Q) with its E and W witnesses.
    Equivalence(TwoSets),
    /// Densest cell of a grid covering with cells of diameter ≤ λ·diam.
    Covering {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        lambda: Rational,
        #[arg(long)]
        ball: Option<PathBuf>,
    },
    /// Certified violations for five classes of two points in R³.
    RefuteK22222(RandomOrFile),
    /// Five independent points have dependent midpoints.
    Halman5(RandomOrFile),
    /// Seeded search for four small classes with independent cross midpoints.
    ConjectureSearch {
        #[arg(long)]
        c: usize,
        #[arg(long, default_value = "1/10", value_parser = rational_arg)]
        epsilon: Rational,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scaling table: cube arcs and the antipodal census for growing sizes.
    Bench {
        #[arg(long, default_value_t = 6)]
        max: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad range {s:?}")))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.trim_start_matches('='))?)),
        None => {
            let v = num(s)?;
            Ok((v, v))
        }
    }
}

fn read_set(path: &Path) -> Result<PointSet> {
    PointSetFile::read(path)?.to_set()
}

fn read_ball(path: Option<&PathBuf>) -> Result<Norm> {
    match path {
        None => Ok(Norm::Euclidean),
        Some(p) => Ok(Norm::Polytope(UnitBallCertificate::new(read_set(p)?)?)),
    }
}

const CSV_HEADER: &str = "n,U,W,D,diameter,runtime_ms";

fn append_csv(path: &Path, rows: &[String]) -> Result<()> {
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if fresh {
        writeln!(f, "{CSV_HEADER}")?;
    }
    for r in rows {
        writeln!(f, "{r}")?;
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Runs one parsed command, returning its result section and outcome.
pub fn execute(cmd: &Command) -> Result<(Value, Outcome)> {
    use Command::*;
    Ok(match cmd {
        ConstructCubearc { k, delta, points } => {
            let arc = cube_arc_points(&CubeArcConfig::new(*k, delta.clone()))?;
            let file = PointSetFile::from_set(&arc.points, Some(arc.arc_of.clone()));
            if let Some(p) = points {
                file.write(p)?;
            }
            (
                json!({ "points": file, "config": arc.config }),
                Outcome::Verified,
            )
        }
        VerifyCubearc { k, delta, halvings } => {
            let v = verify_cube_arc(&CubeArcConfig::new(*k, delta.clone()), *halvings)?;
            let ok = v.verify();
            (
                json!({
                    "k": k,
                    "midpoints": v.midpoint_count(),
                    "expected": 3 * k * k,
                    "delta": v.arc.config.delta.to_string(),
                    "halvings": v.halvings,
                    "verified": ok,
                    "witness": v,
                }),
                Outcome::from_bool(ok),
            )
        }
        ComputeE { input, cap } => {
            let r = compute_e(&read_set(&input.input)?, *cap)?;
            (to_value(&r)?, Outcome::from_bool(r.verify()))
        }
        ComputeM { sets, cap } => {
            let r = compute_m(&read_set(&sets.p)?, &read_set(&sets.q)?, *cap)?;
            (to_value(&r)?, Outcome::from_bool(r.verify()))
        }
        ComputeEcirc { input, cap } => {
            let r = compute_e_circ(&read_set(&input.input)?, *cap)?;
            (to_value(&r)?, Outcome::from_bool(r.verify()))
        }
        Census { input, ball, csv } => {
            let set = read_set(&input.input)?;
            let start = Instant::now();
            let c = distance_census(&set, &read_ball(ball.as_ref())?)?;
            let ms = start.elapsed().as_millis();
            if let Some(path) = csv {
                append_csv(
                    path,
                    &[format!(
                        "{},{},{},{},{},{ms}",
                        set.len(),
                        c.unit_count(),
                        c.nonparallel_count(),
                        c.diameter_count(),
                        c.diameter_value
                    )],
                )?;
            }
            (
                json!({
                    "n": set.len(),
                    "unit": c.unit_count(),
                    "nonparallel": c.nonparallel_count(),
                    "diameter_pairs": c.diameter_count(),
                    "census": c,
                }),
                Outcome::Verified,
            )
        }
        AntipodalVerify { input } => {
            let fam = AntipodalFamily::new(PointSetFile::read(&input.input)?.classes()?)?;
            match verify_strict_antipodality(&fam)? {
                v @ AntipodalityVerdict::Verified(_) => (to_value(&v)?, Outcome::Verified),
                v => (to_value(&v)?, Outcome::Negative),
            }
        }
        AntipodalBuild { m, seed, points } => {
            let fam = perturb_nonparallel(&antipodal_triple_3d(*m)?, *seed)?;
            let ok = fam.is_verified();
            if let Some(p) = points {
                PointSetFile::from_classes(&fam.sets).write(p)?;
            }
            (
                json!({ "m": m, "verified": ok, "family": fam }),
                Outcome::from_bool(ok),
            )
        }
        Theorem3 { m, csv } => {
            let (a, b) = parse_range(m)?;
            let mut rows = Vec::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for m in a.max(1)..=b {
                let start = Instant::now();
                let r = theorem3_census(m)?;
                let ms = start.elapsed().as_millis();
                ok &= r.unit_pairs == 3 * m * m
                    && r.diameter_pairs == 3 * m * m
                    && r.nonparallel_unit_pairs == 3 * m * m
                    && r.family.is_verified();
                rows.push(format!(
                    "{},{},{},{},1,{ms}",
                    r.points, r.unit_pairs, r.nonparallel_unit_pairs, r.diameter_pairs
                ));
                reports.push(json!({
                    "m": r.m,
                    "points": r.points,
                    "unit": r.unit_pairs,
                    "diameter_pairs": r.diameter_pairs,
                    "nonparallel": r.nonparallel_unit_pairs,
                    "witnesses": r.antipodal_witnesses,
                    "ball_vertices": r.ball_vertices,
                    "ratio": r.ratio,
                    "runtime_ms": ms,
                }));
            }
            if let Some(path) = csv {
                append_csv(path, &rows)?;
            }
            (
                json!({ "rows": reports, "verified": ok }),
                Outcome::from_bool(ok),
            )
        }
        ReduceClaim1(r) | ReduceClaim2(r) => {
            let (p, q, s) = (read_set(&r.sets.p)?, read_set(&r.sets.q)?, read_set(&r.s)?);
            let w = if matches!(cmd, ReduceClaim1(_)) {
                claim1_reduce(&p, &q, &s)?
            } else {
                claim2_reduce(&p, &q, &s)?
            };
            let ok = w.verify()?;
            (
                json!({ "input_size": w.input_size(), "output_size": w.output_size(), "bound_holds": w.bound_holds(), "witness": w }),
                Outcome::from_bool(ok),
            )
        }
        ReduceClaim3 { sets, c, seed } => {
            let w = claim3_reduce(
                &read_set(&sets.p)?,
                &read_set(&sets.q)?,
                &read_set(c)?,
                *seed,
            )?;
            let ok = w.verify()?;
            (
                json!({ "input_size": w.input_size(), "output_size": w.output_size(), "bound_holds": w.bound_holds(), "witness": w }),
                Outcome::from_bool(ok),
            )
        }
        Equivalence(sets) => {
            let r = equivalence_report(&read_set(&sets.p)?, &read_set(&sets.q)?)?;
            let ok = r.chain_holds;
            (to_value(&r)?, Outcome::from_bool(ok))
        }
        Covering {
            input,
            lambda,
            ball,
        } => {
            let set = read_set(&input.input)?;
            let r = covering_extract(&set, lambda, &read_ball(ball.as_ref())?)?;
            let ok = r.verify(set.len());
            (to_value(&r)?, Outcome::from_bool(ok))
        }
        RefuteK22222(src) => {
            let configs: Vec<FivePairConfig> = match &src.input {
                Some(p) => vec![FivePairConfig::new(PointSetFile::read(p)?.classes()?)?],
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(src.seed);
                    (0..src.count)
                        .map(|_| FivePairConfig::random(&mut rng))
                        .collect()
                }
            };
            let mut found = 0;
            let mut first = None;
            for cfg in &configs {
                let r = refute_k22222(cfg)?;
                found += usize::from(r.verify());
                first.get_or_insert(r);
            }
            (
                json!({ "configurations": configs.len(), "refuted": found, "first": first }),
                Outcome::from_bool(found == configs.len()),
            )
        }
        Halman5(src) => {
            let tuples: Vec<Vec<ExactPoint>> = match &src.input {
                Some(p) => vec![read_set(p)?.points],
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(src.seed);
                    (0..src.count)
                        .map(|_| random_independent_five(&mut rng))
                        .collect()
                }
            };
            let mut held = 0;
            let mut results = Vec::new();
            for t in &tuples {
                let r = halman5_check(t)?;
                held += usize::from(r.holds());
                if results.is_empty() {
                    results.push(r);
                }
            }
            (
                json!({ "tuples": tuples.len(), "held": held, "first": results.first() }),
                Outcome::from_bool(held == tuples.len()),
            )
        }
        ConjectureSearch {
            c,
            epsilon,
            budget,
            seed,
        } => {
            let r = conjecture_search(*c, epsilon, *budget, *seed)?;
            // a completed search is a normal outcome whether or not it found anything
            (to_value(&r)?, Outcome::Verified)
        }
        Bench { max, csv } => {
            let mut rows = Vec::new();
            let mut table = Vec::new();
            let mut ok = true;
            for k in 1..=*max {
                let start = Instant::now();
                let v = verify_cube_arc(&CubeArcConfig::with_default_delta(k), DEFAULT_HALVINGS)?;
                let cube_ms = start.elapsed().as_millis();
                let start = Instant::now();
                let r = theorem3_census(k)?;
                let ms = start.elapsed().as_millis();
                ok &= v.verify() && r.unit_pairs == 3 * k * k;
                rows.push(format!(
                    "{},{},{},{},1,{ms}",
                    r.points, r.unit_pairs, r.nonparallel_unit_pairs, r.diameter_pairs
                ));
                table.push(json!({
                    "size": k,
                    "cubearc_midpoints": v.midpoint_count(),
                    "cubearc_ms": cube_ms,
                    "theorem3_unit": r.unit_pairs,
                    "theorem3_ms": ms,
                }));
            }
            if let Some(path) = csv {
                append_csv(path, &rows)?;
            }
            (json!({ "rows": table }), Outcome::from_bool(ok))
        }
    })
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let parsed = Cli::command().try_get_matches_from(&argv).and_then(|m| {
        Ok((
            m.subcommand_name().unwrap_or_default().to_string(),
            Cli::from_arg_matches(&m)?,
        ))
    });
    let (name, cli) = match parsed {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => Outcome::Usage.code(),
            };
        }
    };
    if cli.jobs > 0 {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let manifest = json!({
        "command": name,
        "argv": argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "output": cli.out.as_ref().map(|p| p.display().to_string()),
    });
    let (report, outcome) = match execute(&cli.command) {
        Ok((result, outcome)) => (
            json!({
                "schema_version": SCHEMA_VERSION,
                "manifest": manifest,
                "outcome": outcome.code(),
                "result": result,
            }),
            outcome,
        ),
        Err(e) => {
            let outcome = Outcome::from(&e);
            eprintln!("convind: {e}");
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "manifest": manifest,
                    "outcome": outcome.code(),
                    "error": e.to_string(),
                }),
                outcome,
            )
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let written = match &cli.out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(Error::from),
    };
    if let Err(e) = written {
        eprintln!("convind: {e}");
        return Outcome::Usage.code();
    }
    outcome.code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert_eq!(parse_range("1..10").unwrap(), (1, 10));
        assert_eq!(parse_range("2..=3").unwrap(), (2, 3));
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn labels_group_classes() {
        let f = PointSetFile {
            dimension: 2,
            points: vec![
                ExactPoint::from_ints(&[0, 0]),
                ExactPoint::from_ints(&[1, 0]),
                ExactPoint::from_ints(&[2, 0]),
            ],
            labels: Some(vec![1, 0, 1]),
        };
        let c = f.classes().unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].points, vec![ExactPoint::from_ints(&[1, 0])]);
        let round: PointSetFile =
            serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(round, f);
    }

    #[test]
    fn error_outcomes() {
        assert_eq!(
            Outcome::from(&Error::Inconsistency("x".into())),
            Outcome::Inconsistency
        );
        assert_eq!(Outcome::from(&Error::Parse("x".into())), Outcome::Usage);
        assert_eq!(
            Outcome::from(&Error::CertificationFailed("x".into())),
            Outcome::Negative
        );
    }
}
