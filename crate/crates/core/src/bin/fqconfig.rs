use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fqconfig::auxgraph::{verify_walk_inequalities, AuxGraph};
use fqconfig::bounds::{self, BoundReport, Verdict};
use fqconfig::configs::{self, PatternGraph, SearchOptions};
use fqconfig::harness::{self, ExperimentSpec, Faults, Generator, RSelection, VerifyGrid};
use fqconfig::{geom, io, Error, Fq, Point, PointSet};

#[derive(Parser)]
#[command(name = "fqconfig", version, about = "Similar configurations in F_q^d: exact counts, bounds and search")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Point-set file; without it commands use all of F_q^d.
    #[arg(long, global = true)]
    set: Option<PathBuf>,
    #[arg(long, global = true)]
    q: Option<u64>,
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Dilation ratio (a field element code).
    #[arg(long, global = true)]
    r: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    /// Node budget for exhaustive enumeration (default from FQCONFIG_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters, modulus and quadratic characters.
    FieldInfo,
    /// Size and points of the sphere S(center, t).
    Sphere {
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Comma-separated center coordinates (default: origin).
        #[arg(long)]
        center: Option<String>,
    },
    /// Distance set of E.
    Distances,
    /// Quotient set of E and the size-threshold check.
    Quotient,
    /// Tuple counts S_k or P_k and the number of pairs.
    Count {
        #[arg(long, default_value = "star:2")]
        pattern: String,
    },
    /// Degenerate decomposition of star:2, star:3 or path:4 pairs.
    Decompose {
        #[arg(long, default_value = "star:2")]
        pattern: String,
    },
    /// Walk counts of the auxiliary graph and the walk inequalities.
    Walks {
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Lexicographically first witness pair.
    Search {
        #[arg(long, default_value = "star:2")]
        pattern: String,
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        parallel: bool,
    },
    /// Every lower bound and threshold that applies to E.
    Bounds,
    /// Seeded experiment table.
    Experiment {
        /// JSON experiment spec; other flags are ignored when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "star:2")]
        pattern: String,
        /// uniform, full-space, sphere:T or subspace:DIM
        #[arg(long, default_value = "uniform")]
        generator: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Use r ∈ F_q^+ instead of F_q^* when --r is absent.
        #[arg(long)]
        squares: bool,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Runs every registered invariant check over a grid.
    VerifyAll {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 5, 7, 9])]
        qs: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3])]
        ds: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        random_sets: usize,
        /// Fault injection: replace μ(0) in the sphere formula.
        #[arg(long)]
        mu_zero: Option<i64>,
        /// Run with no grid points (prints an empty report).
        #[arg(long)]
        empty: bool,
    },
}

type CliResult = Result<bool, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

impl Global {
    fn field(&self) -> Result<Arc<Fq>, Error> {
        let q = self.q.ok_or_else(|| Error::InvalidArgument("--q is required".into()))?;
        Ok(Arc::new(Fq::new(q)?))
    }

    fn dim(&self) -> Result<usize, Error> {
        self.d.ok_or_else(|| Error::InvalidArgument("--d is required".into()))
    }

    fn point_set(&self) -> Result<PointSet, Error> {
        match &self.set {
            Some(path) => io::read_point_set(path),
            None => PointSet::full_space(self.field()?, self.dim()?),
        }
    }

    fn ratio(&self) -> Result<u32, Error> {
        self.r.ok_or_else(|| Error::InvalidArgument("--r is required".into()))
    }

    fn budget(&self) -> u64 {
        self.budget.unwrap_or_else(configs::default_budget)
    }

    /// `--r` if given, else every nonzero ratio.
    fn ratios(&self, field: &Fq) -> Vec<u32> {
        self.r.map(|r| vec![r]).unwrap_or_else(|| field.nonzero().collect())
    }
}

fn run(cli: Cli) -> CliResult {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::FieldInfo => {
            let f = g.field()?;
            if g.csv {
                println!("a,square,quad_char");
                for a in f.elements() {
                    println!("{a},{},{}", f.square(a), f.quad_char(a));
                }
            } else {
                emit(&f.info())?;
            }
        }
        Cmd::Sphere { t, center } => {
            let (f, d) = (g.field()?, g.dim()?);
            let center = match center {
                Some(s) => Point(parse_coords(s)?),
                None => Point::zero(d),
            };
            let size = geom::sphere_size_formula(&f, d, *t)?;
            let pts = geom::sphere_enum(&f, d, &center, *t)?;
            if g.csv {
                print!("{}", io::format_point_set(&pts));
            } else {
                #[derive(Serialize)]
                struct Out<'a> {
                    #[serde(serialize_with = "fqconfig::io::big")]
                    formula: num_bigint::BigUint,
                    enumerated: usize,
                    points: &'a [Point],
                }
                emit(&Out { formula: size, enumerated: pts.len(), points: pts.points() })?;
            }
        }
        Cmd::Distances => {
            let set = g.point_set()?;
            let ds = geom::distance_set(&set, true);
            emit(&ds)?;
        }
        Cmd::Quotient => {
            let rep = bounds::quotient_threshold_check(&g.point_set()?);
            emit(&rep)?;
            return Ok(rep.verdict != Verdict::Violated);
        }
        Cmd::Count { pattern } => {
            let set = g.point_set()?;
            let r = g.ratio()?;
            let pat: PatternGraph = pattern.parse()?;
            let (kind, k) = pattern.split_once(':').unwrap_or(("", ""));
            let k: usize = k.parse().map_err(|_| Error::InvalidPattern(pattern.clone()))?;
            let tuples = match kind {
                "star" => configs::count_star_tuples(&set, r, k as u32)?,
                "path" => configs::count_path_tuples(&set, r, k)?,
                _ => return Err(Error::InvalidPattern(format!("count supports star:K and path:K, got {pattern}"))),
            };
            let pairs = configs::count_witnesses(&set, r, &pat, g.budget())?;
            #[derive(Serialize)]
            struct Out {
                pattern: String,
                r: u32,
                #[serde(serialize_with = "fqconfig::io::big")]
                tuples: num_bigint::BigUint,
                pairs: u64,
            }
            emit(&Out { pattern: pat.to_string(), r, tuples, pairs })?;
        }
        Cmd::Decompose { pattern } => {
            let set = g.point_set()?;
            let r = g.ratio()?;
            let rep = match pattern.as_str() {
                "star:2" => configs::star_decomposition(&set, r, 2, g.budget())?,
                "star:3" => configs::star_decomposition(&set, r, 3, g.budget())?,
                "path:4" => configs::path4_decomposition(&set, r, g.budget())?,
                _ => return Err(Error::InvalidPattern(format!("decompose supports star:2, star:3, path:4, got {pattern}"))),
            };
            emit(&rep)?;
            return Ok(rep.closed() && rep.all_checks_hold());
        }
        Cmd::Walks { kmax } => {
            let set = g.point_set()?;
            let r = g.ratio()?;
            let w = AuxGraph::new(&set, r)?.walk_counts(*kmax);
            let rep = verify_walk_inequalities(&w, *kmax);
            emit(&rep)?;
            return Ok(rep.all_hold());
        }
        Cmd::Search { pattern, distinct, parallel } => {
            let set = g.point_set()?;
            let r = g.ratio()?;
            let pat: PatternGraph = pattern.parse()?;
            let opts = SearchOptions { require_distinct_tuples: *distinct, budget: Some(g.budget()), parallel: *parallel };
            emit(&configs::find_witness(&set, r, &pat, opts)?)?;
        }
        Cmd::Bounds => return bounds_cmd(g),
        Cmd::Experiment { config, pattern, generator, sizes, trials, squares, count, distinct, timing } => {
            let spec = match config {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => {
                    let q = g.q.ok_or_else(|| Error::InvalidArgument("--q is required".into()))?;
                    let mut spec = ExperimentSpec::new(q, g.dim()?, pattern, parse_generator(generator, g)?);
                    spec.r_selection = match (g.r, squares) {
                        (Some(r), _) => RSelection::List(vec![r]),
                        (None, true) => RSelection::Squares,
                        (None, false) => RSelection::All,
                    };
                    spec.sizes = sizes.clone();
                    spec.trials = *trials;
                    spec.seed = g.seed.unwrap_or(0);
                    spec.count = *count;
                    spec.require_distinct_tuples = *distinct;
                    spec.budget = g.budget();
                    spec.record_timing = *timing;
                    spec
                }
            };
            let table = harness::run_experiment(&spec)?;
            if g.json {
                println!("{}", table.to_json()?);
            } else {
                print!("{}", table.to_csv()?);
            }
        }
        Cmd::VerifyAll { qs, ds, random_sets, mu_zero, empty } => {
            let grid = VerifyGrid {
                qs: if *empty { Vec::new() } else { qs.clone() },
                ds: ds.clone(),
                seed: g.seed.unwrap_or(VerifyGrid::default().seed),
                random_sets: *random_sets,
                faults: Faults { mu_zero: *mu_zero },
            };
            let rep = harness::verify_all(&grid)?;
            emit(&rep)?;
            return Ok(rep.exit_code() == 0);
        }
    }
    Ok(true)
}

fn bounds_cmd(g: &Global) -> CliResult {
    let set = g.point_set()?;
    let field = set.field_arc().clone();
    let (n, d, q) = (set.len() as u64, set.dim(), field.q() as u64);
    let mut reports: Vec<BoundReport> = Vec::new();
    for r in g.ratios(&field) {
        let aux = AuxGraph::new(&set, r)?;
        let s1 = aux.degree_power_sum(1);
        reports.push(bounds::s1_report(&field, d, n, r, &s1)?);
        for k in [2usize, 3] {
            let b = configs::count_witnesses(&set, r, &PatternGraph::star(k)?, g.budget())?;
            let prev = aux.degree_power_sum(k as u32 - 1);
            reports.extend(bounds::star_b_reports(n, k, &s1, &prev, b));
        }
        let w = aux.walk_counts(4);
        let c = configs::count_witnesses(&set, r, &PatternGraph::path(4)?, g.budget())?;
        reports.push(bounds::path_c_report(n, q, d, [&w[1], &w[2], &w[3], &w[4]], c));
    }
    let thresholds: Vec<_> = [bounds::star_pair_threshold(q, d, 2), bounds::star_pair_threshold(q, d, 3), bounds::path4_threshold(q, d)]
        .into_iter()
        .filter_map(Result::ok)
        .collect();
    let quotient = bounds::quotient_threshold_check(&set);
    #[derive(Serialize)]
    struct Out {
        reports: Vec<BoundReport>,
        thresholds: Vec<bounds::Threshold>,
        quotient: bounds::QuotientReport,
    }
    let ok = !reports.iter().any(BoundReport::violated) && quotient.verdict != Verdict::Violated;
    emit(&Out { reports, thresholds, quotient })?;
    Ok(ok)
}

fn parse_coords(s: &str) -> Result<Vec<u32>, Error> {
    s.split(',')
        .map(|c| c.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad coordinate {c:?}"))))
        .collect()
}

fn parse_generator(s: &str, g: &Global) -> Result<Generator, Error> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    let num = |a: &str| a.parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad generator {s:?}")));
    Ok(match kind {
        "uniform" => Generator::UniformRandom,
        "full-space" => Generator::FullSpace,
        "sphere" => Generator::Sphere { t: num(arg)? },
        "subspace" => Generator::Subspace { dim: num(arg)? as usize, offset: None },
        "file" => Generator::File {
            path: g.set.clone().ok_or_else(|| Error::InvalidArgument("file generator needs --set".into()))?,
        },
        _ => return Err(Error::InvalidArgument(format!("unknown generator {s:?}"))),
    })
}
