//! Point-set generation, seeded experiments and the verification grid.
//!
//! # Randomness
//!
//! Every random draw comes from ChaCha8 (RFC 8439 block function, 8 rounds)
//! keyed with the 64-bit seed in little-endian order in the first 8 key bytes
//! (remaining key bytes zero), with the 64-bit stream id selected by
//! `set_stream`. Words are consumed as little-endian `u64`s.
//!
//! * `uniform_below(m)`: draw `x`; accept when `x < m · ⌊2⁶⁴ / m⌋`, return `x mod m`.
//! * Subsets of size `k` from `0..N` use Floyd's algorithm: for `j` in
//!   `N−k..N`, draw `t = uniform_below(j + 1)`; insert `t`, or `j` if `t` is
//!   already present. The chosen indices are emitted in ascending order.
//! * Experiment sets use stream `(size_index << 32) | trial`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auxgraph::{verify_walk_inequalities, AuxGraph, SimpleGraph};
use crate::bounds::{self, RDomain};
use crate::brute;
use crate::configs::{self, PatternGraph, SearchOptions, Witness};
use crate::error::{Error, Result};
use crate::ffield::Fq;
use crate::geom::{self, point_from_index, space_size, Point, PointSet};
use crate::io;

/// Seeded counter-based generator; see the module docs for the exact algorithm.
pub struct TrialRng(ChaCha8Rng);

impl TrialRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        TrialRng(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform_below(&mut self, m: u64) -> u64 {
        assert!(m > 0);
        let zone = (u64::MAX / m) * m;
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return x % m;
            }
        }
    }

    /// `k` distinct indices from `0..n`, ascending.
    pub fn sample(&mut self, n: u64, k: u64) -> Vec<u64> {
        assert!(k <= n);
        let mut chosen = BTreeSet::new();
        for j in (n - k)..n {
            let t = self.uniform_below(j + 1);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        chosen.into_iter().collect()
    }
}

/// How a point set is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Generator {
    /// Uniform sample of `F_q^d` without replacement.
    UniformRandom,
    /// All of `F_q^d`.
    FullSpace,
    /// The sphere `S(0, t)`.
    Sphere { t: u32 },
    /// Points whose first `dim` coordinates are free and the rest equal `offset`.
    Subspace { dim: usize, offset: Option<Vec<u32>> },
    /// A point-set file.
    File { path: PathBuf },
}

/// Builds the base set of a generator and samples `size` of its points
/// (all of them when `size` is `None` or equals the base size).
pub fn generate_set(field: &Arc<Fq>, d: usize, gen: &Generator, size: Option<usize>, rng: &mut TrialRng) -> Result<PointSet> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let q = field.q();
    let take = |base: PointSet, rng: &mut TrialRng| -> Result<PointSet> {
        let n = base.len();
        match size {
            None => Ok(base),
            Some(k) if k == n => Ok(base),
            Some(k) if k > n => Err(Error::SizeTooLarge { requested: k as u128, available: n as u128 }),
            Some(k) => {
                let pts = rng.sample(n as u64, k as u64).into_iter().map(|i| base.point(i as usize).clone()).collect();
                PointSet::new(base.field_arc().clone(), d, pts)
            }
        }
    };
    match gen {
        Generator::UniformRandom => {
            let total = space_size(q, d).filter(|&t| t <= u64::MAX as u128).ok_or(Error::SizeTooLarge {
                requested: size.unwrap_or(0) as u128,
                available: u128::MAX,
            })?;
            let k = size.ok_or_else(|| Error::InvalidArgument("uniform generator needs a size".into()))?;
            if k as u128 > total {
                return Err(Error::SizeTooLarge { requested: k as u128, available: total });
            }
            let pts = rng.sample(total as u64, k as u64).into_iter().map(|i| point_from_index(q, d, i as u128)).collect();
            PointSet::new(field.clone(), d, pts)
        }
        Generator::FullSpace => {
            if let Some(k) = size {
                let total = space_size(q, d).unwrap_or(u128::MAX);
                if k as u128 > total {
                    return Err(Error::SizeTooLarge { requested: k as u128, available: total });
                }
            }
            take(PointSet::full_space(field.clone(), d)?, rng)
        }
        Generator::Sphere { t } => take(geom::sphere_enum(field, d, &Point::zero(d), *t)?, rng),
        Generator::Subspace { dim, offset } => {
            if *dim > d {
                return Err(Error::InvalidArgument(format!("subspace dimension {dim} exceeds d = {d}")));
            }
            let offset = offset.clone().unwrap_or_else(|| vec![0; d]);
            if offset.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: offset.len() });
            }
            let count = space_size(q, *dim).filter(|&c| c <= 1 << 32).ok_or(Error::SizeTooLarge {
                requested: u128::MAX,
                available: 1 << 32,
            })?;
            let pts = (0..count)
                .map(|i| {
                    let free = point_from_index(q, *dim, i);
                    Point(free.0.into_iter().chain(offset[*dim..].iter().copied()).collect())
                })
                .collect();
            take(PointSet::new(field.clone(), d, pts)?, rng)
        }
        Generator::File { path } => {
            let set = io::read_point_set(path)?;
            if set.field() != field.as_ref() || set.dim() != d {
                return Err(Error::InvalidArgument(format!("{} does not match q = {q}, d = {d}", path.display())));
            }
            take(set, rng)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RSelection {
    /// Every `r ∈ F_q^*`.
    All,
    /// Every `r ∈ F_q^+`.
    Squares,
    List(Vec<u32>),
}

impl RSelection {
    pub fn resolve(&self, field: &Fq) -> Result<Vec<u32>> {
        match self {
            RSelection::All => Ok(RDomain::Nonzero.elements(field)),
            RSelection::Squares => Ok(RDomain::Squares.elements(field)),
            RSelection::List(v) => {
                for &r in v {
                    if r == 0 {
                        return Err(Error::ZeroRatio);
                    }
                    field.check(r)?;
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub q: u64,
    pub d: usize,
    /// Pattern in `star:K` / `path:K` / `cycle:K` / `edges:N:…` form.
    pub pattern: String,
    pub r_selection: RSelection,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub generator: Generator,
    /// Also count all ordered witness pairs (exhaustive, budgeted).
    #[serde(default)]
    pub count: bool,
    #[serde(default)]
    pub require_distinct_tuples: bool,
    #[serde(default = "configs::default_budget")]
    pub budget: u64,
    /// Fill the `ms` column. Off by default so that output is byte-reproducible.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentSpec {
    pub fn new(q: u64, d: usize, pattern: &str, generator: Generator) -> Self {
        ExperimentSpec {
            q,
            d,
            pattern: pattern.into(),
            r_selection: RSelection::All,
            sizes: Vec::new(),
            trials: 1,
            seed: 0,
            generator,
            count: false,
            require_distinct_tuples: false,
            budget: configs::default_budget(),
            record_timing: false,
        }
    }
}

/// One `(size, r, trial)` run. Field order is the CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub q: u64,
    pub d: usize,
    pub pattern: String,
    pub r: u32,
    pub size: usize,
    pub trial: usize,
    pub found: bool,
    pub count: Option<u64>,
    pub nodes_visited: u64,
    pub ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub witness: Option<Witness>,
}

/// Per `(size, r)` aggregate.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub size: usize,
    pub r: u32,
    pub trials: usize,
    pub successes: usize,
    pub errors: usize,
    /// Sum of witness counts over trials, when counting was requested.
    pub count_total: Option<u64>,
    /// `count_total / trials` as an exact fraction.
    pub count_mean: Option<String>,
    pub ms_total: Option<u64>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentTable {
    pub spec: ExperimentSpec,
    pub rows: Vec<ExperimentRow>,
    pub trials: Vec<TrialRecord>,
}

pub const CSV_COLUMNS: &str = "q,d,pattern,r,size,trial,found,count,nodes_visited,ms";

impl ExperimentTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS.split(','))?;
        for t in &self.trials {
            w.write_record([
                t.q.to_string(),
                t.d.to_string(),
                t.pattern.clone(),
                t.r.to_string(),
                t.size.to_string(),
                t.trial.to_string(),
                t.found.to_string(),
                t.count.map(|c| c.to_string()).unwrap_or_default(),
                t.nodes_visited.to_string(),
                t.ms.map(|c| c.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn stream_id(size_index: usize, trial: usize) -> u64 {
    ((size_index as u64) << 32) | trial as u64
}

/// Runs every `(size, r, trial)` combination. Output order is size (as listed),
/// then `r` ascending, then trial, independent of thread scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentTable> {
    let field = Arc::new(Fq::new(spec.q)?);
    let pattern: PatternGraph = spec.pattern.parse()?;
    let rs = spec.r_selection.resolve(&field)?;
    if spec.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let sizes: Vec<Option<usize>> = if spec.sizes.is_empty() {
        vec![None]
    } else {
        spec.sizes.iter().map(|&s| Some(s)).collect()
    };
    let jobs: Vec<(usize, usize)> = (0..sizes.len()).flat_map(|s| (0..spec.trials).map(move |t| (s, t))).collect();
    let sets: Vec<Result<PointSet>> = jobs
        .par_iter()
        .map(|&(s, t)| {
            let mut rng = TrialRng::new(spec.seed, stream_id(s, t));
            generate_set(&field, spec.d, &spec.generator, sizes[s], &mut rng)
        })
        .collect();
    let combos: Vec<(usize, usize, u32)> = (0..sizes.len())
        .flat_map(|s| rs.iter().flat_map(move |&r| (0..spec.trials).map(move |t| (s, t, r))))
        .collect();
    let pattern_name = pattern.to_string();
    let trials: Vec<TrialRecord> = combos
        .par_iter()
        .map(|&(s, t, r)| {
            let mut rec = TrialRecord {
                q: spec.q,
                d: spec.d,
                pattern: pattern_name.clone(),
                r,
                size: sizes[s].unwrap_or(0),
                trial: t,
                found: false,
                count: None,
                nodes_visited: 0,
                ms: None,
                error: None,
                witness: None,
            };
            let set = match &sets[s * spec.trials + t] {
                Ok(set) => set,
                Err(e) => {
                    rec.error = Some(e.to_string());
                    return rec;
                }
            };
            rec.size = set.len();
            let start = Instant::now();
            let opts = SearchOptions {
                require_distinct_tuples: spec.require_distinct_tuples,
                budget: Some(spec.budget),
                parallel: false,
            };
            match configs::find_witness(set, r, &pattern, opts) {
                Ok(out) => {
                    rec.found = out.witness.is_some();
                    rec.nodes_visited = out.nodes_visited;
                    rec.witness = out.witness;
                }
                Err(e) => rec.error = Some(e.to_string()),
            }
            if spec.count && rec.error.is_none() {
                match configs::count_witnesses(set, r, &pattern, spec.budget) {
                    Ok(c) => rec.count = Some(c),
                    Err(e) => rec.error = Some(e.to_string()),
                }
            }
            if spec.record_timing {
                rec.ms = Some(start.elapsed().as_millis() as u64);
            }
            rec
        })
        .collect();
    let mut rows = Vec::new();
    for chunk in trials.chunks(spec.trials) {
        let first = &chunk[0];
        let count_total = spec.count.then(|| chunk.iter().filter_map(|t| t.count).sum::<u64>());
        rows.push(ExperimentRow {
            size: first.size,
            r: first.r,
            trials: chunk.len(),
            successes: chunk.iter().filter(|t| t.found).count(),
            errors: chunk.iter().filter(|t| t.error.is_some()).count(),
            count_total,
            count_mean: count_total.map(|c| {
                let g = num_integer::gcd(c, chunk.len() as u64).max(1);
                format!("{}/{}", c / g, chunk.len() as u64 / g)
            }),
            ms_total: spec.record_timing.then(|| chunk.iter().filter_map(|t| t.ms).sum()),
            witness: chunk.iter().find_map(|t| t.witness.clone()),
        });
    }
    Ok(ExperimentTable { spec: spec.clone(), rows, trials })
}

// ---------------------------------------------------------------------------
// verification grid
// ---------------------------------------------------------------------------

/// Deliberate defects, for testing that the grid catches them.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Faults {
    /// Replaces `μ(0)` in the sphere formula.
    pub mu_zero: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyGrid {
    pub qs: Vec<u64>,
    pub ds: Vec<usize>,
    pub seed: u64,
    /// Random small sets drawn per `(q, d)`.
    pub random_sets: usize,
    #[serde(default)]
    pub faults: Faults,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        VerifyGrid { qs: vec![3, 5, 7, 9], ds: vec![2, 3], seed: 2024, random_sets: 3, faults: Faults::default() }
    }
}

impl VerifyGrid {
    pub fn empty() -> Self {
        VerifyGrid { qs: Vec::new(), ds: Vec::new(), ..Self::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub q: Option<u64>,
    pub d: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub violations: usize,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.violations == 0 {
            0
        } else {
            1
        }
    }
}

/// Everything a per-point check needs.
pub struct GridPoint {
    pub field: Arc<Fq>,
    pub d: usize,
    /// Random sets with 2 to 4 points.
    pub small_sets: Vec<PointSet>,
    /// Random sets with `⌈q^{d/2}⌉` points (the star-count lower-bound hypothesis).
    pub threshold_sets: Vec<PointSet>,
    pub faults: Faults,
    pub seed: u64,
}

type Outcome = std::result::Result<String, String>;

pub enum CheckScope {
    PerPoint(fn(&GridPoint) -> Outcome),
    Global(fn(u64) -> Outcome),
}

pub struct CheckDef {
    pub name: &'static str,
    pub scope: CheckScope,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// One runnable check per named invariant.
pub const REGISTRY: &[CheckDef] = &[
    CheckDef { name: "ffield.character_sum", scope: CheckScope::PerPoint(check_character_sum) },
    CheckDef { name: "ffield.multiplicativity", scope: CheckScope::PerPoint(check_multiplicativity) },
    CheckDef { name: "ffield.frobenius", scope: CheckScope::PerPoint(check_frobenius) },
    CheckDef { name: "ffield.qr_set_size", scope: CheckScope::PerPoint(check_qr_size) },
    CheckDef { name: "geom.sphere_partition", scope: CheckScope::PerPoint(check_sphere_partition) },
    CheckDef { name: "geom.sphere_formula_vs_enumeration", scope: CheckScope::PerPoint(check_sphere_enum) },
    CheckDef { name: "geom.bisector_size", scope: CheckScope::PerPoint(check_bisector) },
    CheckDef { name: "geom.translation_invariance", scope: CheckScope::PerPoint(check_translation) },
    CheckDef { name: "geom.quotient_theorems", scope: CheckScope::PerPoint(check_quotient) },
    CheckDef { name: "auxgraph.loop_free_symmetric", scope: CheckScope::PerPoint(check_aux_symmetry) },
    CheckDef { name: "auxgraph.walks_vs_degree_sums", scope: CheckScope::PerPoint(check_walks_vs_degrees) },
    CheckDef { name: "auxgraph.walks_vs_enumeration", scope: CheckScope::PerPoint(check_walks_vs_enumeration) },
    CheckDef { name: "auxgraph.walk_inequalities", scope: CheckScope::PerPoint(check_walk_inequalities) },
    CheckDef { name: "auxgraph.walk_inequalities_random_graphs", scope: CheckScope::Global(check_random_graphs) },
    CheckDef { name: "auxgraph.holder", scope: CheckScope::PerPoint(check_holder) },
    CheckDef { name: "configs.star_tuples_vs_oracle", scope: CheckScope::PerPoint(check_star_oracle) },
    CheckDef { name: "configs.path_tuples_vs_oracle", scope: CheckScope::PerPoint(check_path_oracle) },
    CheckDef { name: "configs.decomposition_closure", scope: CheckScope::PerPoint(check_decompositions) },
    CheckDef { name: "configs.witness_counts_match_decomposition", scope: CheckScope::PerPoint(check_witness_counts) },
    CheckDef { name: "configs.monotonicity", scope: CheckScope::PerPoint(check_monotonicity) },
    CheckDef { name: "configs.dilation_symmetry", scope: CheckScope::PerPoint(check_dilation_symmetry) },
    CheckDef { name: "configs.witness_self_check", scope: CheckScope::PerPoint(check_witness_self) },
    CheckDef { name: "bounds.s1_validity", scope: CheckScope::PerPoint(check_s1) },
    CheckDef { name: "bounds.star_b_validity", scope: CheckScope::PerPoint(check_star_b) },
    CheckDef { name: "bounds.path_c_validity", scope: CheckScope::PerPoint(check_path_c) },
    CheckDef { name: "bounds.path_chain", scope: CheckScope::PerPoint(check_path_chain) },
    CheckDef { name: "bounds.existence_consistency", scope: CheckScope::PerPoint(check_existence) },
    CheckDef { name: "bounds.regime_dispatch", scope: CheckScope::Global(check_regime_dispatch) },
    CheckDef { name: "bounds.enclosure_soundness", scope: CheckScope::Global(check_enclosures) },
    CheckDef { name: "harness.determinism", scope: CheckScope::PerPoint(check_determinism) },
    CheckDef { name: "harness.witness_roundtrip", scope: CheckScope::PerPoint(check_witness_roundtrip) },
];

fn grid_point(q: u64, d: usize, grid: &VerifyGrid) -> Result<GridPoint> {
    let field = Arc::new(Fq::new(q)?);
    let seed = grid.seed ^ (q << 8) ^ d as u64;
    let mut small_sets = Vec::new();
    let mut threshold_sets = Vec::new();
    let total = space_size(field.q(), d).unwrap_or(u128::MAX);
    // ⌈q^{d/2}⌉ via n² ≥ q^d
    let mut need = 1u64;
    while (need as u128).pow(2) < total {
        need += 1;
    }
    for i in 0..grid.random_sets {
        let mut rng = TrialRng::new(seed, i as u64);
        let size = 2 + i % 3;
        small_sets.push(generate_set(&field, d, &Generator::UniformRandom, Some(size), &mut rng)?);
        if (need as u128) <= total && need <= 64 {
            threshold_sets.push(generate_set(&field, d, &Generator::UniformRandom, Some(need as usize), &mut rng)?);
        }
    }
    Ok(GridPoint { field, d, small_sets, threshold_sets, faults: grid.faults, seed })
}

/// Runs the registry over the grid. An empty grid yields an empty report.
pub fn verify_all(grid: &VerifyGrid) -> Result<VerifyReport> {
    let mut points = Vec::new();
    for &q in &grid.qs {
        for &d in &grid.ds {
            points.push(grid_point(q, d, grid)?);
        }
    }
    let mut checks = Vec::new();
    for def in REGISTRY {
        match &def.scope {
            CheckScope::PerPoint(run) => {
                let results: Vec<CheckResult> = points
                    .par_iter()
                    .map(|pt| {
                        let out = run(pt);
                        CheckResult {
                            name: def.name,
                            q: Some(pt.field.q() as u64),
                            d: Some(pt.d),
                            passed: out.is_ok(),
                            detail: out.unwrap_or_else(|e| e),
                        }
                    })
                    .collect();
                checks.extend(results);
            }
            CheckScope::Global(run) => {
                if points.is_empty() {
                    continue;
                }
                let out = run(grid.seed);
                checks.push(CheckResult { name: def.name, q: None, d: None, passed: out.is_ok(), detail: out.unwrap_or_else(|e| e) });
            }
        }
    }
    let violations = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport { checks, violations })
}

fn check_character_sum(pt: &GridPoint) -> Outcome {
    let f = &pt.field;
    let s: i64 = f.elements().map(|a| f.quad_char(a) as i64).sum();
    ensure!(s == 0, "character sum is {s}");
    Ok("sum = 0".into())
}

fn check_multiplicativity(pt: &GridPoint) -> Outcome {
    let f = &pt.field;
    for a in f.elements() {
        for b in f.elements() {
            ensure!(f.quad_char(f.mul(a, b)) == f.quad_char(a) * f.quad_char(b), "η({a}·{b}) ≠ η({a})η({b})");
        }
    }
    Ok(format!("{} pairs", (f.q() as u64).pow(2)))
}

fn check_frobenius(pt: &GridPoint) -> Outcome {
    let f = &pt.field;
    for a in f.elements() {
        ensure!(f.pow(a, f.q() as u64) == a, "{a}^q ≠ {a}");
    }
    Ok("a^q = a".into())
}

fn check_qr_size(pt: &GridPoint) -> Outcome {
    let n = pt.field.qr_set().len();
    ensure!(n as u32 == (pt.field.q() - 1) / 2, "|F_q^+| = {n}");
    Ok(format!("|F_q^+| = {n}"))
}

fn sphere_formula(pt: &GridPoint, t: u32) -> std::result::Result<BigUint, String> {
    let mu = match (t, pt.faults.mu_zero) {
        (0, Some(m)) => m,
        _ => pt.field.mu(t),
    };
    geom::sphere_size_with_mu(&pt.field, pt.d, t, mu).map_err(err)
}

fn check_sphere_partition(pt: &GridPoint) -> Outcome {
    let mut total = BigUint::zero();
    for t in pt.field.elements() {
        total += sphere_formula(pt, t)?;
    }
    let expect = BigUint::from(space_size(pt.field.q(), pt.d).ok_or("space too large")?);
    ensure!(total == expect, "Σ_t |S(x,t)| = {total}, q^d = {expect}");
    Ok(format!("Σ = {expect}"))
}

fn check_sphere_enum(pt: &GridPoint) -> Outcome {
    for t in pt.field.elements() {
        let formula = sphere_formula(pt, t)?;
        let listed = geom::sphere_enum(&pt.field, pt.d, &Point::zero(pt.d), t).map_err(err)?;
        ensure!(BigUint::from(listed.len()) == formula, "t={t}: enumeration {} vs formula {formula}", listed.len());
        let counted = geom::sphere_count(&pt.field, pt.d, t).map_err(err)?;
        ensure!(BigUint::from(counted) == formula, "t={t}: count {counted} vs formula {formula}");
        if let Some(scan) = brute::sphere_scan(&pt.field, pt.d, &vec![0; pt.d], t) {
            ensure!(BigUint::from(scan) == formula, "t={t}: scan {scan} vs formula {formula}");
        }
    }
    Ok("all radii agree".into())
}

fn random_point(pt: &GridPoint, rng: &mut TrialRng) -> Point {
    Point((0..pt.d).map(|_| rng.uniform_below(pt.field.q() as u64) as u32).collect())
}

fn check_bisector(pt: &GridPoint) -> Outcome {
    let mut rng = TrialRng::new(pt.seed, 1 << 40);
    let expect = space_size(pt.field.q(), pt.d - 1).ok_or("space too large")?;
    let mut tested = 0;
    while tested < 10 {
        let (u, w) = (random_point(pt, &mut rng), random_point(pt, &mut rng));
        if u == w {
            continue;
        }
        let b = geom::bisector_enum(&pt.field, pt.d, &u, &w).map_err(err)?;
        ensure!(b.len() as u128 == expect, "|bisector({u:?}, {w:?})| = {}", b.len());
        for v in b.points() {
            ensure!(geom::dist(&pt.field, &v.0, &u.0) == geom::dist(&pt.field, &v.0, &w.0), "{v:?} not equidistant");
        }
        tested += 1;
    }
    Ok(format!("10 pairs, size q^(d-1) = {expect}"))
}

fn check_translation(pt: &GridPoint) -> Outcome {
    let mut rng = TrialRng::new(pt.seed, 2 << 40);
    for t in pt.field.elements() {
        let formula = sphere_formula(pt, t)?;
        for _ in 0..10 {
            let c = random_point(pt, &mut rng);
            let s = geom::sphere_enum(&pt.field, pt.d, &c, t).map_err(err)?;
            ensure!(BigUint::from(s.len()) == formula, "|S({c:?}, {t})| = {}", s.len());
            for v in s.points() {
                ensure!(geom::dist(&pt.field, &v.0, &c.0) == t, "{v:?} not on S({c:?}, {t})");
            }
        }
    }
    Ok("10 centers per radius".into())
}

fn check_quotient(pt: &GridPoint) -> Outcome {
    let mut notes = Vec::new();
    let mut sets: Vec<PointSet> = pt.small_sets.iter().chain(&pt.threshold_sets).cloned().collect();
    if space_size(pt.field.q(), pt.d).is_some_and(|n| n <= 4096) {
        sets.push(PointSet::full_space(pt.field.clone(), pt.d).map_err(err)?);
    }
    for set in &sets {
        let rep = bounds::quotient_threshold_check(set);
        ensure!(rep.verdict != bounds::Verdict::Violated, "{}: quotient set {:?}", rep.theorem, rep.quotient_set);
        notes.push(format!("{:?}", rep.verdict));
    }
    Ok(notes.join(","))
}

fn check_aux_symmetry(pt: &GridPoint) -> Outcome {
    for set in &pt.small_sets {
        let n = set.len();
        for r in pt.field.nonzero() {
            let g = AuxGraph::new(set, r).map_err(err)?;
            for a in 0..n * n {
                let va = (a / n, a % n);
                ensure!(!g.adjacent(va, va), "loop at {va:?}");
                for b in 0..n * n {
                    let vb = (b / n, b % n);
                    ensure!(g.adjacent(va, vb) == g.adjacent(vb, va), "asymmetric {va:?} {vb:?} r={r}");
                }
            }
        }
    }
    Ok("no loops, symmetric".into())
}

fn check_walks_vs_degrees(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(&pt.threshold_sets) {
        for r in pt.field.nonzero() {
            let g = AuxGraph::new(set, r).map_err(err)?;
            let w = g.walk_counts(2);
            ensure!(w[0] == BigUint::from(set.len() * set.len()), "w_0 ≠ |E|²");
            ensure!(w[1] == g.degree_power_sum(1), "w_1 ≠ Σ deg, r={r}");
            ensure!(w[2] == g.degree_power_sum(2), "w_2 ≠ Σ deg², r={r}");
        }
    }
    Ok("w_1, w_2 match".into())
}

fn check_walks_vs_enumeration(pt: &GridPoint) -> Outcome {
    let mut tested = 0;
    for set in pt.small_sets.iter().filter(|s| s.len() <= 3) {
        for r in pt.field.nonzero().take(3) {
            let fast = AuxGraph::new(set, r).map_err(err)?.walk_counts(4);
            let slow = brute::walks_by_enumeration(&brute::explicit_aux_graph(set, r), 4).ok_or("oracle too large")?;
            ensure!(fast == slow, "walks {fast:?} vs enumeration {slow:?}");
            tested += 1;
        }
    }
    Ok(format!("{tested} cases"))
}

fn check_walk_inequalities(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(&pt.threshold_sets) {
        for r in pt.field.nonzero() {
            let w = AuxGraph::new(set, r).map_err(err)?.walk_counts(4);
            let rep = verify_walk_inequalities(&w, 4);
            ensure!(rep.all_hold(), "violation on |E|={} r={r}", set.len());
        }
    }
    Ok("both families hold".into())
}

/// Random graph on `n ≤ 12` vertices, each edge present with probability 1/2.
pub fn random_graph(rng: &mut TrialRng) -> SimpleGraph {
    let n = 1 + rng.uniform_below(12) as usize;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.next_u64() & 1 == 1 {
                edges.push((a, b));
            }
        }
    }
    SimpleGraph::new(n, &edges).expect("valid edges")
}

fn check_random_graphs(seed: u64) -> Outcome {
    let mut rng = TrialRng::new(seed, 3 << 40);
    for i in 0..100 {
        let g = random_graph(&mut rng);
        let rep = verify_walk_inequalities(&g.walk_counts(6), 6);
        ensure!(rep.all_hold(), "graph {i} violates a walk inequality");
    }
    Ok("100 graphs".into())
}

fn check_holder(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(&pt.threshold_sets) {
        for r in pt.field.nonzero() {
            let g = AuxGraph::new(set, r).map_err(err)?;
            let s: Vec<BigUint> = (1..=3).map(|k| g.degree_power_sum(k)).collect();
            for c in bounds::star_holder_checks(set.len() as u64, &s) {
                ensure!(c.holds, "{} fails for r={r}", c.name);
            }
        }
    }
    Ok("k = 2, 3".into())
}

fn check_star_oracle(pt: &GridPoint) -> Outcome {
    let mut tested = 0;
    for set in &pt.small_sets {
        for r in pt.field.nonzero() {
            for k in 1..=3 {
                if let Some(slow) = brute::star_tuples(set, r, k) {
                    let fast = configs::count_star_tuples(set, r, k as u32).map_err(err)?;
                    ensure!(fast == BigUint::from(slow), "S_{k}: {fast} vs oracle {slow}");
                    tested += 1;
                }
            }
        }
    }
    Ok(format!("{tested} cases"))
}

fn check_path_oracle(pt: &GridPoint) -> Outcome {
    let mut tested = 0;
    for set in &pt.small_sets {
        for r in pt.field.nonzero() {
            for k in 1..=3 {
                if let Some(slow) = brute::path_tuples(set, r, k) {
                    let fast = configs::count_path_tuples(set, r, k).map_err(err)?;
                    ensure!(fast == BigUint::from(slow), "P_{k}: {fast} vs oracle {slow}");
                    tested += 1;
                }
            }
        }
    }
    Ok(format!("{tested} cases"))
}

fn check_decompositions(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(pt.threshold_sets.iter().filter(|s| s.len() <= 5)) {
        for r in pt.field.nonzero() {
            for k in [2, 3] {
                let rep = configs::star_decomposition(set, r, k, configs::DEFAULT_BUDGET).map_err(err)?;
                ensure!(rep.closed() && rep.all_checks_hold(), "star k={k} r={r}: {:?}", rep.checks);
            }
            let rep = configs::path4_decomposition(set, r, configs::DEFAULT_BUDGET).map_err(err)?;
            ensure!(rep.closed() && rep.all_checks_hold(), "path4 r={r}: {:?}", rep.checks);
        }
    }
    Ok("closed".into())
}

fn check_witness_counts(pt: &GridPoint) -> Outcome {
    for set in &pt.small_sets {
        for r in pt.field.nonzero() {
            let star = configs::star_decomposition(set, r, 2, configs::DEFAULT_BUDGET).map_err(err)?;
            let c = configs::count_witnesses(set, r, &PatternGraph::star(2).map_err(err)?, configs::DEFAULT_BUDGET).map_err(err)?;
            ensure!(c == star.nondegenerate, "star:2 count {c} vs |B| {}", star.nondegenerate);
            let path = configs::path4_decomposition(set, r, configs::DEFAULT_BUDGET).map_err(err)?;
            let c = configs::count_witnesses(set, r, &PatternGraph::path(4).map_err(err)?, configs::DEFAULT_BUDGET).map_err(err)?;
            ensure!(c == path.nondegenerate, "path:4 count {c} vs |C| {}", path.nondegenerate);
        }
    }
    Ok("B and C match".into())
}

fn check_monotonicity(pt: &GridPoint) -> Outcome {
    let mut rng = TrialRng::new(pt.seed, 4 << 40);
    let mut grown = 0;
    for set in &pt.small_sets {
        let extra = loop {
            let p = random_point(pt, &mut rng);
            if !set.contains(&p) {
                break p;
            }
        };
        let bigger = set.with_point(extra).map_err(err)?;
        for r in pt.field.nonzero() {
            let (a, b) = (AuxGraph::new(set, r).map_err(err)?, AuxGraph::new(&bigger, r).map_err(err)?);
            for k in 1..=3 {
                ensure!(a.degree_power_sum(k) <= b.degree_power_sum(k), "S_{k} decreased");
            }
            let (wa, wb) = (a.walk_counts(4), b.walk_counts(4));
            ensure!(wa.iter().zip(&wb).all(|(x, y)| x <= y), "walk counts decreased");
        }
        grown += 1;
    }
    Ok(format!("{grown} grow-by-one cases"))
}

fn check_dilation_symmetry(pt: &GridPoint) -> Outcome {
    let patterns = ["star:1", "star:2", "path:2", "path:3"];
    for set in &pt.small_sets {
        for r in pt.field.nonzero() {
            let rinv = pt.field.inv(r).map_err(err)?;
            for p in patterns {
                let g: PatternGraph = p.parse().map_err(err)?;
                let a = configs::find_witness(set, r, &g, SearchOptions::default()).map_err(err)?;
                let b = configs::find_witness(set, rinv, &g, SearchOptions::default()).map_err(err)?;
                ensure!(a.witness.is_some() == b.witness.is_some(), "{p}: r={r} and r^-1={rinv} disagree");
                if let Some(w) = &a.witness {
                    w.swapped().validate(set, rinv, &g, false).map_err(err)?;
                }
            }
        }
    }
    Ok("symmetric".into())
}

fn check_witness_self(pt: &GridPoint) -> Outcome {
    let mut found = 0;
    let full = space_size(pt.field.q(), pt.d)
        .filter(|&n| n <= 400)
        .map(|_| PointSet::full_space(pt.field.clone(), pt.d))
        .transpose()
        .map_err(err)?;
    for set in pt.small_sets.iter().chain(&pt.threshold_sets).chain(full.iter()) {
        for p in ["star:2", "path:4", "cycle:4"] {
            let g: PatternGraph = p.parse().map_err(err)?;
            let out = configs::find_witness(set, 1, &g, SearchOptions { budget: Some(10_000_000), ..Default::default() });
            match out {
                Ok(out) => {
                    if let Some(w) = out.witness {
                        w.validate(set, 1, &g, false).map_err(err)?;
                        found += 1;
                    }
                }
                Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(format!("{found} witnesses re-validated"))
}

fn check_s1(pt: &GridPoint) -> Outcome {
    let mut notes = Vec::new();
    for set in pt.small_sets.iter().chain(&pt.threshold_sets) {
        for r in pt.field.nonzero() {
            let s1 = AuxGraph::new(set, r).map_err(err)?.degree_power_sum(1);
            let rep = bounds::s1_report(&pt.field, pt.d, set.len() as u64, r, &s1).map_err(err)?;
            ensure!(!rep.violated(), "S_1 = {s1} below bound {}", rep.bound);
            if rep.hypothesis_ok {
                notes.push(r);
            }
        }
    }
    Ok(format!("{} hypothesis-met cases", notes.len()))
}

fn check_star_b(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(pt.threshold_sets.iter().filter(|s| s.len() <= 6)) {
        for r in pt.field.nonzero() {
            let g = AuxGraph::new(set, r).map_err(err)?;
            for k in [2usize, 3] {
                let b = configs::count_witnesses(set, r, &PatternGraph::star(k).map_err(err)?, configs::DEFAULT_BUDGET).map_err(err)?;
                let s1 = g.degree_power_sum(1);
                let prev = g.degree_power_sum(k as u32 - 1);
                for rep in bounds::star_b_reports(set.len() as u64, k, &s1, &prev, b) {
                    ensure!(!rep.violated(), "{}: |B| = {b} < {}", rep.name, rep.bound);
                }
            }
        }
    }
    Ok("no violations".into())
}

fn path_counts(g: &AuxGraph) -> [BigUint; 4] {
    let w = g.walk_counts(4);
    [w[1].clone(), w[2].clone(), w[3].clone(), w[4].clone()]
}

fn check_path_c(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(pt.threshold_sets.iter().filter(|s| s.len() <= 5)) {
        for r in pt.field.nonzero() {
            let p = path_counts(&AuxGraph::new(set, r).map_err(err)?);
            let c = configs::path4_decomposition(set, r, configs::DEFAULT_BUDGET).map_err(err)?.nondegenerate;
            let rep = bounds::path_c_report(set.len() as u64, pt.field.q() as u64, pt.d, [&p[0], &p[1], &p[2], &p[3]], c);
            ensure!(!rep.violated(), "|C| = {c} < {}", rep.bound);
        }
    }
    Ok("no violations".into())
}

fn check_path_chain(pt: &GridPoint) -> Outcome {
    for set in pt.small_sets.iter().chain(&pt.threshold_sets) {
        for r in pt.field.nonzero() {
            let p = path_counts(&AuxGraph::new(set, r).map_err(err)?);
            for c in bounds::path_chain_checks(set.len() as u64, &p) {
                ensure!(c.holds, "{} fails for r={r}", c.name);
            }
        }
    }
    Ok("four inequalities hold".into())
}

fn check_existence(pt: &GridPoint) -> Outcome {
    let q = pt.field.q() as u64;
    let total = space_size(pt.field.q(), pt.d).ok_or("space too large")?;
    let mut met = 0;
    let mut thresholds = Vec::new();
    for k in 2..=3 {
        if let Ok(t) = bounds::star_pair_threshold(q, pt.d, k) {
            thresholds.push((PatternGraph::star(k).map_err(err)?, t));
        }
    }
    if let Ok(t) = bounds::path4_threshold(q, pt.d) {
        thresholds.push((PatternGraph::path(4).map_err(err)?, t));
    }
    for (g, t) in thresholds {
        if total > u64::MAX as u128 || !t.value.met_by(total as u64) {
            continue;
        }
        let full = PointSet::full_space(pt.field.clone(), pt.d).map_err(err)?;
        for r in t.r_domain.elements(&pt.field) {
            let out = configs::find_witness(&full, r, &g, SearchOptions::default()).map_err(err)?;
            ensure!(out.witness.is_some(), "{g} threshold met but no witness for r={r}");
        }
        met += 1;
    }
    Ok(format!("{met} thresholds reachable"))
}

fn check_regime_dispatch(_seed: u64) -> Outcome {
    for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
        for d in 2..=12 {
            let r = bounds::path4_threshold(q, d);
            let expect_err = q == 3 && d % 2 == 0;
            ensure!(r.is_err() == expect_err, "q={q} d={d}: unexpected {:?}", r.map(|t| t.name));
        }
    }
    Ok("total over q ≤ 27, d ≤ 12".into())
}

fn check_enclosures(_seed: u64) -> Outcome {
    use num_rational::BigRational;
    let three = BigRational::from_integer(3.into());
    ensure!(bounds::sqrt3_upper() * bounds::sqrt3_upper() > three, "√3 upper enclosure too small");
    ensure!(bounds::sqrt3_lower() * bounds::sqrt3_lower() < three, "√3 lower enclosure too large");
    for base in [3u64, 5, 7, 9, 11, 13] {
        for (num, den) in [(1u32, 2u32), (3, 2), (5, 3), (7, 3), (9, 3), (5, 2)] {
            let v = bounds::power_enclosure(base, num, den);
            let target = BigRational::from_integer(num_bigint::BigInt::from(base).pow(num));
            let lo: BigRational = num_traits::Pow::pow(v.lower(), den);
            let hi: BigRational = num_traits::Pow::pow(v.upper(), den);
            ensure!(lo <= target && target <= hi, "{base}^({num}/{den}) not enclosed");
        }
    }
    Ok("sound".into())
}

fn check_determinism(pt: &GridPoint) -> Outcome {
    for (i, gen) in [Generator::UniformRandom, Generator::FullSpace].iter().enumerate() {
        let size = match gen {
            Generator::UniformRandom => Some(5),
            _ => None,
        };
        if space_size(pt.field.q(), pt.d).is_none_or(|n| n > 4096) && size.is_none() {
            continue;
        }
        let a = generate_set(&pt.field, pt.d, gen, size, &mut TrialRng::new(pt.seed, i as u64)).map_err(err)?;
        let b = generate_set(&pt.field, pt.d, gen, size, &mut TrialRng::new(pt.seed, i as u64)).map_err(err)?;
        ensure!(a.points() == b.points(), "generator {gen:?} not deterministic");
    }
    Ok("identical".into())
}

fn check_witness_roundtrip(pt: &GridPoint) -> Outcome {
    let g = PatternGraph::star(1).map_err(err)?;
    for set in &pt.small_sets {
        if let Some(w) = configs::find_witness(set, 1, &g, SearchOptions::default()).map_err(err)?.witness {
            let text = serde_json::to_string(&w).map_err(err)?;
            let back: Witness = serde_json::from_str(&text).map_err(err)?;
            ensure!(back == w, "round trip changed the witness");
            back.validate(set, 1, &g, false).map_err(err)?;
        }
    }
    Ok("round trip ok".into())
}

/// Exact-integer helper for callers holding small counts.
pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rng_is_reproducible() {
        let a: Vec<u64> = (0..4).map({
            let mut r = TrialRng::new(42, 0);
            move |_| r.next_u64()
        }).collect();
        let b: Vec<u64> = (0..4).map({
            let mut r = TrialRng::new(42, 0);
            move |_| r.next_u64()
        }).collect();
        assert_eq!(a, b);
        let c = TrialRng::new(42, 1).next_u64();
        assert_ne!(a[0], c);
        let s = TrialRng::new(7, 0).sample(100, 10);
        assert_eq!(s.len(), 10);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generators() {
        let f = Arc::new(Fq::new(3).unwrap());
        let mut rng = TrialRng::new(1, 0);
        assert_eq!(generate_set(&f, 2, &Generator::FullSpace, None, &mut rng).unwrap().len(), 9);
        let s = generate_set(&f, 2, &Generator::Sphere { t: 1 }, None, &mut rng).unwrap();
        assert_eq!(s.points(), geom::sphere_enum(&f, 2, &Point::zero(2), 1).unwrap().points());
        let a = generate_set(&f, 2, &Generator::UniformRandom, Some(5), &mut TrialRng::new(42, 0)).unwrap();
        let b = generate_set(&f, 2, &Generator::UniformRandom, Some(5), &mut TrialRng::new(42, 0)).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(matches!(
            generate_set(&f, 2, &Generator::UniformRandom, Some(10), &mut rng),
            Err(Error::SizeTooLarge { .. })
        ));
        let sub = generate_set(&f, 3, &Generator::Subspace { dim: 2, offset: Some(vec![0, 0, 2]) }, None, &mut rng).unwrap();
        assert_eq!(sub.len(), 9);
        assert!(sub.points().iter().all(|p| p.0[2] == 2));
    }

    #[test]
    fn experiment_full_plane() {
        let mut spec = ExperimentSpec::new(3, 2, "path:4", Generator::FullSpace);
        spec.sizes = vec![9];
        spec.trials = 2;
        let table = run_experiment(&spec).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert_eq!(row.successes, row.trials);
            assert!(row.witness.is_some());
        }
    }

    #[test]
    fn experiment_too_small() {
        let mut spec = ExperimentSpec::new(5, 2, "star:2", Generator::UniformRandom);
        spec.sizes = vec![1];
        spec.trials = 3;
        let table = run_experiment(&spec).unwrap();
        assert!(table.rows.iter().all(|r| r.successes == 0));
    }

    #[test]
    fn experiment_csv_is_reproducible() {
        let mut spec = ExperimentSpec::new(5, 2, "star:2", Generator::UniformRandom);
        spec.sizes = vec![4, 6];
        spec.trials = 3;
        spec.seed = 99;
        spec.count = true;
        let a = run_experiment(&spec).unwrap().to_csv().unwrap();
        let b = run_experiment(&spec).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_COLUMNS));
    }

    #[test]
    fn empty_grid() {
        let rep = verify_all(&VerifyGrid::empty()).unwrap();
        assert!(rep.checks.is_empty());
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn fault_injection_is_caught() {
        let grid = VerifyGrid { qs: vec![5], ds: vec![2], random_sets: 1, faults: Faults { mu_zero: Some(5) }, ..Default::default() };
        let rep = verify_all(&grid).unwrap();
        assert_ne!(rep.exit_code(), 0);
        assert!(rep.checks.iter().any(|c| c.name == "geom.sphere_partition" && !c.passed));
    }
}
