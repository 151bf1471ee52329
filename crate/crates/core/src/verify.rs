//! Property suites that exercise the library end to end and report
//! pass/fail per check with the observed residual or count.
//!
//! Every suite draws its inputs up front from one seeded generator and then
//! evaluates trials in parallel, so a report depends only on the suite and
//! its [`SuiteOptions`]. Trial-level solver failures are counted against the
//! relevant checks rather than aborting the suite.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basin::{straighten, BasinSystem};
use crate::blaschke::{
    conformal_barycenter, critical_sum, normalize_critically_centered, normalize_fixed_point_centered, BlaschkeProduct,
};
use crate::circle::{build_coordinate_table, check_conjugacy, ArcInterval, PreimageSample};
use crate::disk::{on_circle, Complex, MobiusAutomorphism, ONE, ZERO};
use crate::error::{Error, Result};
use crate::model::{
    act, boundary_markings, conjugacy_equivalent, kernel_n0, orbit, parameter_len, parameters_of, random_member,
    random_parameters, sample, sample_symmetric, symmetric_parameters_of, ModelMap,
};
use crate::random::{automorphism, blaschke, circle_point, configuration, fixed_point_centered, seeded, SeededRng};
use crate::schema::{automorphism_group, enumerate_schemata, symmetry_group, MappingSchema, SymmetryElement};
use crate::tol::tolerances;

/// Zeros of random maps are drawn from this disk.
const ZERO_RADIUS: f64 = 0.9;
/// Random conjugating automorphisms send a point of this disk to 0.
const SCRAMBLE_RADIUS: f64 = 0.7;
/// Factor residual accepted after straightening a scrambled system.
const STRAIGHTEN_TOL: f64 = 1e-7;
/// Tolerance for the action identities and orbit comparisons.
const ACTION_TOL: f64 = 1e-8;
/// Parameter vectors shorter than this are allowed to test post-critically finite.
const PCF_NORM: f64 = 1e-8;
/// Bound on the `L^n` search space of the brute-force marking count.
const BRUTE_FORCE_LIMIT: u64 = 1 << 22;

fn probe_points() -> [Complex; 5] {
    [ZERO, Complex::new(0.5, 0.1), Complex::new(-0.3, 0.6), Complex::new(0.1, -0.7), Complex::new(-0.8, -0.2)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub relation: Relation,
    pub bound: f64,
}

impl Check {
    /// An exact count.
    pub fn count(name: impl Into<String>, observed: usize, expected: usize) -> Self {
        let name = name.into();
        Self { name, passed: observed == expected, observed: observed as f64, relation: Relation::Equal, bound: expected as f64 }
    }

    /// `observed < bound`; NaN fails.
    pub fn below(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self { name: name.into(), passed: observed < bound, observed, relation: Relation::Below, bound }
    }

    /// `observed > bound`; NaN fails.
    pub fn above(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self { name: name.into(), passed: observed > bound, observed, relation: Relation::Above, bound }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::Equal => write!(f, "{status}  {}: {} = {}", self.name, self.observed, self.bound),
            Relation::Below => write!(f, "{status}  {}: {:.3e} < {:.3e}", self.name, self.observed, self.bound),
            Relation::Above => write!(f, "{status}  {}: {:.9} > {:.9}", self.name, self.observed, self.bound),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: Suite, seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { suite: suite.name(), seed, passed, checks }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        writeln!(f, "suite {} (seed {}): {status}", self.suite, self.seed)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

/// Size knobs; `None` selects the suite default.
#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random inputs per degree, per schema or in total, depending on the suite.
    pub trials: Option<usize>,
    pub degrees: Option<Vec<usize>>,
    pub depth: Option<u32>,
    pub max_weight: Option<u32>,
}

impl SuiteOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn degrees(&self, default: &[usize]) -> Result<Vec<usize>> {
        let d = self.degrees.clone().unwrap_or_else(|| default.to_vec());
        if d.is_empty() || d.iter().any(|&x| x < 2) {
            return Err(Error::Domain("degrees must be at least 2".into()));
        }
        Ok(d)
    }

    fn trials(&self, default: usize) -> Result<usize> {
        match self.trials.unwrap_or(default) {
            0 => Err(Error::Domain("trials must be positive".into())),
            t => Ok(t),
        }
    }

    fn depth(&self, default: u32) -> Result<u32> {
        match self.depth.unwrap_or(default) {
            0 => Err(Error::Domain("depth must be positive".into())),
            k => Ok(k),
        }
    }

    fn schemata(&self, default: u32) -> Result<Vec<MappingSchema>> {
        let w = self.max_weight.unwrap_or(default);
        let mut out = Vec::new();
        for k in 1..=w {
            out.extend(enumerate_schemata(k)?);
        }
        if out.is_empty() {
            return Err(Error::Domain("max weight must be positive".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    FixedPoints,
    Circle,
    Measure,
    NormalizeFpc,
    NormalizeCc,
    Barycenter,
    Markings,
    CenterUniqueness,
    Roundtrip,
    Action,
    Dimension,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::FixedPoints,
        Suite::Circle,
        Suite::Measure,
        Suite::NormalizeFpc,
        Suite::NormalizeCc,
        Suite::Barycenter,
        Suite::Markings,
        Suite::CenterUniqueness,
        Suite::Roundtrip,
        Suite::Action,
        Suite::Dimension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FixedPoints => "fixed-points",
            Suite::Circle => "circle",
            Suite::Measure => "measure",
            Suite::NormalizeFpc => "normalize-fpc",
            Suite::NormalizeCc => "normalize-cc",
            Suite::Barycenter => "barycenter",
            Suite::Markings => "markings",
            Suite::CenterUniqueness => "center-uniqueness",
            Suite::Roundtrip => "roundtrip",
            Suite::Action => "action",
            Suite::Dimension => "dimension",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn run(self, o: &SuiteOptions) -> Result<Report> {
        let checks = match self {
            Suite::FixedPoints => fixed_points(o)?,
            Suite::Circle => circle(o)?,
            Suite::Measure => measure(o)?,
            Suite::NormalizeFpc => normalize_fpc(o)?,
            Suite::NormalizeCc => normalize_cc(o)?,
            Suite::Barycenter => barycenter(o)?,
            Suite::Markings => markings(o)?,
            Suite::CenterUniqueness => center_uniqueness(o)?,
            Suite::Roundtrip => roundtrip(o)?,
            Suite::Action => action(o)?,
            Suite::Dimension => dimension(o)?,
        };
        Ok(Report::new(self, o.seed, checks))
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn min_pairwise_distance(pts: &[Complex]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Points closer than this are not considered distinct.
const DISTINCT: f64 = 1e-6;

// ---------------------------------------------------------------- fixed points

#[derive(Default)]
struct FixedPointTrial {
    one_interior: bool,
    boundary_ok: bool,
    min_multiplier: f64,
    solutions_ok: bool,
    solution_residual: f64,
}

fn fixed_points(o: &SuiteOptions) -> Result<Vec<Check>> {
    let degrees = o.degrees(&[2, 3, 4, 5, 6])?;
    let trials = o.trials(50)?;
    let tol = tolerances();
    let mut rng = seeded(o.seed);
    let inputs: Vec<(BlaschkeProduct, Complex)> = degrees
        .iter()
        .flat_map(|&d| (0..trials).map(move |_| d))
        .map(|d| (fixed_point_centered(&mut rng, d, ZERO_RADIUS), circle_point(&mut rng)))
        .collect();

    let results: Vec<FixedPointTrial> = inputs
        .par_iter()
        .map(|(beta, c)| {
            let d = beta.degree();
            let mut t = FixedPointTrial { min_multiplier: f64::NAN, solution_residual: f64::NAN, ..Default::default() };
            if let Ok(r) = beta.fixed_points() {
                t.one_interior = r.interior.is_some_and(|p| p.norm() < tol.eval);
                t.boundary_ok = r.boundary.len() == d - 1
                    && r.boundary_multiplicities.iter().all(|&k| k == 1)
                    && min_pairwise_distance(&r.boundary) > DISTINCT;
                if !r.boundary_multipliers.is_empty() {
                    t.min_multiplier = r.boundary_multipliers.iter().copied().fold(f64::INFINITY, f64::min);
                }
            }
            if let Ok(sol) = beta.preimages(*c) {
                t.solutions_ok = sol.len() == d
                    && sol.iter().all(|z| (z.norm() - 1.0).abs() < tol.unimodular)
                    && min_pairwise_distance(&sol) > DISTINCT;
                t.solution_residual = max_of(sol.iter().map(|&z| (beta.apply(z) - c).norm()));
            }
            t
        })
        .collect();

    let n = results.len();
    let min_mult = results.iter().map(|t| t.min_multiplier).fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) });
    Ok(vec![
        Check::count("maps with exactly one interior fixed point", results.iter().filter(|t| t.one_interior).count(), n),
        Check::count("maps with d-1 distinct boundary fixed points", results.iter().filter(|t| t.boundary_ok).count(), n),
        Check::above("smallest boundary multiplier", min_mult, 1.0 + tol.multiplicity),
        Check::count("maps with d distinct circle solutions of f(z) = c", results.iter().filter(|t| t.solutions_ok).count(), n),
        Check::below("largest |f(z) - c| over circle solutions", max_of(results.iter().map(|t| t.solution_residual)), tol.eval),
    ])
}

// ---------------------------------------------------------------- circle tables

fn circle(o: &SuiteOptions) -> Result<Vec<Check>> {
    let degrees = o.degrees(&[2, 3])?;
    let trials = o.trials(10)?;
    let depth = o.depth(10)?;
    let tol = tolerances();
    let mut rng = seeded(o.seed);
    let maps: Vec<BlaschkeProduct> = degrees
        .iter()
        .flat_map(|&d| (0..trials).map(move |_| d))
        .map(|d| fixed_point_centered(&mut rng, d, ZERO_RADIUS))
        .collect();

    let mut built = 0;
    let mut mismatches = 0;
    let mut residual: f64 = 0.0;
    for beta in &maps {
        match build_coordinate_table(beta, depth, 0) {
            Ok(table) if table.len() == beta.degree().pow(depth) => {
                built += 1;
                let chk = check_conjugacy(beta, &table);
                mismatches += chk.index_mismatches;
                residual = max_of([residual, chk.max_residual]);
            }
            Ok(_) => {}
            Err(Error::Budget(msg)) => return Err(Error::Budget(msg)),
            Err(_) => {}
        }
    }
    Ok(vec![
        Check::count("tables with d^k entries", built, maps.len()),
        Check::count("entries with t(f(z)) != d t(z) mod 1", mismatches, 0),
        Check::below("largest geometric matching residual", residual, tol.conj),
    ])
}

// ---------------------------------------------------------------- measure

fn random_arc<R: Rng + ?Sized>(rng: &mut R, max_len: f64) -> ArcInterval {
    let start = rng.gen::<f64>() * std::f64::consts::TAU;
    let len = rng.gen_range(0.05..max_len);
    ArcInterval::new(start, start + len).expect("finite arc")
}

fn measure(o: &SuiteOptions) -> Result<Vec<Check>> {
    let degrees = o.degrees(&[2, 3])?;
    let trials = o.trials(2)?;
    let depth = o.depth(12)?;
    let mut rng = seeded(o.seed);

    let mut full_exact = 0;
    let mut full_total = 0;
    let mut additive = 0;
    let mut additive_total = 0;
    let mut balance_worst: f64 = 0.0;
    let mut arc_error: f64 = 0.0;
    let mut balance_failures = 0;

    for &d in &degrees {
        let maps: Vec<BlaschkeProduct> = std::iter::once(BlaschkeProduct::power(d))
            .chain((0..trials).map(|_| fixed_point_centered(&mut rng, d, ZERO_RADIUS)))
            .collect();
        let bound = 10.0 * (d as f64).powi(1 - depth as i32);
        for (i, beta) in maps.iter().enumerate() {
            for k in 1..=depth {
                let s = PreimageSample::new(beta, k)?;
                let m = s.measure(&ArcInterval::full());
                full_total += 1;
                if m.count == m.total && m.total == (d as u64).pow(k) {
                    full_exact += 1;
                }
            }
            let s = PreimageSample::new(beta, depth)?;
            for _ in 0..50 {
                let arc = random_arc(&mut rng, 6.0);
                let cut = rng.gen_range(arc.start()..arc.end());
                let left = ArcInterval::new(arc.start(), cut)?;
                let right = ArcInterval::new(cut, arc.end())?;
                additive_total += 1;
                if s.measure(&left).count + s.measure(&right).count == s.measure(&arc).count {
                    additive += 1;
                }
                if i == 0 {
                    let exact = arc.length() / std::f64::consts::TAU;
                    arc_error = max_of([arc_error, (s.measure(&arc).value - exact).abs()]);
                }
            }
            for _ in 0..10 {
                let arc = random_arc(&mut rng, 3.0);
                match s.balance(beta, &arc) {
                    Ok(r) if r.components.len() == d => {
                        balance_worst = max_of([balance_worst, r.max_deviation / bound]);
                    }
                    _ => balance_failures += 1,
                }
            }
        }
    }
    Ok(vec![
        Check::count("depths at which the full circle has measure exactly 1", full_exact, full_total),
        Check::count("split arcs with exactly additive counts", additive, additive_total),
        Check::count("balanced checks that failed to run", balance_failures, 0),
        Check::below("largest balanced deviation / (10 d^(1-k))", balance_worst, 1.0),
        Check::below("largest |measure - arc length| for z^d", arc_error, 1e-3),
    ])
}

// ---------------------------------------------------------------- normal forms

struct NormalTrial {
    count_ok: bool,
    residual: f64,
}

fn normal_inputs<F>(o: &SuiteOptions, mut make: F) -> Result<Vec<BlaschkeProduct>>
where
    F: FnMut(&mut SeededRng, usize) -> BlaschkeProduct,
{
    let degrees = o.degrees(&[2, 3, 4, 5])?;
    let trials = o.trials(50)?;
    let mut rng = seeded(o.seed);
    Ok(degrees.iter().flat_map(|&d| (0..trials).map(move |_| d)).map(|d| make(&mut rng, d)).collect())
}

fn normal_checks(results: &[NormalTrial], count_name: &str) -> Vec<Check> {
    vec![
        Check::count(count_name, results.iter().filter(|t| t.count_ok).count(), results.len()),
        Check::below("largest normal-form residual", max_of(results.iter().map(|t| t.residual)), tolerances().eval),
    ]
}

fn normalize_fpc(o: &SuiteOptions) -> Result<Vec<Check>> {
    // φ = h ∘ β ∘ h⁻¹ for a random fixed-point-centered β, so φ has an
    // attracting fixed point away from 0.
    let inputs = normal_inputs(o, |rng, d| {
        let beta = fixed_point_centered(rng, d, ZERO_RADIUS);
        let h = automorphism(rng, SCRAMBLE_RADIUS).inverse();
        beta.sandwich(&h, &h.inverse()).expect("conjugate of a product")
    })?;
    let results: Vec<NormalTrial> = inputs
        .par_iter()
        .map(|phi| match normalize_fixed_point_centered(phi) {
            Ok(out) => {
                let d = phi.degree();
                let anchors: Vec<Complex> = out.iter().map(|(_, h)| h.apply(ONE)).collect();
                let residual = max_of(out.iter().map(|(beta, h)| {
                    let conj = max_of(probe_points().iter().map(|&z| (phi.apply(h.apply(z)) - h.apply(beta.apply(z))).norm()));
                    max_of([beta.apply(ZERO).norm(), (beta.apply(ONE) - ONE).norm(), conj])
                }));
                NormalTrial { count_ok: out.len() == d - 1 && min_pairwise_distance(&anchors) > DISTINCT, residual }
            }
            Err(_) => NormalTrial { count_ok: false, residual: f64::NAN },
        })
        .collect();
    Ok(normal_checks(&results, "inputs with exactly d-1 distinct normalizations"))
}

fn normalize_cc(o: &SuiteOptions) -> Result<Vec<Check>> {
    let inputs = normal_inputs(o, |rng, d| blaschke(rng, d, ZERO_RADIUS))?;
    let results: Vec<NormalTrial> = inputs
        .par_iter()
        .map(|phi| match normalize_critically_centered(phi) {
            Ok(out) => {
                let anchors: Vec<Complex> = out.iter().map(|(_, h)| h.apply(ONE)).collect();
                let residual = max_of(out.iter().map(|(beta, h)| {
                    let comp = max_of(probe_points().iter().map(|&z| (phi.apply(h.apply(z)) - beta.apply(z)).norm()));
                    let crit = critical_sum(beta).map_or(f64::NAN, |s| s.norm());
                    max_of([crit, (beta.apply(ONE) - ONE).norm(), comp])
                }));
                NormalTrial { count_ok: out.len() == phi.degree() && min_pairwise_distance(&anchors) > DISTINCT, residual }
            }
            Err(_) => NormalTrial { count_ok: false, residual: f64::NAN },
        })
        .collect();
    Ok(normal_checks(&results, "inputs with exactly d distinct normalizations"))
}

// ---------------------------------------------------------------- barycenter

fn barycenter(o: &SuiteOptions) -> Result<Vec<Check>> {
    let trials = o.trials(100)?;
    let tol = tolerances();
    let mut rng = seeded(o.seed);
    let inputs: Vec<(Vec<Complex>, MobiusAutomorphism, Vec<Complex>)> = (0..trials)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            let pts = configuration(&mut rng, n, ZERO_RADIUS);
            let g = automorphism(&mut rng, SCRAMBLE_RADIUS);
            // a rotated, scaled set of m-th roots of unity, m ≥ 2
            let m = rng.gen_range(2..=6);
            let r = rng.gen_range(0.05..ZERO_RADIUS);
            let u = circle_point(&mut rng);
            let sym = (0..m).map(|k| u * r * on_circle(std::f64::consts::TAU * k as f64 / m as f64)).collect();
            (pts, g, sym)
        })
        .collect();

    let results: Vec<(f64, f64, f64)> = inputs
        .par_iter()
        .map(|(pts, g, sym)| {
            let Ok(b) = conformal_barycenter(pts) else { return (f64::NAN, f64::NAN, f64::NAN) };
            // residual recomputed through the automorphism sending p to 0
            let residual = MobiusAutomorphism::to_zero(b.point)
                .map_or(f64::NAN, |h| pts.iter().map(|&c| h.apply(c)).sum::<Complex>().norm());
            let moved: Vec<Complex> = pts.iter().map(|&c| g.apply(c)).collect();
            let equivariance = conformal_barycenter(&moved).map_or(f64::NAN, |q| (q.point - g.apply(b.point)).norm());
            let symmetric = conformal_barycenter(sym).map_or(f64::NAN, |q| q.point.norm());
            (residual, equivariance, symmetric)
        })
        .collect();

    Ok(vec![
        Check::below("largest barycenter residual", max_of(results.iter().map(|r| r.0)), tol.barycenter),
        Check::below("largest Mobius-equivariance error", max_of(results.iter().map(|r| r.1)), tol.eval),
        Check::below("largest |p| for symmetric configurations", max_of(results.iter().map(|r| r.2)), tol.barycenter),
    ])
}

// ---------------------------------------------------------------- markings

/// Weight- and dynamics-preserving permutations, by exhaustive search over
/// all permutations.
fn brute_force_automorphisms(s: &MappingSchema) -> Vec<Vec<usize>> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for k in 0..n {
            out = out
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..=k).map(move |i| {
                        let mut q = p.clone();
                        q.insert(i, k);
                        q
                    })
                })
                .collect();
        }
        out
    }
    permutations(s.len())
        .into_iter()
        .filter(|p| (0..s.len()).all(|v| s.weight(p[v]) == s.weight(v) && p[s.image(v)] == s.image(p[v])))
        .collect()
}

/// Markings of the center map counted by brute force: every `q(v)` ranges
/// over the `L`-th roots of unity, `L = Π(D_c − 1) Π d(v)`, which contain
/// all solutions of `q(v)^{d(v)} = q(F(v))`. Exponents are compared in
/// integer arithmetic.
fn brute_force_center_markings(s: &MappingSchema) -> Result<u64> {
    let cyc: u64 = s.cycles().iter().map(|c| c.degree - 1).product();
    let tree: u64 = s.tree_vertices().iter().map(|&v| s.degree(v) as u64).product();
    let l = cyc * tree;
    let n = s.len() as u32;
    let space = l.checked_pow(n).filter(|&x| x <= BRUTE_FORCE_LIMIT);
    let Some(space) = space else {
        return Err(Error::Budget(format!("brute-force marking search of size {l}^{n}")));
    };
    let autos = brute_force_automorphisms(s);
    let mut count = 0;
    let mut k = vec![0u64; s.len()];
    for code in 0..space {
        let mut c = code;
        for slot in k.iter_mut() {
            *slot = c % l;
            c /= l;
        }
        // β₀ on ι(v) has degree d(ι(v)) = d(v)
        let equivariant = (0..s.len()).all(|v| (k[v] * s.degree(v) as u64) % l == k[s.image(v)]);
        if equivariant {
            count += autos.len() as u64;
        }
    }
    Ok(count)
}

fn distinct_markings(m: &ModelMap) -> Result<(usize, f64)> {
    let all = boundary_markings(m)?;
    let residual = max_of(all.iter().map(|mk| mk.equivariance_residual(m)));
    let mut distinct: Vec<&crate::model::BoundaryMarking> = Vec::new();
    for mk in &all {
        let dup = distinct.iter().any(|o| {
            o.automorphism == mk.automorphism && o.points.iter().zip(&mk.points).all(|(a, b)| (a - b).norm() < DISTINCT)
        });
        if !dup {
            distinct.push(mk);
        }
    }
    Ok((distinct.len(), residual))
}

fn markings(o: &SuiteOptions) -> Result<Vec<Check>> {
    let schemata = o.schemata(3)?;
    let trials = o.trials(10)?;
    let mut rng = seeded(o.seed);
    let members: Vec<Vec<ModelMap>> = schemata
        .iter()
        .map(|s| (0..trials).map(|_| random_member(s, &mut rng)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut brute_ok = 0;
    let mut center_ok = 0;
    let mut member_ok = 0;
    let mut residual: f64 = 0.0;
    for (s, ms) in schemata.iter().zip(&members) {
        let cyc: u64 = s.cycles().iter().map(|c| c.degree - 1).product();
        let tree: u64 = s.tree_vertices().iter().map(|&v| s.degree(v) as u64).product();
        let formula = automorphism_group(s).len() as u64 * cyc * tree;
        if brute_force_center_markings(s)? == formula {
            brute_ok += 1;
        }
        if distinct_markings(&ModelMap::center(s)).is_ok_and(|(n, _)| n as u64 == formula) {
            center_ok += 1;
        }
        let counts: Vec<Option<(usize, f64)>> = ms.par_iter().map(|m| distinct_markings(m).ok()).collect();
        for c in counts {
            match c {
                Some((n, r)) => {
                    member_ok += usize::from(n as u64 == formula);
                    residual = max_of([residual, r]);
                }
                None => residual = f64::NAN,
            }
        }
    }
    let n = schemata.len();
    Ok(vec![
        Check::count("schemata whose brute-force center count matches |Aut| P(D-1) P d", brute_ok, n),
        Check::count("schemata whose enumerated center markings match", center_ok, n),
        Check::count("random members with matching marking count", member_ok, n * trials),
        Check::below("largest marking equivariance residual", residual, tolerances().eval),
    ])
}

// ---------------------------------------------------------------- center uniqueness

/// Every critical orbit lands within `tol_pcf` of the fixed point 0 of a
/// periodic component within `|S|` steps.
fn critically_finite(m: &ModelMap) -> Result<bool> {
    let orbits = m.critical_orbits(tolerances().pcf, m.schema().len())?;
    Ok(orbits.iter().all(|o| o.iterations.is_some()))
}

fn center_uniqueness(o: &SuiteOptions) -> Result<Vec<Check>> {
    let schemata = o.schemata(3)?;
    let trials = o.trials(1000)?;
    let mut rng = seeded(o.seed);
    let mut inputs = Vec::new();
    for (si, s) in schemata.iter().enumerate() {
        for t in 0..trials {
            let mut p = random_parameters(s, &mut rng);
            // every twentieth sample is shrunk far below the threshold
            if t % 20 == 19 {
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                let target = rng.gen_range(1e-14..1e-10);
                p.iter_mut().for_each(|x| *x *= target / norm);
            }
            inputs.push((si, p));
        }
    }

    let centers_positive = schemata.iter().filter(|s| critically_finite(&ModelMap::center(s)).unwrap_or(false)).count();
    // (is tiny, tests positive, predicates agree)
    let results: Vec<Option<(bool, bool, bool)>> = inputs
        .par_iter()
        .map(|(si, p)| {
            let m = sample(&schemata[*si], p).ok()?;
            let positive = critically_finite(&m).ok()?;
            let tiny = p.iter().map(|x| x * x).sum::<f64>().sqrt() < PCF_NORM;
            Some((tiny, positive, positive == m.is_post_critically_finite()))
        })
        .collect();

    let ok: Vec<(bool, bool, bool)> = results.iter().flatten().copied().collect();
    let large = ok.iter().filter(|r| !r.0).count();
    let tiny = ok.iter().filter(|r| r.0).count();
    Ok(vec![
        Check::count("center maps testing post-critically finite", centers_positive, schemata.len()),
        Check::count("samples that failed to evaluate", results.len() - ok.len(), 0),
        Check::count("samples with |p| >= 1e-8 testing negative", ok.iter().filter(|r| !r.0 && !r.1).count(), large),
        Check::count("samples with |p| < 1e-8 testing positive", ok.iter().filter(|r| r.0 && r.1).count(), tiny),
        Check::count("samples where orbit and zero tests agree", ok.iter().filter(|r| r.2).count(), ok.len()),
    ])
}

// ---------------------------------------------------------------- straightening round trip

fn roundtrip(o: &SuiteOptions) -> Result<Vec<Check>> {
    let schemata = o.schemata(3)?;
    let trials = o.trials(10)?;
    let mut rng = seeded(o.seed);
    let mut inputs = Vec::new();
    for s in &schemata {
        for _ in 0..trials {
            let m = random_member(s, &mut rng)?;
            let coords: Vec<MobiusAutomorphism> = (0..s.len()).map(|_| automorphism(&mut rng, SCRAMBLE_RADIUS)).collect();
            inputs.push((m, coords));
        }
    }

    // (right count, outputs, equivalent outputs, members, residual)
    let results: Vec<(bool, usize, usize, usize, f64)> = inputs
        .par_iter()
        .map(|(m, coords)| {
            let order = symmetry_group(m.schema()).len();
            let Ok(b) = BasinSystem::from_model(m, coords) else { return (false, order, 0, 0, f64::NAN) };
            let Ok(out) = straighten(&b) else { return (false, order, 0, 0, f64::NAN) };
            let equivalent = out
                .iter()
                .filter(|st| matches!(conjugacy_equivalent(m, &st.model, STRAIGHTEN_TOL), Ok(Some(_))))
                .count();
            let members = out.iter().filter(|st| st.model.validate_membership().is_ok()).count();
            let residual = max_of(out.iter().map(|st| st.residual(&b)));
            (out.len() == order, out.len(), equivalent, members, residual)
        })
        .collect();

    let outputs: usize = results.iter().map(|r| r.1).sum();
    Ok(vec![
        Check::count("systems with exactly |G(S)| straightenings", results.iter().filter(|r| r.0).count(), results.len()),
        Check::count("straightenings equivalent to the original", results.iter().map(|r| r.2).sum(), outputs),
        Check::count("straightenings in B(S)", results.iter().map(|r| r.3).sum(), outputs),
        Check::below("largest factor residual", max_of(results.iter().map(|r| r.4)), STRAIGHTEN_TOL),
    ])
}

// ---------------------------------------------------------------- action

#[derive(Default)]
struct ActionTally {
    identity: f64,
    composition: f64,
    partition_ok: bool,
    planted_found: usize,
    planted: usize,
    kernel_subgroup: bool,
    kernel_divides: bool,
}

fn action_on_schema(s: &MappingSchema, probes: &[ModelMap], planted: &[(usize, usize)]) -> Result<ActionTally> {
    let group = symmetry_group(s);
    let e = SymmetryElement::identity(s.len());
    let identity = max_of(probes.iter().map(|m| act(&e, m).map_or(f64::NAN, |x| x.distance(m))));

    let orbits: Vec<HashMap<SymmetryElement, ModelMap>> =
        probes.par_iter().map(|m| orbit(m).map(|o| o.into_iter().collect())).collect::<Result<_>>()?;
    let composition = max_of(probes.par_iter().zip(&orbits).map(|(_, images)| {
        max_of(group.iter().map(|g1| {
            let Ok(outer) = orbit(&images[g1]) else { return f64::NAN };
            let outer: HashMap<_, _> = outer.into_iter().collect();
            max_of(group.iter().map(|g2| outer[g2].distance(&images[&g2.compose(g1)])))
        }))
    }).collect::<Vec<_>>());

    // related by some orbit image vs related by conjugacy_equivalent
    let n = probes.len();
    let mut by_orbit = vec![vec![false; n]; n];
    let mut by_witness = vec![vec![false; n]; n];
    let mut witnesses_ok = true;
    for i in 0..n {
        for j in 0..n {
            by_orbit[i][j] = orbits[i].values().any(|x| x.distance(&probes[j]) < ACTION_TOL);
            if let Some(g) = conjugacy_equivalent(&probes[i], &probes[j], ACTION_TOL)? {
                by_witness[i][j] = true;
                witnesses_ok &= act(&g, &probes[i])?.distance(&probes[j]) < ACTION_TOL;
            }
        }
    }
    let equivalence = (0..n).all(|i| {
        by_orbit[i][i]
            && (0..n).all(|j| by_orbit[i][j] == by_orbit[j][i] && (0..n).all(|k| !(by_orbit[i][j] && by_orbit[j][k]) || by_orbit[i][k]))
    });
    let planted_found = planted.iter().filter(|&&(i, j)| by_orbit[i][j] && by_witness[i][j]).count();

    let kernel = kernel_n0(s, probes, ACTION_TOL)?;
    let kernel_subgroup =
        kernel.contains(&e) && kernel.iter().all(|a| kernel.iter().all(|b| kernel.contains(&a.compose(&b.inverse()))));
    Ok(ActionTally {
        identity,
        composition,
        partition_ok: equivalence && witnesses_ok && by_orbit == by_witness,
        planted_found,
        planted: planted.len(),
        kernel_subgroup,
        kernel_divides: group.len() % kernel.len() == 0,
    })
}

fn action(o: &SuiteOptions) -> Result<Vec<Check>> {
    let schemata = o.schemata(3)?;
    let trials = o.trials(20)?;
    let mut rng = seeded(o.seed);
    let mut tallies = Vec::new();
    for s in &schemata {
        // half random members, half images of them under random elements
        let group = symmetry_group(s);
        let base = trials.div_ceil(2);
        let mut probes = (0..base).map(|_| random_member(s, &mut rng)).collect::<Result<Vec<_>>>()?;
        let mut planted = Vec::new();
        for i in 0..trials - base {
            let g = &group[rng.gen_range(0..group.len())];
            probes.push(act(g, &probes[i])?);
            planted.push((i, base + i));
        }
        tallies.push(action_on_schema(s, &probes, &planted)?);
    }
    let n = tallies.len();
    Ok(vec![
        Check::below("largest |e.m - m|", max_of(tallies.iter().map(|t| t.identity)), ACTION_TOL),
        Check::below("largest |g2.(g1.m) - (g2 g1).m|", max_of(tallies.iter().map(|t| t.composition)), ACTION_TOL),
        Check::count("schemata where orbits and equivalence partition alike", tallies.iter().filter(|t| t.partition_ok).count(), n),
        Check::count("planted orbit pairs recognized", tallies.iter().map(|t| t.planted_found).sum(), tallies.iter().map(|t| t.planted).sum()),
        Check::count("schemata whose kernel is a subgroup", tallies.iter().filter(|t| t.kernel_subgroup).count(), n),
        Check::count("schemata whose kernel order divides |G(S)|", tallies.iter().filter(|t| t.kernel_divides).count(), n),
    ])
}

// ---------------------------------------------------------------- dimension

fn dimension(o: &SuiteOptions) -> Result<Vec<Check>> {
    let schemata = o.schemata(4)?;
    let trials = o.trials(10)?;
    let tol = tolerances();
    let mut rng = seeded(o.seed);
    let mut inputs: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, s) in schemata.iter().enumerate() {
        for _ in 0..trials {
            inputs.push((i, random_parameters(s, &mut rng)));
        }
    }

    let mut length_ok = 0;
    for s in &schemata {
        let n = parameter_len(s);
        let rejects = |len: usize| matches!(sample(s, &vec![0.0; len]), Err(Error::Domain(_)));
        if n == 2 * s.total_weight() as usize && sample(s, &vec![0.0; n]).is_ok() && rejects(n - 1) && rejects(n + 1) {
            length_ok += 1;
        }
    }

    // (member, zero-chart error, symmetric-chart error)
    let results: Vec<(bool, f64, f64)> = inputs
        .par_iter()
        .map(|(i, p)| {
            let s = &schemata[*i];
            let Ok(m) = sample(s, p) else { return (false, f64::NAN, f64::NAN) };
            let zero = parameters_of(&m).map_or(f64::NAN, |q| max_of(p.iter().zip(&q).map(|(a, b)| (a - b).abs())));
            let sym = symmetric_parameters_of(&m)
                .and_then(|q| Ok((sample_symmetric(s, &q)?, q)))
                .and_then(|(m2, q)| Ok((symmetric_parameters_of(&m2)?, q)))
                .map_or(f64::NAN, |(r, q)| max_of(q.iter().zip(&r).map(|(a, b)| (a - b).abs())));
            (m.validate_membership().is_ok(), zero, sym)
        })
        .collect();

    Ok(vec![
        Check::count("schemata whose chart takes exactly 2w real parameters", length_ok, schemata.len()),
        Check::count("samples in B(S)", results.iter().filter(|r| r.0).count(), results.len()),
        Check::below("largest zero-chart round-trip error", max_of(results.iter().map(|r| r.1)), tol.chart),
        Check::below("largest symmetric-chart round-trip error", max_of(results.iter().map(|r| r.2)), tol.chart),
    ])
}
