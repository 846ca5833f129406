//! Acceptance suite. Each criterion compares the library against an oracle written here
//! independently: brute-force word enumeration, direct trigonometric evaluation, an own
//! digit-tree search and a plain residual loop.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use invset_core::filter::{closed_set, cohen_check, construct_prop_4_2, construct_thm_1, invariance_check, qmf_residual, ThmParams};
use invset_core::gfun::{construct_thm_1_2, g_sum_residual, strict_g};
use invset_core::interval::{exit_and_barrier, Interval, IntervalUnion};
use invset_core::rational::{format_rational, half, halved, int, pow2, rat, to_f64};
use invset_core::sampler::{absorption_estimate, lemma_4_4_check, simulate, Driver, Start};
use invset_core::spectral::{code_k, phi_hat, run_recursion, sum_phi_hat, xi_t_of_k};
use invset_core::symbolic::{check_prop_2_2, rho_to_set, GeneratorFamily, GeneratorRule, SubshiftInput};
use invset_core::{ClosedSet1D, Rational, SftSubshift, SymbolSeq, TransitionFn};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Master seed for every sampled quantity in the suite.
pub const SEED: u64 = 20_240_611;

// Pinned tolerances.
pub const EXIT_VALUE_TOL: f64 = 1e-15;
pub const QMF_TOL_BUILTIN: f64 = crate::run::QMF_TOL_BUILTIN;
pub const QMF_TOL_CONSTRUCTED: f64 = crate::run::QMF_TOL_CONSTRUCTED;
pub const VIETE_TOL: f64 = 1e-8;
pub const SUM_WINDOW: (f64, f64) = (0.995, 1.0);
pub const ABSORPTION_EPS_EXP: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Enumeration depth at most 10, at most 500 paths.
    Quick,
    Full,
}

impl Level {
    fn depth(self, full: u32) -> u32 {
        match self {
            Level::Quick => full.min(10),
            Level::Full => full,
        }
    }

    fn paths(self, full: usize) -> usize {
        match self {
            Level::Quick => full.min(500),
            Level::Full => full,
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(format!("unknown level {other:?} (quick or full)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    /// Runtime target; exceeding it is reported, not failed.
    pub budget: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let over = if self.elapsed > self.budget { ", over budget" } else { "" };
        write!(
            f,
            "criterion {:>2}: {} {} | {} [{:.2} s of {} s{over}]",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

type Outcome = (bool, String);
type Check = fn(Level) -> Outcome;

const CRITERIA: [(u32, &str, u64, Check); 11] = [
    (1, "cos3 pair exactness", 1, criterion_1),
    (2, "Shannon exits and Cohen check", 1, criterion_2),
    (3, "QMF identity", 5, criterion_3),
    (4, "Haar product against sinc²", 30, criterion_4),
    (5, "log-modulus pipeline on {1/3, 2/3}", 60, criterion_5),
    (6, "coding identity", 5, criterion_6),
    (7, "path distance bounds", 60, criterion_7),
    (8, "finite-type battery", 60, criterion_8),
    (9, "constructed g-functions", 60, criterion_9),
    (10, "Monte Carlo consistency", 120, criterion_10),
    (11, "automaton distance oracle", 30, criterion_11),
];

pub fn criterion_ids() -> impl Iterator<Item = u32> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion by number.
pub fn verify_one(id: u32, level: Level) -> Option<CriterionResult> {
    let &(id, name, budget, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (pass, detail) = match std::panic::catch_unwind(|| check(level)) {
        Ok(r) => r,
        Err(e) => (false, format!("panicked: {}", panic_text(&e))),
    };
    Some(CriterionResult { id, name, pass, detail, elapsed: start.elapsed(), budget: Duration::from_secs(budget) })
}

pub fn verify_all(level: Level) -> Vec<CriterionResult> {
    criterion_ids().filter_map(|id| verify_one(id, level)).collect()
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
}

/// Collects failed clauses; passes when none failed.
#[derive(Default)]
struct Clauses {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Clauses {
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn finish(self) -> Outcome {
        let mut parts = self.notes;
        if !self.failed.is_empty() {
            parts.insert(0, format!("failed: {}", self.failed.join("; ")));
        }
        (self.failed.is_empty(), parts.join("; "))
    }
}

fn points(p: &[(i64, i64)]) -> ClosedSet1D {
    ClosedSet1D::points(p.iter().map(|&(a, b)| rat(a, b)))
}

fn pair() -> ClosedSet1D {
    points(&[(1, 3), (2, 3)])
}

fn shannon_set() -> ClosedSet1D {
    ClosedSet1D::intervals(vec![
        Interval::new(rat(0, 1), rat(1, 4), true, false).expect("valid interval"),
        Interval::closed(rat(3, 4), rat(1, 1)),
    ])
}

fn builtin(name: &str) -> TransitionFn {
    TransitionFn::builtin(name).expect("builtin filter")
}

fn random_unit_rational(rng: &mut impl Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(2..=max_den);
    rat(rng.gen_range(1..d), d)
}

// ---------------------------------------------------------------- 1

fn criterion_1(_: Level) -> Outcome {
    let mut c = Clauses::default();
    let b = pair();
    match exit_and_barrier(&b) {
        Ok((e, bb)) => {
            c.require(e == points(&[(1, 6), (5, 6)]), format!("exits {e}"));
            c.require(bb == b, format!("barriers {bb}"));
            c.note(format!("exits {e}, barriers {bb}"));
        }
        Err(e) => c.require(false, format!("exit_and_barrier: {e}")),
    }
    let p = builtin("cos3");
    match invariance_check(&p, &b) {
        Ok(v) => c.require(v.pass, format!("invariance {:?}", v.worst)),
        Err(e) => c.require(false, e.to_string()),
    }
    for x in [1.0 / 6.0, 5.0 / 6.0] {
        let direct = (3.0 * PI * x).cos().powi(2);
        c.require(direct <= EXIT_VALUE_TOL, format!("cos²(3π·{x}) = {direct:e}"));
    }
    for x in [rat(1, 6), rat(5, 6)] {
        let v = p.eval(&x);
        c.require(v.abs() <= EXIT_VALUE_TOL, format!("p({x}) = {v:e}"));
        c.require(p.eval_exact(&x).is_some_and(|v| v.is_zero()), format!("p({x}) not an exact zero"));
    }
    c.finish()
}

// ---------------------------------------------------------------- 2

/// Direct scan of `min_{ξ∈T, 1≤j≤j_max} 1_B(ξ/2^j mod 1)` for the Shannon indicator.
fn shannon_infimum(t: &[(Rational, Rational)], j_max: u32, grid: i64) -> (f64, Option<String>) {
    let inside = |x: &Rational| {
        let f = x - x.floor();
        f < rat(1, 4) || f >= rat(3, 4)
    };
    let mut worst = None;
    for (lo, hi) in t {
        for i in 0..=grid {
            let xi = lo + (hi - lo) * rat(i, grid);
            let mut y = xi.clone();
            for j in 1..=j_max {
                y = halved(&y);
                if !inside(&y) {
                    worst.get_or_insert_with(|| format!("ξ = {}, j = {j}", format_rational(&xi)));
                }
            }
        }
    }
    (if worst.is_some() { 0.0 } else { 1.0 }, worst)
}

fn criterion_2(_: Level) -> Outcome {
    let mut c = Clauses::default();
    let b = shannon_set();
    match exit_and_barrier(&b) {
        Ok((e, _)) => {
            let want = ClosedSet1D::intervals(vec![Interval::new(rat(3, 8), rat(5, 8), true, false).expect("valid")]);
            c.require(e == want, format!("exits {e}"));
            c.note(format!("exits {e}"));
        }
        Err(e) => c.require(false, e.to_string()),
    }
    let p = builtin("shannon");
    match invariance_check(&p, &b) {
        Ok(v) => c.require(v.pass, format!("invariance {:?}", v.worst)),
        Err(e) => c.require(false, e.to_string()),
    }
    let t = closed_set(rat(-1, 2), rat(1, 2));
    let v = cohen_check(&p, &t, 30, 4096);
    let (direct, at) = shannon_infimum(&[(rat(-1, 2), rat(1, 2))], 30, 4096);
    c.require(v.pass, "cohen verdict");
    c.require(v.infimum == 1.0, format!("infimum {} at {:?}", v.infimum, v.argmin));
    c.require(v.infimum == direct, format!("library infimum {} vs direct scan {direct}", v.infimum));
    c.note(format!("T = {t}: infimum {} (direct scan {direct}, first zero {})", v.infimum, at.as_deref().unwrap_or("none")));
    c.finish()
}

// ---------------------------------------------------------------- 3

/// `max |p(ξ/2) + p(ξ/2 + 1/2) − 1|` over `i/n` and the region endpoints, both halves.
pub fn qmf_oracle(p: &TransitionFn, n: i64) -> f64 {
    let mut xs: Vec<Rational> = (0..=n).map(|i| rat(i, n)).collect();
    for e in p.region_endpoints() {
        // Region endpoints live in [0,1]; they are ξ/2 for ξ = 2e and ξ/2 + 1/2 for ξ = 2e − 1.
        let twice = &e * int(2);
        xs.push(twice.clone());
        xs.push(twice - Rational::one());
    }
    xs.par_iter()
        .filter(|x| !x.is_negative() && **x <= Rational::one())
        .map(|x| {
            let a = x * half();
            (p.eval(&a) + p.eval(&(a + half())) - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Filters the QMF criterion is run on: the builtins and filters built for several sets.
pub fn qmf_fixtures() -> Vec<(String, TransitionFn)> {
    let mut out: Vec<(String, TransitionFn)> =
        ["haar", "cos3", "shannon"].iter().map(|n| (n.to_string(), builtin(n))).collect();
    let sets = [
        ("{1/3, 2/3}", pair()),
        ("{1/7, 2/7, 4/7}", points(&[(1, 7), (2, 7), (4, 7)])),
        ("{1/5, 2/5, 3/5, 4/5}", points(&[(1, 5), (2, 5), (3, 5), (4, 5)])),
    ];
    for (label, b) in sets {
        if let Ok(p) = construct_prop_4_2(&b) {
            out.push((format!("distance filter for {label}"), p));
        }
        if let Ok(p) = construct_thm_1(&b, &ThmParams::default()) {
            out.push((format!("log-modulus filter for {label}"), p));
        }
    }
    out
}

/// Runs the residual criterion over the given filters.
pub fn qmf_criterion(filters: &[(String, TransitionFn)]) -> Outcome {
    let mut c = Clauses::default();
    let mut worst: (f64, &str) = (0.0, "");
    for (label, p) in filters {
        let tol = if p.regions().is_some() { QMF_TOL_CONSTRUCTED } else { QMF_TOL_BUILTIN };
        let lib = qmf_residual(p, 4096);
        let own = qmf_oracle(p, 4096);
        c.require(lib <= tol, format!("{label}: residual {lib:e} > {tol:e}"));
        c.require(own <= tol, format!("{label}: direct residual {own:e} > {tol:e}"));
        if lib.max(own) >= worst.0 {
            worst = (lib.max(own), label);
        }
    }
    c.note(format!("{} filters, worst residual {:e} ({})", filters.len(), worst.0, worst.1));
    c.finish()
}

fn criterion_3(_: Level) -> Outcome {
    let filters = qmf_fixtures();
    let constructed = filters.iter().filter(|(_, p)| p.regions().is_some()).count();
    if constructed < 6 {
        return (false, format!("only {constructed} of 6 constructed filters could be built"));
    }
    qmf_criterion(&filters)
}

// ---------------------------------------------------------------- 4

fn sinc2(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let s = (PI * x).sin() / (PI * x);
        s * s
    }
}

fn criterion_4(_: Level) -> Outcome {
    let mut c = Clauses::default();
    let p = builtin("haar");
    let mut worst = 0.0f64;
    for i in 0..128i64 {
        // 128 points spread over (-8, 8), avoiding nothing: integers are exact zeros or 1.
        let x = rat(-8 * 127 + 16 * i, 127);
        let b = phi_hat(&p, &x, 48);
        let want = sinc2(to_f64(&x));
        c.require(b.contains(want, VIETE_TOL), format!("x = {x}: [{}, {}] vs {want}", b.lower, b.upper));
        worst = worst.max((b.lower - want).abs().max((b.upper - want).abs()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lowest = f64::INFINITY;
    for _ in 0..20 {
        let x0 = random_unit_rational(&mut rng, 1000);
        let s = sum_phi_hat(&p, &x0, 512, 48);
        c.require(s.lower >= SUM_WINDOW.0 && s.upper <= SUM_WINDOW.1, format!("sum at {x0}: [{}, {}]", s.lower, s.upper));
        lowest = lowest.min(s.lower);
    }
    c.note(format!("max bracket deviation {worst:e}; lowest sum bracket {lowest:.6}"));
    c.finish()
}

// ---------------------------------------------------------------- 5

fn criterion_5(_: Level) -> Outcome {
    let mut c = Clauses::default();
    let b = pair();
    let p = match construct_thm_1(&b, &ThmParams::default()) {
        Ok(p) => p,
        Err(e) => return (false, format!("constructor failed: {e}")),
    };
    let r = p.regions().expect("constructed filter has regions");
    let s = r.step1_report(r.depth);
    c.require(s.all(), format!("step-1 clauses {s:?}"));
    // The same relations checked here on the exact point sets.
    let exits = [rat(1, 6), rat(5, 6)];
    let interior = |u: &IntervalUnion, x: &Rational| u.parts().iter().any(|i| i.lo < *x && *x < i.hi);
    c.require(exits.iter().all(|x| interior(&r.n_e, x)), "exits not interior to N_e");
    c.require([rat(1, 3), rat(2, 3)].iter().all(|x| r.n_b.contains(x)), "barriers outside N_b");
    c.require(r.n_e.intersect(&r.n_b).is_empty(), "N_e meets N_b");
    c.require([rat(0, 1), half(), rat(1, 1)].iter().all(|x| !r.n_e.contains(x) && !r.n_b.contains(x)), "0, 1/2 or 1 in N_e ∪ N_b");
    c.require(r.n_e.star().closure() == r.n_b, "closure(N_e*) ≠ N_b");

    let sum = sum_phi_hat(&p, &rat(1, 3), 64, 64);
    c.require(sum.upper == 0.0 && sum.all_exact_zero(), format!("sum [{}, {}], {} of {} exact", sum.lower, sum.upper, sum.exact_zero_terms, sum.terms));

    let mut cycles = true;
    for idx in 0..8 {
        match simulate(Driver::Filter(&p), &Start::Point(rat(1, 3)), 40, SEED, idx) {
            Ok(path) => {
                let states = path.interval_states().expect("interval path");
                cycles &= states.iter().enumerate().all(|(t, x)| *x == if t % 2 == 0 { rat(1, 3) } else { rat(2, 3) });
            }
            Err(e) => c.require(false, format!("simulate: {e}")),
        }
    }
    c.require(cycles, "path from 1/3 leaves the 2-cycle");
    c.note(format!("N_e = {}, N_b = {}, sum = 0 with {} exact zero terms", r.n_e, r.n_b, sum.exact_zero_terms));
    c.finish()
}

// ---------------------------------------------------------------- 6

/// Digits of `k` under the coding, and the recursion they drive, written out directly.
fn coded_state(x0: &Rational, k: i64, t: u32) -> Rational {
    let mut x = x0.clone();
    let m = if k >= 0 { k } else { -k - 1 };
    for i in 0..t {
        let bit = if i < 63 { (m >> i) & 1 } else { 0 };
        let digit = if k >= 0 { bit } else { 1 - bit };
        x = (x + int(digit)) / int(2);
    }
    x
}

fn criterion_6(_: Level) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let x0 = random_unit_rational(&mut rng, 500);
        let k = rng.gen_range(-64i64..=64);
        let t = rng.gen_range(1u32..=40);
        let closed = xi_t_of_k(&x0, k, t);
        let own = coded_state(&x0, k, t);
        let lib = code_k(k, t as usize).map(|w| run_recursion(&x0, w.symbols())[t as usize].clone());
        if closed != own || lib.as_ref().ok() != Some(&own) {
            failures.push(format!("x0 = {x0}, k = {k}, t = {t}"));
        }
    }
    let detail = format!("1000 triples, {} mismatches{}", failures.len(), failures.first().map(|f| format!(", first {f}")).unwrap_or_default());
    (failures.is_empty(), detail)
}

// ---------------------------------------------------------------- 7

struct PathBounds {
    b: Vec<Rational>,
    exits: Vec<Rational>,
    alpha: Rational,
}

impl PathBounds {
    fn dist(set: &[Rational], x: &Rational) -> Rational {
        set.iter().map(|e| (x - e).abs()).min().expect("nonempty")
    }

    /// Both bounds at step `t`.
    fn holds(&self, x: &Rational, t: u32) -> bool {
        let floor = &self.alpha * pow2(-(t as i64));
        Self::dist(&self.b, x) >= floor && (t == 0 || Self::dist(&self.exits, x) >= floor)
    }

    /// Violations in the full digit tree below `x` down to `depth`.
    fn tree(&self, x: &Rational, t: u32, depth: u32) -> u64 {
        let here = u64::from(!self.holds(x, t));
        if t == depth {
            return here;
        }
        let h = half();
        let left = x * &h;
        let right = &left + &h;
        here + self.tree(&left, t + 1, depth) + self.tree(&right, t + 1, depth)
    }
}

fn criterion_7(level: Level) -> Outcome {
    let mut c = Clauses::default();
    let b = pair();
    let x0 = rat(1, 4);
    let depth = level.depth(16);
    let samples = match level {
        Level::Quick => 500,
        Level::Full => 10_000,
    };
    match lemma_4_4_check(&b, &x0, depth, samples, 40, SEED) {
        Ok(r) => {
            c.require(r.alpha == rat(1, 12), format!("alpha {}", format_rational(&r.alpha)));
            c.require(r.pass(), format!("{} library violations, first {:?}", r.violations, r.first_violation));
            c.note(format!("library: {} states, min ratio {:.4}", r.checked, r.min_ratio));
        }
        Err(e) => c.require(false, format!("lemma check: {e}")),
    }
    let bounds = PathBounds { b: vec![rat(1, 3), rat(2, 3)], exits: vec![rat(1, 6), rat(5, 6)], alpha: rat(1, 12) };
    // Split the tree at depth 4 so the halves run in parallel.
    let split = 4.min(depth);
    let mut roots = vec![x0.clone()];
    for _ in 0..split {
        roots = roots.iter().flat_map(|x| [x * half(), x * half() + half()]).collect();
    }
    let mut upper = 0u64;
    {
        // States above the split level.
        let mut layer = vec![x0.clone()];
        for t in 0..split {
            upper += layer.iter().filter(|x| !bounds.holds(x, t)).count() as u64;
            layer = layer.iter().flat_map(|x| [x * half(), x * half() + half()]).collect();
        }
    }
    let tree: u64 = upper + roots.par_iter().map(|x| bounds.tree(x, split, depth)).sum::<u64>();
    c.require(tree == 0, format!("{tree} violations in the digit tree"));
    let sampled: u64 = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
            rng.set_stream(i);
            let mut x = x0.clone();
            let mut bad = 0u64;
            for t in 1..=40u32 {
                x = (x + int(rng.gen_range(0..=1))) * half();
                bad += u64::from(!bounds.holds(&x, t));
            }
            bad
        })
        .sum();
    c.require(sampled == 0, format!("{sampled} violations on sampled paths"));
    c.note(format!("own search: 2^{depth} digit sequences and {samples} paths of length 40, {} violations", tree + sampled));
    c.finish()
}

// ---------------------------------------------------------------- 8

/// Words of length `len` that end arbitrarily long words avoiding the forbidden list,
/// together with the one-symbol extensions of those that create a forbidden suffix.
pub struct BruteEndings {
    pub points: BTreeSet<Vec<u8>>,
    pub exits: BTreeSet<Vec<u8>>,
}

fn avoids(forbidden: &[Vec<u8>], w: &[u8]) -> bool {
    !forbidden.iter().any(|f| w.windows(f.len()).any(|x| x == f.as_slice()))
}

/// Brute-force endings of length `len`. A left extension longer than the number of
/// length-(window−1) contexts repeats a context, so it extends indefinitely.
pub fn brute_endings(j: u8, forbidden: &[Vec<u8>], len: usize) -> BruteEndings {
    let window = forbidden.iter().map(Vec::len).max().unwrap_or(1);
    let total = len + (j as usize + 1).pow(window.saturating_sub(1) as u32) + window;
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..total {
        let mut grown = Vec::with_capacity(words.len() * (j as usize + 1));
        for w in &words {
            for a in 0..=j {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(a);
                v.extend_from_slice(w);
                if avoids(forbidden, &v[..v.len().min(window)]) {
                    grown.push(v);
                }
            }
        }
        words = grown;
    }
    let mut points = BTreeSet::new();
    let mut exits = BTreeSet::new();
    for w in &words {
        points.insert(w[w.len() - len..].to_vec());
        for a in 0..=j {
            let mut v = w.clone();
            v.push(a);
            if !avoids(forbidden, &v[v.len().saturating_sub(window)..]) {
                exits.insert(v[v.len() - len..].to_vec());
            }
        }
    }
    BruteEndings { points, exits }
}

fn words(list: &[&str]) -> Vec<Vec<u8>> {
    list.iter().map(|w| w.bytes().map(|b| b - b'0').collect()).collect()
}

fn criterion_8(level: Level) -> Outcome {
    let mut c = Clauses::default();
    let max_len = level.depth(12) as usize;
    for list in [["00", "11"].as_slice(), ["000", "111"].as_slice()] {
        let k = SftSubshift::from_strs(1, list).expect("valid forbidden list");
        let report = match check_prop_2_2(&SubshiftInput::Finite(k.clone())) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        c.require(report.exit_set_closed && report.disjoint_from_exit_closure, format!("{list:?}: automaton verdict {report:?}"));
        let fw = words(list);
        let mut separated_at = None;
        for len in 1..=max_len {
            let brute = brute_endings(1, &fw, len);
            let auto_points: BTreeSet<Vec<u8>> = k.points().initial_words(len).into_iter().collect();
            let auto_exits: BTreeSet<Vec<u8>> = k.exit_set().initial_words(len).into_iter().collect();
            c.require(auto_points == brute.points, format!("{list:?}: endings of length {len} differ"));
            c.require(auto_exits == brute.exits, format!("{list:?}: exit endings of length {len} differ"));
            if separated_at.is_none() && brute.points.is_disjoint(&brute.exits) {
                separated_at = Some(len);
            }
        }
        c.require(separated_at.is_some(), format!("{list:?}: no separating length up to {max_len}"));
        c.note(format!("{list:?} separated at length {}", separated_at.map_or("none".into(), |l| l.to_string())));
    }
    let top = level.depth(12) as usize;
    let mut prev: Option<(usize, Rational)> = None;
    let mut seen = Vec::new();
    for l in 3..=top {
        let family = GeneratorFamily::new(GeneratorRule::AlternatingBlocks, l);
        let report = match check_prop_2_2(&SubshiftInput::Family(family)) {
            Ok(r) => r,
            Err(e) => {
                c.require(false, format!("L = {l}: {e}"));
                continue;
            }
        };
        let Some(w) = report.best_witness() else {
            c.require(false, format!("L = {l}: no witness"));
            continue;
        };
        let d = w.dist.to_rational();
        c.require(d <= pow2(-(l as i64 - 2)), format!("L = {l}: witness {} at distance {}", w.point, w.distance));
        if let Some((pl, pd)) = &prev {
            c.require(d < *pd, format!("distance at L = {l} ({}) not below L = {pl} ({})", format_rational(&d), format_rational(pd)));
        }
        seen.push(format!("{l}:{}", format_rational(&d)));
        prev = Some((l, d));
    }
    c.note(format!("witness distances {}", seen.join(" ")));
    c.finish()
}

// ---------------------------------------------------------------- 9

fn sample_points(j: u8, n: usize, seed: u64) -> Vec<SymbolSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| SymbolSeq::random(&mut rng, j, 4, 6)).collect()
}

/// All words of length `len` over `0..=j`.
fn all_words(j: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..len {
        out = out.iter().flat_map(|w| (0..=j).map(move |a| [w.as_slice(), &[a]].concat())).collect();
    }
    out
}

fn criterion_9(level: Level) -> Outcome {
    let mut c = Clauses::default();
    let fixtures: [(u8, &[&str]); 3] = [(1, &["00", "11"]), (1, &["000", "111"]), (2, &["00", "11", "22"])];
    let n_samples = match level {
        Level::Quick => 2_000,
        Level::Full => 10_000,
    };
    for (j, list) in fixtures {
        let k = SftSubshift::from_strs(j, list).expect("valid forbidden list");
        let g = match construct_thm_1_2(&k) {
            Ok(g) => g,
            Err(e) => {
                c.require(false, format!("{list:?}: {e}"));
                continue;
            }
        };
        let samples = sample_points(j, n_samples, SEED ^ u64::from(j) ^ list.len() as u64);
        match g_sum_residual(&g, &samples) {
            Ok(r) => c.require(r == 0.0, format!("{list:?}: sum residual {r:e}")),
            Err(e) => c.require(false, e.to_string()),
        }
        // Zero set: g vanishes on the closure of the exits and nowhere else. A word of the
        // enumeration depth decides membership of its whole cylinder once it is long enough;
        // shorter cylinders are represented by periodic extensions of the word.
        let depth = match level {
            Level::Quick => 8,
            Level::Full => 12,
        };
        let brute = brute_endings(j, &words(list), depth);
        let zero_set_ok: Vec<String> = all_words(j, depth)
            .par_iter()
            .filter_map(|u| {
                let exit_word = brute.exits.contains(u);
                let reps: Vec<SymbolSeq> = match (exit_word, k.exit_set().some_point_ending_with(u)) {
                    (true, Some(pt)) => vec![pt],
                    (true, None) => return Some(format!("{u:?}: automaton has no exit point")),
                    (false, _) => (0..=j).map(|a| SymbolSeq::new(vec![a], u.clone(), j).expect("valid")).collect(),
                };
                for r in reps {
                    let zero = match g.eval_exact(&r) {
                        Ok(Some(v)) => v.is_zero(),
                        Ok(None) => g.eval(&r).map(|v| v == 0.0).unwrap_or(false),
                        Err(e) => return Some(e.to_string()),
                    };
                    if zero != exit_word {
                        return Some(format!("g({r}) zero = {zero}, exit cylinder = {exit_word}"));
                    }
                }
                None
            })
            .collect();
        c.require(zero_set_ok.is_empty(), format!("{list:?}: zero set mismatch, e.g. {:?}", zero_set_ok.first()));
        match strict_g(&SubshiftInput::Finite(k.clone())) {
            Ok(s) => {
                c.require(s.lower_bound.is_positive(), format!("{list:?}: bound {}", s.lower_bound));
                let on_k: Vec<&SymbolSeq> = samples.iter().filter(|x| k.contains(x)).collect();
                let low = on_k.iter().filter_map(|x| s.g.eval_exact(x).ok().flatten()).min();
                if let Some(low) = &low {
                    c.require(*low >= s.lower_bound, format!("{list:?}: g = {low} below bound {}", s.lower_bound));
                }
                c.note(format!(
                    "{list:?}: bound {} (smallest sampled value on K {})",
                    format_rational(&s.lower_bound),
                    low.map_or("n/a".into(), |v| format_rational(&v))
                ));
            }
            Err(e) => c.require(false, format!("{list:?}: strict_g refused: {e}")),
        }
    }
    let family = GeneratorFamily::new(GeneratorRule::AlternatingBlocks, 8);
    match strict_g(&SubshiftInput::Family(family)) {
        Ok(_) => c.require(false, "alternating-block family accepted"),
        Err(e) => {
            let text = e.to_string();
            let cites = text.contains("(01)*1") || text.contains("(10)*0");
            c.require(cites, format!("refusal without the expected witness: {text}"));
            c.note(format!("refused: {text}"));
        }
    }
    c.finish()
}

// ---------------------------------------------------------------- 10

fn criterion_10(level: Level) -> Outcome {
    let mut c = Clauses::default();
    let p = builtin("haar");
    let x0 = rat(1, 3);
    let n = level.paths(2000);
    let eps = pow2(-ABSORPTION_EPS_EXP);
    let est = match absorption_estimate(&p, &x0, n, 2000, &eps, SEED) {
        Ok(e) => e,
        Err(e) => return (false, e.to_string()),
    };
    let sum = sum_phi_hat(&p, &x0, 512, 48);
    c.require(est.overlaps(sum.lower, sum.upper), format!("CI [{:.4}, {:.4}] misses [{:.6}, {:.6}]", est.ci_low, est.ci_high, sum.lower, sum.upper));
    let curve: Vec<f64> = [500, 1000, 2000].iter().map(|&t| est.estimate_at(t)).collect();
    c.require(curve.windows(2).all(|w| w[0] <= w[1]), format!("not monotone: {curve:?}"));
    c.note(format!(
        "{n} paths: estimate {:.4}, CI [{:.4}, {:.4}], sum bracket [{:.6}, {:.6}], by T = 500/1000/2000: {curve:?}",
        est.estimate, est.ci_low, est.ci_high, sum.lower, sum.upper
    ));
    c.finish()
}

// ---------------------------------------------------------------- 11

fn criterion_11(level: Level) -> Outcome {
    let mut c = Clauses::default();
    let cap = level.depth(12) as usize;
    let fixtures: [(u8, &[&str]); 3] = [(1, &["00", "11"]), (1, &["000", "111"]), (2, &["00", "11", "22"])];
    let mut total = 0;
    for (idx, (j, list)) in fixtures.into_iter().enumerate() {
        let k = SftSubshift::from_strs(j, list).expect("valid forbidden list");
        let fw = words(list);
        let endings: Vec<HashSet<Vec<u8>>> =
            (0..=cap).map(|l| brute_endings(j, &fw, l).points.into_iter().collect()).collect();
        for s in sample_points(j, 200, SEED ^ 11 ^ idx as u64) {
            let brute = (0..=cap).rev().find(|&l| endings[l].contains(&s.last_symbols(l))).unwrap_or(0);
            let auto = match rho_to_set(&s, &k) {
                Ok(d) => d.exponent().map_or(cap, |l| (l as usize).min(cap)),
                Err(e) => return (false, e.to_string()),
            };
            total += 1;
            c.require(auto == brute, format!("{list:?} at {s}: automaton agreement {auto}, enumeration {brute}"));
        }
    }
    c.note(format!("{total} points against enumeration to depth {cap}"));
    c.finish()
}
