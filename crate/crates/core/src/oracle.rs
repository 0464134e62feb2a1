//! Brute-force reference implementations and exhaustive theorem checks.
//!
//! Nothing in [`naive`] touches the bit-indexed engine: diagonals are plain
//! `(a,b)` pairs from a separate double loop, crossing is tested by counting
//! endpoints inside an arc, and `nc` is a quadratic scan.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagset::DiagSet;
use crate::error::{Error, Result};
use crate::mutation::Direction;
use crate::polygon::{Polygon, PolygonSpec};
use crate::quiver::SubfactorImage;

pub const DEFAULT_BUDGET: u64 = 1 << 24;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const BUDGET_ENV: &str = "NCOTOR_BUDGET";

/// A set of diagonals as sorted `(a,b)` pairs.
pub type PairSet = BTreeSet<(u32, u32)>;

/// Largest number of subsets an exhaustive scan may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// `NCOTOR_BUDGET` when set and parseable, else the default.
    pub fn from_env() -> Budget {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }

    pub fn check(&self, diagonals: usize) -> Result<()> {
        if diagonals >= 63 || (1u64 << diagonals) > self.0 {
            return Err(Error::BudgetExceeded {
                diagonals,
                budget: self.0,
            });
        }
        Ok(())
    }
}

pub mod naive {
    /// All n-diagonals of the `(n(m+1)+2)`-gon, lexicographic.
    pub fn diagonals(n: u32, m: u32) -> Vec<(u32, u32)> {
        let vertices = n * (m + 1) + 2;
        let mut out = Vec::new();
        for i in 1..=vertices {
            for j in i + 1..=vertices {
                let gap = j - i;
                if gap >= 2 && gap + 2 <= vertices && (gap - 1) % n == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Exactly one endpoint of `v` strictly inside the arc `u.0 → u.1` and
    /// exactly one strictly outside.
    pub fn cross(u: (u32, u32), v: (u32, u32)) -> bool {
        let (lo, hi) = (u.0.min(u.1), u.0.max(u.1));
        let inside = |x: u32| lo < x && x < hi;
        let on = |x: u32| x == lo || x == hi;
        if on(v.0) || on(v.1) {
            return false;
        }
        inside(v.0) != inside(v.1)
    }

    /// Bit `i` of the result is set when diagonal `i` crosses no member.
    pub fn nc(all: &[(u32, u32)], members: u64) -> u64 {
        let mut out = 0;
        for (i, &u) in all.iter().enumerate() {
            let clear = all
                .iter()
                .enumerate()
                .filter(|(j, _)| members >> j & 1 == 1)
                .all(|(_, &v)| !cross(u, v));
            if clear {
                out |= 1 << i;
            }
        }
        out
    }

    pub fn is_closed(all: &[(u32, u32)], members: u64) -> bool {
        nc(all, nc(all, members)) == members
    }

    pub fn frame(all: &[(u32, u32)], members: u64) -> u64 {
        members & nc(all, members)
    }

    pub fn is_ptolemy(n: u32, m: u32, all: &[(u32, u32)], members: u64) -> bool {
        let vertices = n * (m + 1) + 2;
        let contains = |a: u32, b: u32| {
            let key = (a.min(b), a.max(b));
            all.iter()
                .position(|&d| d == key)
                .is_some_and(|i| members >> i & 1 == 1)
        };
        let is_n_diagonal = |a: u32, b: u32| {
            let gap = a.abs_diff(b);
            gap >= 2 && gap + 2 <= vertices && (gap - 1).is_multiple_of(n)
        };
        for (i, &u) in all.iter().enumerate() {
            for (j, &v) in all.iter().enumerate() {
                if members >> i & 1 == 0 || members >> j & 1 == 0 || !cross(u, v) {
                    continue;
                }
                for x in [u.0, u.1] {
                    for y in [v.0, v.1] {
                        if is_n_diagonal(x, y) && !contains(x, y) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn to_pairs(all: &[(u32, u32)], members: u64) -> super::PairSet {
        all.iter()
            .enumerate()
            .filter(|(i, _)| members >> i & 1 == 1)
            .map(|(_, &d)| d)
            .collect()
    }

    pub fn from_pairs(all: &[(u32, u32)], pairs: &super::PairSet) -> u64 {
        all.iter()
            .enumerate()
            .filter(|(_, d)| pairs.contains(d))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Engine set to plain pairs.
pub fn pairs_of(poly: &Polygon, set: &DiagSet) -> PairSet {
    poly.diagonals_of(set).iter().map(|d| (d.a(), d.b())).collect()
}

fn show(pairs: &PairSet) -> String {
    let parts: Vec<String> = pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    format!("{{{}}}", parts.join(","))
}

/// Every closed set, found by testing all `2^d` subsets.
pub fn brute_closed_sets(spec: PolygonSpec, budget: Budget) -> Result<BTreeSet<PairSet>> {
    let all = naive::diagonals(spec.n(), spec.m());
    budget.check(all.len())?;
    let closed: Vec<u64> = (0..1u64 << all.len())
        .into_par_iter()
        .filter(|&s| naive::is_closed(&all, s))
        .collect();
    Ok(closed.into_iter().map(|s| naive::to_pairs(&all, s)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub spec: PolygonSpec,
    pub check: String,
    pub cases_checked: u64,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "as_millis", rename = "elapsed_ms")]
    pub elapsed: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl VerificationReport {
    fn new(spec: PolygonSpec, check: &str) -> Self {
        VerificationReport {
            spec,
            check: check.to_string(),
            cases_checked: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
            seed: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, input: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) {
        self.failures.push(Failure {
            input: input.into(),
            expected: expected.into(),
            actual: actual.into(),
        });
    }

    /// Combine two partial reports of the same check.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.cases_checked += other.cases_checked;
        self.failures.extend(other.failures);
        self.elapsed += other.elapsed;
        self
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "check     {}", self.check);
        let _ = writeln!(
            out,
            "spec      n={} m={} ({}-gon)",
            self.spec.n(),
            self.spec.m(),
            self.spec.vertices()
        );
        let _ = writeln!(out, "cases     {}", self.cases_checked);
        let _ = writeln!(out, "failures  {}", self.failures.len());
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed      {seed}");
        }
        let _ = writeln!(out, "elapsed   {} ms", self.elapsed.as_millis());
        let _ = writeln!(out, "status    {status}");
        for f in self.failures.iter().take(20) {
            let _ = writeln!(out, "  {}: expected {}, got {}", f.input, f.expected, f.actual);
        }
        out
    }
}

/// Engine enumeration against the brute-force scan.
pub fn verify_enumeration(poly: &Polygon, budget: Budget) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(poly.spec(), "enumeration");
    let brute = brute_closed_sets(poly.spec(), budget)?;
    let engine: Vec<PairSet> = poly.enumerate_closed().map(|s| pairs_of(poly, &s)).collect();
    let engine_set: BTreeSet<PairSet> = engine.iter().cloned().collect();
    report.cases_checked = 1u64 << poly.len();
    if engine_set.len() != engine.len() {
        report.fail(
            "enumerate_closed",
            "no repeats",
            format!("{} repeats", engine.len() - engine_set.len()),
        );
    }
    for missing in brute.difference(&engine_set) {
        report.fail(show(missing), "enumerated", "missing");
    }
    for extra in engine_set.difference(&brute) {
        report.fail(show(extra), "not closed", "enumerated");
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Every closed set is a Ptolemy diagram; for `n = 1` (within budget) every
/// Ptolemy diagram is closed.
pub fn verify_ptolemy(poly: &Polygon, budget: Budget) -> VerificationReport {
    let start = Instant::now();
    let spec = poly.spec();
    let mut report = VerificationReport::new(spec, "ptolemy");
    let all = naive::diagonals(spec.n(), spec.m());
    for s in poly.enumerate_closed() {
        report.cases_checked += 1;
        let pairs = pairs_of(poly, &s);
        let engine = poly.is_ptolemy(&s);
        let reference = all.len() >= 64 || naive::is_ptolemy(spec.n(), spec.m(), &all, naive::from_pairs(&all, &pairs));
        if !engine || !reference {
            report.fail(show(&pairs), "ptolemy", format!("engine={engine} naive={reference}"));
        }
    }
    if spec.n() == 1 && budget.check(all.len()).is_ok() {
        let bad: Vec<u64> = (0..1u64 << all.len())
            .into_par_iter()
            .filter(|&s| naive::is_ptolemy(spec.n(), spec.m(), &all, s) && !naive::is_closed(&all, s))
            .collect();
        report.cases_checked += 1 << all.len();
        for s in bad {
            report.fail(show(&naive::to_pairs(&all, s)), "closed (ptolemy, n = 1)", "not closed");
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// For every closed `S`, every `D ⊆ frame(S)` and both directions, the
/// rotation is closed and carries the frame to the rotated frame.
pub fn verify_mutation_theorem(poly: &Polygon) -> VerificationReport {
    let start = Instant::now();
    let spec = poly.spec();
    let all = naive::diagonals(spec.n(), spec.m());
    let closed: Vec<DiagSet> = poly.enumerate_closed().collect();
    let report = closed
        .par_iter()
        .map(|s| {
            let mut report = VerificationReport::new(spec, "mutation");
            let s_pairs = pairs_of(poly, s);
            let s_bits = naive::from_pairs(&all, &s_pairs);
            let frame_pairs = naive::to_pairs(&all, naive::frame(&all, s_bits));
            let frame = poly
                .set_from_pairs(frame_pairs.iter().copied())
                .expect("oracle diagonals are n-diagonals");
            let frame_ranks: Vec<usize> = frame.iter().collect();
            for choice in 0..1u64 << frame_ranks.len() {
                let cut = DiagSet::from_ranks(
                    spec,
                    frame_ranks
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| choice >> i & 1 == 1)
                        .map(|(_, &r)| r),
                );
                for direction in [Direction::Backward, Direction::Forward] {
                    report.cases_checked += 1;
                    let label = format!("S={} D={} {direction}", show(&s_pairs), show(&pairs_of(poly, &cut)));
                    let (image, moved_frame) =
                        match (poly.rho_d(s, &cut, direction), poly.rho_d(&frame, &cut, direction)) {
                            (Ok(a), Ok(b)) => (a, b),
                            (Err(e), _) | (_, Err(e)) => {
                                report.fail(label, "rotation defined", e.to_string());
                                continue;
                            }
                        };
                    let image_pairs = pairs_of(poly, &image);
                    let image_bits = naive::from_pairs(&all, &image_pairs);
                    if image_pairs.len() != s_pairs.len() {
                        report.fail(
                            &label,
                            format!("{} members", s_pairs.len()),
                            format!("{}", image_pairs.len()),
                        );
                    }
                    if !naive::is_closed(&all, image_bits) {
                        report.fail(&label, "closed image", show(&image_pairs));
                    }
                    let image_frame = naive::to_pairs(&all, naive::frame(&all, image_bits));
                    let expected_frame = pairs_of(poly, &moved_frame);
                    if image_frame != expected_frame {
                        report.fail(&label, show(&expected_frame), show(&image_frame));
                    }
                    match poly.rho_d(&image, &cut, direction.inverse()) {
                        Ok(back) if back == *s => {}
                        Ok(back) => report.fail(&label, "inverse rotation restores S", show(&pairs_of(poly, &back))),
                        Err(e) => report.fail(&label, "inverse rotation defined", e.to_string()),
                    }
                }
            }
            report
        })
        .reduce(|| VerificationReport::new(spec, "mutation"), VerificationReport::merge);
    VerificationReport {
        elapsed: start.elapsed(),
        ..report
    }
}

/// Randomized Galois-connection laws plus engine `nc` against the naive one.
pub fn verify_galois(poly: &Polygon, trials: u64, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let spec = poly.spec();
    let mut report = VerificationReport::new(spec, "galois");
    report.seed = Some(seed);
    let all = naive::diagonals(spec.n(), spec.m());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = poly.len();
    for trial in 0..trials {
        let s = match trial {
            0 => poly.empty_set(),
            1 => poly.full_set(),
            _ => {
                let density: f64 = rng.random();
                DiagSet::from_ranks(spec, (0..d).filter(|_| rng.random_bool(density)))
            }
        };
        let extra_density: f64 = rng.random();
        let t = s.union(&DiagSet::from_ranks(
            spec,
            (0..d).filter(|_| rng.random_bool(extra_density)),
        ));
        report.cases_checked += 1;
        let label = || format!("S={}", poly.format_set(&s));
        let (nc_s, nc_t) = (poly.nc(&s), poly.nc(&t));
        if !nc_t.is_subset(&nc_s) {
            report.fail(label(), "nc(T) ⊆ nc(S)", format!("T={}", poly.format_set(&t)));
        }
        let closure = poly.nc(&nc_s);
        if !s.is_subset(&closure) {
            report.fail(label(), "S ⊆ nc nc S", poly.format_set(&closure));
        }
        if poly.nc(&closure) != nc_s {
            report.fail(label(), "nc nc nc S = nc S", poly.format_set(&poly.nc(&closure)));
        }
        if poly.closure(&closure) != closure {
            report.fail(label(), "closure idempotent", poly.format_set(&poly.closure(&closure)));
        }
        if d < 64 {
            let naive_nc = naive::to_pairs(&all, naive::nc(&all, naive::from_pairs(&all, &pairs_of(poly, &s))));
            if naive_nc != pairs_of(poly, &nc_s) {
                report.fail(label(), show(&naive_nc), poly.format_set(&nc_s));
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// The subfactor bijection for one cut, with both cardinalities recounted
/// by brute force.
pub fn verify_subfactor(poly: &Arc<Polygon>, cut: &DiagSet, budget: Budget) -> Result<VerificationReport> {
    let start = Instant::now();
    let spec = poly.spec();
    let mut report = VerificationReport::new(spec, "subfactor");
    let image = SubfactorImage::new(poly.clone(), cut)?;
    let check = image.bijection_check();
    report.cases_checked = (check.ambient_count + check.product_count) as u64;
    for f in &check.failures {
        report.fail(poly.format_set(cut), "bijection", f.clone());
    }

    let all = naive::diagonals(spec.n(), spec.m());
    let cut_bits = naive::from_pairs(&all, &pairs_of(poly, cut));
    let ambient_brute = brute_closed_sets(spec, budget)?
        .iter()
        .filter(|s| {
            let bits = naive::from_pairs(&all, s);
            naive::frame(&all, bits) & cut_bits == cut_bits
        })
        .count();
    let mut product_brute = 1usize;
    for part in image.parts() {
        product_brute *= brute_closed_sets(part.local.spec(), budget)?.len();
    }
    if ambient_brute != check.ambient_count {
        report.fail(
            "ambient side",
            ambient_brute.to_string(),
            check.ambient_count.to_string(),
        );
    }
    if product_brute != check.product_count {
        report.fail("cell side", product_brute.to_string(), check.product_count.to_string());
    }
    if ambient_brute != product_brute {
        report.fail(
            "brute cardinalities",
            ambient_brute.to_string(),
            product_brute.to_string(),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: u32, m: u32) -> Arc<Polygon> {
        Arc::new(Polygon::new(PolygonSpec::new(n, m).unwrap()))
    }

    #[test]
    fn naive_crossing_matches_definition() {
        assert!(naive::cross((1, 4), (2, 5)));
        assert!(naive::cross((2, 5), (1, 4)));
        assert!(!naive::cross((1, 4), (1, 6)));
        assert!(!naive::cross((1, 4), (5, 8)));
    }

    #[test]
    fn brute_small_cases() {
        let hex = brute_closed_sets(PolygonSpec::new(2, 1).unwrap(), Budget::default()).unwrap();
        let want: BTreeSet<PairSet> = [
            vec![],
            vec![(1, 4)],
            vec![(2, 5)],
            vec![(3, 6)],
            vec![(1, 4), (2, 5), (3, 6)],
        ]
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
        assert_eq!(hex, want);
        let square = brute_closed_sets(PolygonSpec::new(1, 1).unwrap(), Budget::default()).unwrap();
        assert_eq!(square.len(), 4);
    }

    #[test]
    fn budget_guard() {
        let spec = PolygonSpec::new(2, 3).unwrap();
        assert_eq!(
            brute_closed_sets(spec, Budget(1 << 10)),
            Err(Error::BudgetExceeded {
                diagonals: 15,
                budget: 1 << 10
            })
        );
        assert!(Budget(1 << 15).check(15).is_ok());
        assert!(Budget(u64::MAX).check(70).is_err());
    }

    #[test]
    fn mutation_theorem_counts() {
        let report = verify_mutation_theorem(&poly(2, 3));
        assert!(report.passed(), "{}", report.to_table());
        assert_eq!(report.cases_checked, 2304);
        assert!(verify_mutation_theorem(&poly(1, 3)).passed());
    }

    #[test]
    fn galois_report_records_seed() {
        let report = verify_galois(&poly(2, 3), 500, 7);
        assert!(report.passed());
        assert_eq!(report.seed, Some(7));
        assert_eq!(report.cases_checked, 500);
    }

    #[test]
    fn subfactor_reports() {
        let p = poly(2, 3);
        let report = verify_subfactor(&p, &p.parse_set("{(1,6)}").unwrap(), Budget::default()).unwrap();
        assert!(report.passed(), "{}", report.to_table());
        let report = verify_subfactor(&p, &p.empty_set(), Budget::default()).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn report_merge_and_table() {
        let spec = PolygonSpec::new(2, 1).unwrap();
        let mut a = VerificationReport::new(spec, "x");
        a.cases_checked = 2;
        let mut b = VerificationReport::new(spec, "x");
        b.cases_checked = 3;
        b.fail("i", "e", "a");
        let merged = a.merge(b);
        assert_eq!(merged.cases_checked, 5);
        assert!(!merged.passed());
        assert!(merged.to_table().contains("FAIL"));
        let json = serde_json::to_value(&merged).unwrap();
        assert_eq!(json["spec"]["n"], 2);
        assert_eq!(json["failures"][0]["expected"], "e");
    }
}
