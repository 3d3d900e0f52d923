//! Exhaustive enumeration of forests and parking functions, and the driver
//! that checks the bijection and its statistic transport against them.
//!
//! Forests are enumerated as filtered parent sequences and parking functions
//! as filtered preference sequences, so neither enumerator shares code with
//! the bijection being checked.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bijection::{PhiInvRun, PhiRun};
use crate::error::EnumerateError;
use crate::forest_stats::{inversion_counts, tinv_vector, tree_count};
use crate::model::{Forest, Rooted};
use crate::parking::{
    jump_stats, sample_parking_function_with, satisfies_sorted_criterion, ParkingFunction,
};
use crate::{cayley_count, triangular};

/// Largest `n` the enumerators accept.
pub const MAX_ENUMERATION_N: usize = 8;
/// Largest `n` for full bijection verification.
pub const MAX_VERIFY_N: usize = 7;

fn check_budget(n: usize, max: usize) -> Result<(), EnumerateError> {
    if n > max {
        Err(EnumerateError::BudgetExceeded { n, max })
    } else {
        Ok(())
    }
}

/// Lexicographic walk over `ranges[0] x ranges[1] x ...` (inclusive bounds).
#[derive(Debug, Clone)]
struct Odometer {
    ranges: Vec<(usize, usize)>,
    current: Option<Vec<usize>>,
}

impl Odometer {
    fn new(ranges: Vec<(usize, usize)>) -> Self {
        let current = if ranges.iter().all(|&(lo, hi)| lo <= hi) {
            Some(ranges.iter().map(|&(lo, _)| lo).collect())
        } else {
            None
        };
        Odometer { ranges, current }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            let (lo, hi) = self.ranges[i];
            if cur[i] < hi {
                cur[i] += 1;
                break;
            }
            cur[i] = lo;
        }
        Some(out)
    }
}

/// Stream of forests produced by [`all_forests`].
#[derive(Debug, Clone)]
pub struct Forests(Odometer);

impl Iterator for Forests {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        self.0.by_ref().find_map(|p| Forest::new(p).ok())
    }
}

/// Every forest on `n` vertices, each exactly once.
pub fn all_forests(n: usize) -> Result<Forests, EnumerateError> {
    check_budget(n, MAX_ENUMERATION_N)?;
    Ok(Forests(Odometer::new(vec![(0, n); n])))
}

/// The forests whose vertex 1 has parent `first` (`0` for a root). For `n >= 1`
/// these partition [`all_forests`] as `first` ranges over `0..=n`.
pub fn forests_with_first_parent(n: usize, first: usize) -> Result<Forests, EnumerateError> {
    check_budget(n, MAX_ENUMERATION_N)?;
    let mut ranges = vec![(0, n); n];
    if let Some(r) = ranges.first_mut() {
        *r = (first, first);
    }
    Ok(Forests(Odometer::new(ranges)))
}

/// Stream of parking functions produced by [`all_parking_functions`].
#[derive(Debug, Clone)]
pub struct ParkingFunctions(Odometer);

impl Iterator for ParkingFunctions {
    type Item = ParkingFunction;

    fn next(&mut self) -> Option<ParkingFunction> {
        self.0.by_ref().find_map(|p| ParkingFunction::new(p).ok())
    }
}

/// Every parking function of length `n`, in lexicographic order.
pub fn all_parking_functions(n: usize) -> Result<ParkingFunctions, EnumerateError> {
    check_budget(n, MAX_ENUMERATION_N)?;
    Ok(ParkingFunctions(Odometer::new(vec![(1, n); n])))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub n: usize,
    /// Exhaustive runs also require both counts to equal `(n+1)^(n-1)`.
    pub exhaustive: bool,
    pub forest_count: u64,
    pub parking_function_count: u64,
    pub roundtrip_failures: Vec<String>,
    pub stat_mismatches: Vec<String>,
    /// Images outside the parking functions, collisions, missed parking
    /// functions and broken overlay invariants.
    pub bijectivity_failures: Vec<String>,
    pub elapsed_millis: u64,
}

impl VerificationReport {
    fn empty(n: usize, exhaustive: bool) -> Self {
        VerificationReport {
            n,
            exhaustive,
            ..Default::default()
        }
    }

    pub fn success(&self) -> bool {
        let clean = self.roundtrip_failures.is_empty()
            && self.stat_mismatches.is_empty()
            && self.bijectivity_failures.is_empty();
        let counts = !self.exhaustive
            || (self.forest_count == cayley_count(self.n)
                && self.parking_function_count == cayley_count(self.n));
        clean && counts
    }

    /// Combines partial reports. Associative; failure lists are concatenated
    /// in argument order.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.forest_count += other.forest_count;
        self.parking_function_count += other.parking_function_count;
        self.roundtrip_failures.extend(other.roundtrip_failures);
        self.stat_mismatches.extend(other.stat_mismatches);
        self.bijectivity_failures.extend(other.bijectivity_failures);
        self.elapsed_millis = self.elapsed_millis.max(other.elapsed_millis);
        self
    }
}

/// Runs `phi` on one forest and checks everything that can be checked from
/// that forest alone. Returns the image.
fn check_forest(f: &Forest, report: &mut VerificationReport) -> ParkingFunction {
    report.forest_count += 1;
    let n = f.n();
    let run = PhiRun::new(f);
    let p = &run.parking_function;
    let tag = || format!("{:?}", f.parents());

    if let Err(e) = run.overlay.check_invariants() {
        report.bijectivity_failures.push(format!("forest {}: {e}", tag()));
    }
    if !satisfies_sorted_criterion(p.as_slice()) {
        report
            .bijectivity_failures
            .push(format!("forest {}: image {:?} is not a parking function", tag(), p));
    }
    match PhiInvRun::new(p) {
        Ok(back) if &back.forest == f => {}
        Ok(back) => report.roundtrip_failures.push(format!(
            "forest {} -> {:?} -> {:?}",
            tag(),
            p.as_slice(),
            back.forest.parents()
        )),
        Err(e) => report
            .roundtrip_failures
            .push(format!("forest {}: inverse failed: {e}", tag())),
    }

    let stats = jump_stats(p);
    let inv = inversion_counts(f);
    for v in 1..=n {
        let car = run.theta.apply(v);
        if inv[v] != stats.jump_at[&car] {
            report.stat_mismatches.push(format!(
                "forest {}: inv at {v} is {} but car {car} jumps {}",
                tag(),
                inv[v],
                stats.jump_at[&car]
            ));
        }
    }
    let mut root_cars: Vec<usize> = f.roots().iter().map(|&r| run.theta.apply(r)).collect();
    root_cars.sort_unstable();
    if root_cars != stats.critical_cars {
        report.stat_mismatches.push(format!(
            "forest {}: roots map to {root_cars:?}, critical cars are {:?}",
            tag(),
            stats.critical_cars
        ));
    }
    let tinv = tinv_vector(f);
    if tinv != stats.tjump || tree_count(f) != stats.critic {
        report.stat_mismatches.push(format!(
            "forest {}: (tinv, tree) = ({tinv:?}, {}) but (tjump, critic) = ({:?}, {})",
            tag(),
            tree_count(f),
            stats.tjump,
            stats.critic
        ));
    }
    let inv_total: u64 = inv.iter().map(|&x| x as u64).sum();
    if inv_total + p.weight() != triangular(n) {
        report.stat_mismatches.push(format!(
            "forest {}: inv {} + |P| {} != C(n+1, 2)",
            tag(),
            inv_total,
            p.weight()
        ));
    }
    run.parking_function
}

fn check_parking_function(p: &ParkingFunction, report: &mut VerificationReport) {
    report.parking_function_count += 1;
    match PhiInvRun::new(p) {
        Ok(back) => {
            let again = PhiRun::new(&back.forest).parking_function;
            if &again != p {
                report.roundtrip_failures.push(format!(
                    "parking function {:?} -> {:?} -> {:?}",
                    p.as_slice(),
                    back.forest.parents(),
                    again.as_slice()
                ));
            }
        }
        Err(e) => report
            .roundtrip_failures
            .push(format!("parking function {:?}: inverse failed: {e}", p.as_slice())),
    }
}

/// Checks `phi` on every forest with `n` vertices: images are distinct
/// parking functions covering all of them, both round trips are identities,
/// and per-vertex and global statistics are transported.
pub fn verify_bijection(n: usize) -> Result<VerificationReport, EnumerateError> {
    check_budget(n, MAX_VERIFY_N)?;
    let started = Instant::now();

    let partitions: Vec<usize> = if n == 0 {
        vec![0]
    } else {
        (0..=n).filter(|&p| p != 1).collect()
    };
    let parts: Vec<(VerificationReport, Vec<ParkingFunction>)> = partitions
        .par_iter()
        .map(|&first| {
            let mut report = VerificationReport::empty(n, true);
            let forests = if n == 0 {
                all_forests(0)
            } else {
                forests_with_first_parent(n, first)
            }
            .expect("budget checked");
            let images = forests.map(|f| check_forest(&f, &mut report)).collect();
            (report, images)
        })
        .collect();

    let mut report = VerificationReport::empty(n, true);
    let mut images = Vec::new();
    for (part, imgs) in parts {
        report = report.merge(part);
        images.extend(imgs);
    }
    images.par_sort_unstable();
    let before = images.len();
    images.dedup();
    if images.len() != before {
        report
            .bijectivity_failures
            .push(format!("{} forests share an image", before - images.len()));
    }

    let all_pf: Vec<ParkingFunction> = all_parking_functions(n).expect("budget checked").collect();
    if images != all_pf {
        report.bijectivity_failures.push(format!(
            "image set has {} elements, {} parking functions exist, sets differ",
            images.len(),
            all_pf.len()
        ));
    }
    let back = all_pf
        .par_chunks(4096)
        .map(|chunk| {
            let mut r = VerificationReport::empty(n, true);
            for p in chunk {
                check_parking_function(p, &mut r);
            }
            r
        })
        .collect::<Vec<_>>();
    for part in back {
        report = report.merge(part);
    }

    report.elapsed_millis = started.elapsed().as_millis() as u64;
    Ok(report)
}

/// `count` random forests and `count` random parking functions at size `n`,
/// each pushed through both round trips with the per-forest checks of
/// [`verify_bijection`]. Deterministic per seed.
pub fn verify_random(n: usize, count: usize, seed: u64) -> VerificationReport {
    let started = Instant::now();
    let parts: Vec<VerificationReport> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut report = VerificationReport::empty(n, false);
            let f = Forest::random(n, &mut rng);
            check_forest(&f, &mut report);
            let p = sample_parking_function_with(n, &mut rng);
            check_parking_function(&p, &mut report);
            report
        })
        .collect();
    let mut report = parts
        .into_iter()
        .fold(VerificationReport::empty(n, false), VerificationReport::merge);
    report.elapsed_millis = started.elapsed().as_millis() as u64;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn forest_counts() {
        assert_eq!(all_forests(0).unwrap().count(), 1);
        let two: Vec<Vec<usize>> = all_forests(2).unwrap().map(|f| f.parents().to_vec()).collect();
        assert_eq!(two, vec![vec![0, 0], vec![0, 1], vec![2, 0]]);
        for n in 0..=6 {
            let all: HashSet<Forest> = all_forests(n).unwrap().collect();
            assert_eq!(all.len() as u64, cayley_count(n), "n = {n}");
        }
    }

    #[test]
    fn partitions_cover_all_forests() {
        let n = 5;
        let total: usize = (0..=n)
            .map(|first| forests_with_first_parent(n, first).unwrap().count())
            .sum();
        assert_eq!(total as u64, cayley_count(n));
        assert_eq!(forests_with_first_parent(n, 1).unwrap().count(), 0);
    }

    #[test]
    fn parking_function_counts() {
        let one: Vec<_> = all_parking_functions(1).unwrap().map(|p| p.into_inner()).collect();
        assert_eq!(one, vec![vec![1]]);
        let two: Vec<_> = all_parking_functions(2).unwrap().map(|p| p.into_inner()).collect();
        assert_eq!(two, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(all_parking_functions(3).unwrap().count(), 16);
        for n in 0..=6 {
            let all: HashSet<_> = all_parking_functions(n).unwrap().collect();
            assert_eq!(all.len() as u64, cayley_count(n));
        }
    }

    #[test]
    fn budget_guard() {
        assert_eq!(
            all_forests(9).err(),
            Some(EnumerateError::BudgetExceeded { n: 9, max: 8 })
        );
        assert!(all_parking_functions(9).is_err());
        assert!(verify_bijection(8).is_err());
    }

    #[test]
    fn verify_small() {
        for n in 0..=5 {
            let r = verify_bijection(n).unwrap();
            assert!(r.success(), "{r:?}");
            assert_eq!(r.forest_count, cayley_count(n));
        }
        assert_eq!(verify_bijection(2).unwrap().parking_function_count, 3);
        assert_eq!(verify_bijection(5).unwrap().forest_count, 1296);
    }

    #[test]
    fn random_verification_is_deterministic() {
        let a = verify_random(30, 50, 42);
        let b = verify_random(30, 50, 42);
        assert!(a.success());
        assert_eq!(a.forest_count, 50);
        assert_eq!(
            VerificationReport { elapsed_millis: 0, ..a },
            VerificationReport { elapsed_millis: 0, ..b }
        );
    }

    #[test]
    fn merge_is_associative() {
        let mk = |k: u64, msg: &str| VerificationReport {
            n: 3,
            exhaustive: true,
            forest_count: k,
            parking_function_count: k,
            roundtrip_failures: vec![msg.to_string()],
            ..Default::default()
        };
        let (a, b, c) = (mk(1, "a"), mk(2, "b"), mk(3, "c"));
        assert_eq!(
            a.clone().merge(b.clone()).merge(c.clone()),
            a.merge(b.merge(c))
        );
    }
}
