//! The parking algorithm and the statistics of parking functions.
//!
//! Cars `1..=n` arrive in order; car `i` drives to its preferred space `p_i`
//! and takes the first free space at or after it. Spaces are unbounded to the
//! right, so parking always succeeds; `p` is a parking function when every car
//! ends up in `1..=n`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::ParkingError;
use crate::forest_stats::type_vector;

/// Preferred spaces `(p_1, ..., p_n)`, all at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceSequence(Vec<usize>);

impl PreferenceSequence {
    pub fn new(p: Vec<usize>) -> Result<Self, ParkingError> {
        if let Some(i) = p.iter().position(|&x| x == 0) {
            return Err(ParkingError::NonPositivePreference { car: i + 1, value: 0 });
        }
        Ok(PreferenceSequence(p))
    }

    pub fn from_raw(raw: &[i64]) -> Result<Self, ParkingError> {
        raw.iter()
            .enumerate()
            .map(|(i, &x)| {
                usize::try_from(x)
                    .ok()
                    .filter(|&x| x >= 1)
                    .ok_or(ParkingError::NonPositivePreference { car: i + 1, value: x })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PreferenceSequence)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Where each car actually parked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParkOutcome {
    /// `q[i - 1]` is the space taken by car `i`.
    pub q: Vec<usize>,
    /// Largest occupied space (0 when there are no cars).
    pub max_space: usize,
}

fn find_free(next: &mut [usize], s: usize) -> usize {
    let mut root = s;
    while next[root] != root {
        root = next[root];
    }
    let mut x = s;
    while next[x] != root {
        let up = next[x];
        next[x] = root;
        x = up;
    }
    root
}

/// Runs the parking algorithm on arbitrary positive preferences.
pub fn park(p: &PreferenceSequence) -> ParkOutcome {
    park_slice(p.as_slice())
}

fn park_slice(p: &[usize]) -> ParkOutcome {
    let n = p.len();
    let limit = p.iter().copied().max().unwrap_or(0) + n + 1;
    // next[s] leads to the first free space >= s.
    let mut next: Vec<usize> = (0..=limit).collect();
    let mut q = Vec::with_capacity(n);
    let mut max_space = 0;
    for &want in p {
        let s = find_free(&mut next, want);
        next[s] = s + 1;
        max_space = max_space.max(s);
        q.push(s);
    }
    ParkOutcome { q, max_space }
}

/// True when every car parks within `1..=n`.
pub fn is_parking_function(p: &PreferenceSequence) -> bool {
    park(p).max_space <= p.len()
}

/// Independent recognizer: the nondecreasing rearrangement `b` satisfies
/// `b_i <= i` for every `i`.
pub fn satisfies_sorted_criterion(p: &[usize]) -> bool {
    let mut b = p.to_vec();
    b.sort_unstable();
    b.iter().enumerate().all(|(i, &x)| x >= 1 && x <= i + 1)
}

/// A validated parking function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ParkingFunction(Vec<usize>);

impl ParkingFunction {
    pub fn new(p: Vec<usize>) -> Result<Self, ParkingError> {
        let prefs = PreferenceSequence::new(p)?;
        Self::try_from(prefs)
    }

    pub fn from_raw(raw: &[i64]) -> Result<Self, ParkingError> {
        Self::try_from(PreferenceSequence::from_raw(raw)?)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// Actual spaces; a permutation of `1..=n`.
    pub fn spaces(&self) -> Vec<usize> {
        park_slice(&self.0).q
    }

    /// `|P| = p_1 + ... + p_n`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }
}

impl TryFrom<PreferenceSequence> for ParkingFunction {
    type Error = ParkingError;

    fn try_from(p: PreferenceSequence) -> Result<Self, ParkingError> {
        let n = p.len();
        let outcome = park(&p);
        if let Some(i) = outcome.q.iter().position(|&s| s > n) {
            return Err(ParkingError::NotParkingFunction {
                car: i + 1,
                space: outcome.q[i],
                n,
            });
        }
        Ok(ParkingFunction(p.0))
    }
}

/// `word[s - 1]` is the car parked at space `s`; `q` must be a permutation of
/// `1..=q.len()`.
pub fn space_word(q: &[usize]) -> Vec<usize> {
    let mut word = vec![0; q.len()];
    for (i, &s) in q.iter().enumerate() {
        word[s - 1] = i + 1;
    }
    word
}

/// Entries of `word` larger than everything to their right, ascending.
pub fn right_to_left_maxima(word: &[usize]) -> Vec<usize> {
    let mut best = 0;
    let mut maxima = Vec::new();
    for &x in word.iter().rev() {
        if x > best {
            best = x;
            maxima.push(x);
        }
    }
    maxima.sort_unstable();
    maxima
}

/// Critical cars: the right-to-left maxima of the space-to-car word.
pub fn critical_cars(p: &ParkingFunction) -> Vec<usize> {
    right_to_left_maxima(&space_word(&p.spaces()))
}

/// Critical cars found by replaying the parking: car `c` is critical when no
/// space among `q_c + 1..=n` is empty right after it parks.
pub fn critical_cars_by_simulation(p: &ParkingFunction) -> Vec<usize> {
    let n = p.n();
    let q = p.spaces();
    let mut occupied = vec![false; n + 2];
    let mut critical = Vec::new();
    for (i, &s) in q.iter().enumerate() {
        occupied[s] = true;
        if (s + 1..=n).all(|t| occupied[t]) {
            critical.push(i + 1);
        }
    }
    critical
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParkingStatReport {
    pub q: Vec<usize>,
    pub jump_at: BTreeMap<usize, usize>,
    pub jump_total: usize,
    pub lucky_cars: Vec<usize>,
    pub lucky: usize,
    pub critical_cars: Vec<usize>,
    pub critic: usize,
    /// `(lucky_0, ..., lucky_n)`: cars counted by jump length.
    pub tjump: Vec<usize>,
}

pub fn jump_stats(p: &ParkingFunction) -> ParkingStatReport {
    let n = p.n();
    let q = p.spaces();
    let jumps: Vec<usize> = q.iter().zip(p.as_slice()).map(|(&s, &want)| s - want).collect();
    let lucky_cars: Vec<usize> = (1..=n).filter(|&c| jumps[c - 1] == 0).collect();
    let critical = right_to_left_maxima(&space_word(&q));
    ParkingStatReport {
        jump_at: (1..=n).map(|c| (c, jumps[c - 1])).collect(),
        jump_total: jumps.iter().sum(),
        lucky: lucky_cars.len(),
        lucky_cars,
        critic: critical.len(),
        critical_cars: critical,
        tjump: type_vector(&jumps, n),
        q,
    }
}

/// Uniform parking function of length `n`, deterministic per seed.
pub fn sample_parking_function(n: usize, seed: u64) -> ParkingFunction {
    sample_parking_function_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniform parking function via cyclic shifts: park `a` in `{1..=n+1}^n` on a
/// circle of `n + 1` spaces, then rotate so the single empty space is `n + 1`.
/// Each rotation class of `a` contains exactly one parking function.
pub fn sample_parking_function_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ParkingFunction {
    let m = n + 1;
    let a: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let mut next: Vec<usize> = (0..m).collect();
    let mut taken = vec![false; m];
    for &want in &a {
        let s = find_free(&mut next, want);
        taken[s] = true;
        next[s] = (s + 1) % m;
    }
    let empty = taken.iter().position(|&t| !t).expect("one space stays empty");
    let shifted = a
        .iter()
        .map(|&x| (x + m - empty - 1) % m + 1)
        .collect::<Vec<_>>();
    debug_assert!(satisfies_sorted_criterion(&shifted));
    ParkingFunction(shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn prefs(p: &[usize]) -> PreferenceSequence {
        PreferenceSequence::new(p.to_vec()).unwrap()
    }

    fn pf(p: &[usize]) -> ParkingFunction {
        ParkingFunction::new(p.to_vec()).unwrap()
    }

    #[test]
    fn park_examples() {
        assert_eq!(park(&prefs(&[4, 3, 3, 1, 5])).q, vec![4, 3, 5, 1, 6]);
        assert_eq!(park(&prefs(&[4, 3, 3, 1, 5])).max_space, 6);
        assert_eq!(park(&prefs(&[2, 4, 2, 1, 3])).q, vec![2, 4, 3, 1, 5]);
        assert_eq!(park(&prefs(&[3, 1, 4, 2])).q, vec![3, 1, 4, 2]);
        assert_eq!(park(&prefs(&[])).max_space, 0);
    }

    #[test]
    fn recognition_examples() {
        assert!(!is_parking_function(&prefs(&[4, 3, 3, 1, 5])));
        assert!(is_parking_function(&prefs(&[2, 4, 2, 1, 3])));
        assert!(is_parking_function(&prefs(&[1; 9])));
        assert!(matches!(
            ParkingFunction::new(vec![4, 3, 3, 1, 5]),
            Err(ParkingError::NotParkingFunction { car: 5, space: 6, n: 5 })
        ));
        assert!(matches!(
            PreferenceSequence::from_raw(&[1, 0]),
            Err(ParkingError::NonPositivePreference { car: 2, value: 0 })
        ));
        assert!(PreferenceSequence::from_raw(&[1, -3]).is_err());
    }

    #[test]
    fn stats_on_small_example() {
        let r = jump_stats(&pf(&[2, 4, 2, 1, 3]));
        assert_eq!(r.q, vec![2, 4, 3, 1, 5]);
        assert_eq!(r.jump_total, 3);
        assert_eq!(r.jump_at[&3], 1);
        assert_eq!(r.jump_at[&5], 2);
        assert_eq!(r.lucky, 3);
        assert_eq!(r.lucky_cars, vec![1, 2, 4]);
        assert_eq!(r.tjump, vec![3, 1, 1, 0, 0, 0]);

        let r = jump_stats(&pf(&[3, 1, 2]));
        assert_eq!(r.jump_total, 0);
        assert_eq!(r.lucky, 3);
    }

    #[test]
    fn stats_on_fourteen_car_example() {
        let p = pf(&[10, 2, 6, 5, 7, 1, 13, 10, 4, 1, 14, 9, 11, 5]);
        let r = jump_stats(&p);
        let nonzero: Vec<(usize, usize)> =
            r.jump_at.iter().filter(|(_, &j)| j > 0).map(|(&c, &j)| (c, j)).collect();
        assert_eq!(nonzero, vec![(8, 1), (10, 2), (13, 1), (14, 3)]);
        assert_eq!(
            space_word(&r.q),
            vec![6, 2, 10, 9, 4, 3, 5, 14, 12, 1, 8, 13, 7, 11]
        );
        assert_eq!(r.critical_cars, vec![11, 13, 14]);
        assert_eq!(r.critic, 3);
        assert_eq!(r.jump_total, 7);
    }

    #[test]
    fn critical_examples() {
        assert_eq!(critical_cars(&pf(&[1, 2])), vec![2]);
        assert_eq!(critical_cars(&pf(&[2, 1])), vec![1, 2]);
        assert_eq!(critical_cars_by_simulation(&pf(&[2, 1])), vec![1, 2]);
        assert_eq!(critical_cars_by_simulation(&pf(&[1, 2])), vec![2]);
    }

    #[test]
    fn report_keys() {
        let v = serde_json::to_value(jump_stats(&pf(&[1, 1]))).unwrap();
        for key in [
            "q", "jumpAt", "jumpTotal", "lucky", "luckyCars", "critic", "criticalCars", "tjump",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn sampler_small_cases() {
        assert!(sample_parking_function(0, 1).as_slice().is_empty());
        for seed in 0..20 {
            assert_eq!(sample_parking_function(1, seed).as_slice(), &[1]);
        }
        assert_eq!(sample_parking_function(50, 9), sample_parking_function(50, 9));
    }

    #[test]
    fn sampler_is_uniform_at_n3() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..16_000 {
            let p = sample_parking_function_with(3, &mut rng);
            *counts.entry(p.into_inner()).or_default() += 1;
        }
        assert_eq!(counts.len(), 16);
        let sd = (16_000.0f64 * (1.0 / 16.0) * (15.0 / 16.0)).sqrt();
        for (p, &c) in &counts {
            assert!((c as f64 - 1000.0).abs() <= 5.0 * sd, "{p:?}: {c}");
        }
    }

    fn all_sequences(n: usize, max: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s| {
                    (1..=max).map(move |x| {
                        let mut t = s.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn recognizers_agree_exhaustively() {
        for n in 0..=6 {
            let mut count = 0u64;
            for s in all_sequences(n, n.max(1)) {
                let by_parking = is_parking_function(&prefs(&s));
                assert_eq!(by_parking, satisfies_sorted_criterion(&s), "{s:?}");
                if by_parking {
                    count += 1;
                    let p = pf(&s);
                    let r = jump_stats(&p);
                    let n64 = n as u64;
                    assert_eq!(r.jump_total as u64, n64 * (n64 + 1) / 2 - p.weight());
                    let is_perm = {
                        let mut t = s.clone();
                        t.sort_unstable();
                        t == (1..=n).collect::<Vec<_>>()
                    };
                    assert_eq!(r.lucky == n, is_perm);
                    assert_eq!(critical_cars_by_simulation(&p), r.critical_cars);
                    assert_eq!(r.tjump[n], 0);
                }
            }
            assert_eq!(count, crate::cayley_count(n));
        }
    }

    proptest! {
        #[test]
        fn park_invariants(p in prop::collection::vec(1usize..30, 0..40)) {
            let out = park(&prefs(&p));
            let mut seen = std::collections::HashSet::new();
            for (i, (&q, &want)) in out.q.iter().zip(&p).enumerate() {
                prop_assert!(q >= want);
                prop_assert!(q <= want + i);
                prop_assert!(seen.insert(q));
            }
            prop_assert_eq!(is_parking_function(&prefs(&p)), satisfies_sorted_criterion(&p));
        }

        #[test]
        fn large_sample_jump_identity(seed in any::<u64>()) {
            let p = sample_parking_function(1000, seed);
            let r = jump_stats(&p);
            prop_assert_eq!(r.jump_total as u64, crate::triangular(1000) - p.weight());
            prop_assert_eq!(r.lucky, r.tjump[0]);
            prop_assert_eq!(r.tjump.iter().sum::<usize>(), 1000);
        }
    }
}
