//! On-demand prime generation with a segmented sieve of Eratosthenes.
//!
//! A [`SieveState`] holds every prime up to `n_sieve`. When the next prime is
//! needed and the list is exhausted, the sieve resumes over a fresh segment
//! whose bounds come from the explicit estimate
//! `n(ln n + ln ln n - 1) < p_n < n(ln n + ln ln n)` (valid for `n >= 6`),
//! so each extension is guaranteed to produce at least one new prime.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("prime bounds hold only for n >= 6, got {0}")]
    Domain(u64),
    #[error("{0} is not in the current prime list")]
    NotAPrimeInState(u64),
}

/// How a segment is crossed off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SieveMode {
    /// One slot per integer, crossing off multiples of every base prime.
    Plain,
    /// Only integers congruent to 1 or 5 mod 6 get a slot; multiples of 2
    /// and 3 are never touched.
    #[default]
    Wheel6,
}

const INITIAL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const INITIAL_SIEVE_LIMIT: u64 = 16;

/// The primes `<= n_sieve`, ascending and complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveState {
    primes: Vec<u64>,
    n_sieve: u64,
    mode: SieveMode,
}

impl Default for SieveState {
    fn default() -> Self {
        Self::initial()
    }
}

impl SieveState {
    /// `P = [2, 3, 5, 7, 11, 13]`, `n_sieve = 16`, wheel sieving.
    pub fn initial() -> Self {
        Self::with_mode(SieveMode::default())
    }

    pub fn with_mode(mode: SieveMode) -> Self {
        Self {
            primes: INITIAL_PRIMES.to_vec(),
            n_sieve: INITIAL_SIEVE_LIMIT,
            mode,
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn n_sieve(&self) -> u64 {
        self.n_sieve
    }

    pub fn mode(&self) -> SieveMode {
        self.mode
    }

    /// The `i`-th prime (0-based) currently known.
    pub fn get(&self, i: usize) -> Option<u64> {
        self.primes.get(i).copied()
    }

    /// Inclusive integer range the next call to [`SieveState::extend`] will sieve.
    pub fn next_segment(&self) -> (u64, u64) {
        let n = self.primes.len() as u64 + 1;
        let (lower, upper) = prime_bounds(n).expect("the list always holds at least 6 primes");
        let start = lower.max(self.n_sieve + 1);
        (start, upper.max(start))
    }

    /// Sieves the next segment, appending at least one prime.
    pub fn extend(mut self) -> Self {
        self.extend_in_place();
        self
    }

    pub(crate) fn extend_in_place(&mut self) {
        let (start, end) = self.next_segment();
        let before = self.primes.len();
        match self.mode {
            SieveMode::Plain => sieve_plain(&mut self.primes, start, end),
            SieveMode::Wheel6 => sieve_wheel6(&mut self.primes, start, end),
        }
        self.n_sieve = end;
        debug_assert!(
            self.primes.len() > before,
            "segment [{start}, {end}] had no prime"
        );
    }

    /// The successor of `p` in the list, extending the sieve first when `p` is
    /// the last known prime.
    pub fn next_prime(mut self, p: u64) -> Result<(Self, u64), PrimeError> {
        let i = self
            .primes
            .binary_search(&p)
            .map_err(|_| PrimeError::NotAPrimeInState(p))?;
        let next = self.successor_index(i);
        let prime = self.primes[next];
        Ok((self, prime))
    }

    /// Index of the prime following `primes[i]`, extending the sieve if needed.
    pub(crate) fn successor_index(&mut self, i: usize) -> usize {
        if i + 1 == self.primes.len() {
            self.extend_in_place();
        }
        i + 1
    }

    /// Grows the list until it holds at least `count` primes.
    pub fn ensure_count(mut self, count: usize) -> Self {
        while self.primes.len() < count {
            self.extend_in_place();
        }
        self
    }

    /// Grows the list until every prime `<= limit` is known.
    pub fn ensure_limit(mut self, limit: u64) -> Self {
        while self.n_sieve < limit {
            self.extend_in_place();
        }
        self
    }
}

/// `(floor(n(ln n + ln ln n - 1)), ceil(n(ln n + ln ln n)))`, which strictly
/// bracket the `n`-th prime for `n >= 6`.
pub fn prime_bounds(n: u64) -> Result<(u64, u64), PrimeError> {
    if n < 6 {
        return Err(PrimeError::Domain(n));
    }
    let x = n as f64;
    let ln = x.ln();
    let lnln = ln.ln();
    let lower = (x * (ln + lnln - 1.0)).floor() as u64;
    let upper = (x * (ln + lnln)).ceil() as u64;
    Ok((lower, upper))
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = SieveState::initial().ensure_count(count).primes;
    primes.truncate(count);
    primes
}

/// Textbook sieve over `[0, limit]`; the independent reference for the
/// segmented sieve.
pub fn naive_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut i = 2;
    while i * i <= limit {
        if !composite[i] {
            let mut m = i * i;
            while m <= limit {
                composite[m] = true;
                m += i;
            }
        }
        i += 1;
    }
    (2..=limit).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

fn base_primes(primes: &[u64], end: u64) -> impl Iterator<Item = u64> + '_ {
    primes.iter().copied().take_while(move |&p| p * p <= end)
}

fn sieve_plain(primes: &mut Vec<u64>, start: u64, end: u64) {
    let mut composite = vec![false; (end - start + 1) as usize];
    let base: Vec<u64> = base_primes(primes, end).collect();
    for p in base {
        let mut m = (p * p).max(start.div_ceil(p) * p);
        while m <= end {
            composite[(m - start) as usize] = true;
            m += p;
        }
    }
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| start + i as u64),
    );
}

/// Number of integers in `[0, x)` congruent to 1 or 5 mod 6.
fn wheel_rank(x: u64) -> u64 {
    2 * (x / 6) + u64::from(x % 6 >= 2)
}

/// Inverse of [`wheel_rank`] on wheel members.
fn wheel_value(rank: u64) -> u64 {
    6 * (rank / 2) + if rank.is_multiple_of(2) { 1 } else { 5 }
}

/// Advances `q` to the smallest wheel member `>= q`.
fn next_wheel_member(q: u64) -> u64 {
    match q % 6 {
        0 => q + 1,
        1 | 5 => q,
        r => q + (5 - r),
    }
}

fn sieve_wheel6(primes: &mut Vec<u64>, start: u64, end: u64) {
    debug_assert!(start > 3);
    let first_rank = wheel_rank(start);
    let slots = wheel_rank(end + 1) - first_rank;
    let mut composite = vec![false; slots as usize];
    let base: Vec<u64> = base_primes(primes, end).filter(|&p| p >= 5).collect();
    for p in base {
        // Multiples p*q with q itself on the wheel are exactly the wheel members
        // divisible by p.
        let mut q = next_wheel_member(p.max(start.div_ceil(p)));
        while p * q <= end {
            composite[(wheel_rank(p * q) - first_rank) as usize] = true;
            q += if q % 6 == 1 { 4 } else { 2 };
        }
    }
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| wheel_value(first_rank + i as u64)),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state() {
        let s = SieveState::initial();
        assert_eq!(s.primes(), &[2, 3, 5, 7, 11, 13]);
        assert_eq!(s.n_sieve(), 16);
        assert_eq!(s.primes(), naive_sieve(16).as_slice());
    }

    #[test]
    fn bounds_examples() {
        // Values from direct evaluation; p_6 = 13 and p_10 = 29 from the naive sieve.
        assert_eq!(prime_bounds(6), Ok((8, 15)));
        assert_eq!(prime_bounds(7), Ok((11, 19)));
        assert_eq!(prime_bounds(10), Ok((21, 32)));
        assert_eq!(prime_bounds(5), Err(PrimeError::Domain(5)));
        assert_eq!(prime_bounds(0), Err(PrimeError::Domain(0)));
        let naive = naive_sieve(40);
        assert_eq!(naive[5], 13);
        assert_eq!(naive[9], 29);
    }

    #[test]
    fn first_extension_sieves_17_to_19() {
        for mode in [SieveMode::Plain, SieveMode::Wheel6] {
            let s = SieveState::with_mode(mode);
            assert_eq!(s.next_segment(), (17, 19));
            let s = s.extend();
            assert_eq!(s.primes(), &[2, 3, 5, 7, 11, 13, 17, 19]);
            assert_eq!(s.n_sieve(), 19);
        }
    }

    #[test]
    fn next_prime_examples() {
        let (s, p) = SieveState::initial().next_prime(2).unwrap();
        assert_eq!(p, 3);
        assert_eq!(s, SieveState::initial());

        let (s, p) = SieveState::initial().next_prime(13).unwrap();
        assert_eq!(p, 17);
        assert_eq!(s.n_sieve(), 19);

        assert_eq!(
            SieveState::initial().next_prime(4),
            Err(PrimeError::NotAPrimeInState(4))
        );
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_sieve(16), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(naive_sieve(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(naive_sieve(2), vec![2]);
        assert!(naive_sieve(1).is_empty());
    }

    #[test]
    fn wheel_helpers() {
        for x in [1u64, 5, 7, 11, 13, 17, 19, 23, 25, 35, 37] {
            assert_eq!(wheel_value(wheel_rank(x)), x);
            assert_eq!(next_wheel_member(x), x);
        }
        assert_eq!(next_wheel_member(6), 7);
        assert_eq!(next_wheel_member(8), 11);
        assert_eq!(next_wheel_member(9), 11);
        assert_eq!(next_wheel_member(10), 11);
        assert_eq!(wheel_rank(17), 5);
    }

    #[test]
    fn both_modes_match_naive() {
        let naive = naive_sieve(200_000);
        for mode in [SieveMode::Plain, SieveMode::Wheel6] {
            let s = SieveState::with_mode(mode).ensure_limit(200_000);
            let got: Vec<u64> = s.primes().iter().copied().take_while(|&p| p <= 200_000).collect();
            assert_eq!(got, naive, "{mode:?}");
        }
    }

    #[test]
    fn extension_always_adds_a_prime_and_segments_are_contiguous() {
        let mut s = SieveState::initial();
        // Each segment is about as long as the prime count, so growth is geometric.
        while s.n_sieve() < 20_000_000 {
            let (start, end) = s.next_segment();
            assert_eq!(
                start,
                s.n_sieve() + 1,
                "segments must neither overlap nor leave gaps"
            );
            let before = s.primes().len();
            s = s.extend();
            assert!(s.primes().len() > before);
            assert_eq!(s.n_sieve(), end);
        }
    }

    #[test]
    fn ascending_scan_never_repeats() {
        let mut s = SieveState::initial();
        let mut p = 2;
        for _ in 0..5_000 {
            let (next_state, q) = s.next_prime(p).unwrap();
            assert!(q > p);
            s = next_state;
            p = q;
        }
    }
}
