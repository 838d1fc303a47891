//! Classical primality oracles and prime counting.
//!
//! Two sieve implementations live here on purpose. [`sieve_primes`] is a
//! monolithic bit-packed sieve of Eratosthenes over the odd numbers;
//! [`prime_counts_at`] runs an independently coded segmented sieve whose
//! blocks are processed in parallel. They share no marking logic, so their
//! agreement in tests is a genuine cross-check, and either can serve as an
//! oracle for the species-table generator.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::species::{Convention, PrimeSequence};

/// Ceiling for the monolithic sieve: one bit per odd number up to here is
/// 256 MiB, past which the segmented path is the right tool.
pub const MONOLITHIC_LIMIT_CAP: u64 = 1 << 32;

/// Ceiling for segmented scans. Memory stays tiny at any limit; this guards
/// against runs that would take hours by accident.
pub const SEGMENTED_LIMIT_CAP: u64 = 10_000_000_000;

/// Integers spanned by one segment. 2^18 bits keeps a block inside L2 while
/// amortizing the per-block offset setup across enough marks.
const BLOCK_SPAN: u64 = 1 << 18;

/// Deterministic primality by trial division over 6k±1 candidates.
pub fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Primality via the addition-only formulation: n is prime when n − 1 is a
/// multiple of 2 (even) and for every b strictly between 1 and n that
/// divides n, the quotient fails that evenness test, i.e. (n / b) − 1 is
/// odd. Dividing is only repeated subtraction here, so the definition needs
/// nothing beyond addition; under it the primes are exactly {1} ∪ {odd
/// primes}; 1 passes vacuously and 2 fails the first clause.
pub fn is_addition_prime(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    if (n - 1) % 2 != 0 {
        return false;
    }
    for b in 2..n {
        if b * b > n {
            break;
        }
        if n % b == 0 {
            // b and n/b are both proper divisors; reject if either
            // quotient n/b or quotient b leaves an even predecessor.
            let q = n / b;
            if (q - 1) % 2 == 0 || (b - 1) % 2 == 0 {
                return false;
            }
        }
    }
    true
}

/// All standard primes <= limit from a monolithic sieve over the odds.
pub fn sieve_primes(limit: u64) -> Result<PrimeSequence> {
    if limit < 2 {
        return Err(Error::domain(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    if limit > MONOLITHIC_LIMIT_CAP {
        return Err(Error::capacity(format!(
            "monolithic sieve limit {limit} exceeds {MONOLITHIC_LIMIT_CAP}; \
             use the segmented counters instead"
        )));
    }
    // Bit i stands for the odd number 2i + 1; set means composite.
    let odd_count = ((limit + 1) / 2) as usize;
    let mut composite = vec![0u64; odd_count.div_ceil(64)];
    composite[0] |= 1; // 1 is not prime
    let mut i = 1usize;
    loop {
        let p = 2 * i as u64 + 1;
        if p * p > limit {
            break;
        }
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            // Odd multiples of p from p² are indices i(2i+2), step p... in
            // index terms: start (p² − 1)/2, stride p.
            let mut j = ((p * p - 1) / 2) as usize;
            while j < odd_count {
                composite[j / 64] |= 1 << (j % 64);
                j += p as usize;
            }
        }
        i += 1;
    }
    let mut values = Vec::new();
    values.push(2);
    for i in 1..odd_count {
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            values.push(2 * i as u64 + 1);
        }
    }
    PrimeSequence::new(Convention::Standard, values, limit)
}

/// One segment [lo, hi) of a segmented sieve, one bit per integer.
/// After [`SieveBlock::sieve`] a clear bit means prime.
pub struct SieveBlock {
    lo: u64,
    hi: u64,
    composite: Vec<u64>,
}

impl SieveBlock {
    pub fn new(lo: u64, hi: u64) -> Result<SieveBlock> {
        if lo >= hi {
            return Err(Error::domain(format!(
                "empty sieve block [{lo}, {hi})"
            )));
        }
        let span = hi - lo;
        if span > (1 << 26) {
            return Err(Error::capacity(format!(
                "sieve block of {span} integers; segment scans should stay cache-sized"
            )));
        }
        let mut block = SieveBlock {
            lo,
            hi,
            composite: vec![0u64; (span as usize).div_ceil(64)],
        };
        // 0 and 1 are not prime; everything else starts presumed prime.
        for n in lo..hi.min(2) {
            block.mark(n);
        }
        Ok(block)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    fn mark(&mut self, n: u64) {
        let i = (n - self.lo) as usize;
        self.composite[i / 64] |= 1 << (i % 64);
    }

    /// Marks composites using `base_primes`, which must contain every prime
    /// p with p² < hi for the block's primality bits to be exact.
    pub fn sieve(&mut self, base_primes: &[u64]) {
        for &p in base_primes {
            // First multiple of p in range that is neither p itself nor
            // below p² (smaller composites have a smaller factor).
            let start = (p * p).max(self.lo.div_ceil(p) * p);
            let mut m = start;
            while m < self.hi {
                self.mark(m);
                m += p;
            }
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        debug_assert!(self.lo <= n && n < self.hi);
        let i = (n - self.lo) as usize;
        self.composite[i / 64] & (1 << (i % 64)) == 0
    }

    /// Primes in [lo, min(end, hi)), counted word-wise.
    pub fn count_primes_below(&self, end: u64) -> u64 {
        let stop = end.min(self.hi);
        if stop <= self.lo {
            return 0;
        }
        let bits = (stop - self.lo) as usize;
        let mut count = 0u64;
        for (w, &word) in self.composite.iter().enumerate() {
            let lo_bit = w * 64;
            if lo_bit >= bits {
                break;
            }
            let used = (bits - lo_bit).min(64);
            let mask = if used == 64 { !0u64 } else { (1u64 << used) - 1 };
            count += (!word & mask).count_ones() as u64;
        }
        count
    }

    pub fn count_primes(&self) -> u64 {
        self.count_primes_below(self.hi)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (self.lo..self.hi).filter(move |&n| self.is_prime(n))
    }
}

fn validate_checkpoints(checkpoints: &[u64]) -> Result<u64> {
    let &max = checkpoints
        .last()
        .ok_or_else(|| Error::domain("at least one checkpoint is required".to_string()))?;
    for pair in checkpoints.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::domain(format!(
                "checkpoints must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if max > SEGMENTED_LIMIT_CAP {
        return Err(Error::capacity(format!(
            "checkpoint {max} exceeds the segmented scan cap {SEGMENTED_LIMIT_CAP}"
        )));
    }
    Ok(max)
}

/// π at each checkpoint from one pass of a segmented sieve. Checkpoints must
/// be strictly increasing. Blocks are sieved in parallel and folded back in
/// block order, so results do not depend on thread scheduling.
pub fn prime_counts_at(checkpoints: &[u64]) -> Result<Vec<u64>> {
    let max = validate_checkpoints(checkpoints)?;
    if max < 2 {
        return Ok(vec![0; checkpoints.len()]);
    }
    let base = sieve_primes(max.isqrt().max(2))?;
    let base: Vec<u64> = base.values().to_vec();

    let block_ranges: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut lo = 2u64;
        while lo <= max {
            let hi = max.checked_add(1).unwrap().min(lo + BLOCK_SPAN);
            v.push((lo, hi));
            lo = hi;
        }
        v
    };

    // Per block: total primes, plus partial counts for checkpoints that
    // land inside it (prime count at c needs [lo, c]).
    let sieved: Vec<(u64, Vec<(usize, u64)>)> = block_ranges
        .par_iter()
        .map(|&(lo, hi)| {
            let mut block = SieveBlock::new(lo, hi)?;
            block.sieve(&base);
            let partials = checkpoints
                .iter()
                .enumerate()
                .filter(|&(_, &c)| lo <= c && c < hi)
                .map(|(idx, &c)| (idx, block.count_primes_below(c + 1)))
                .collect();
            Ok((block.count_primes(), partials))
        })
        .collect::<Result<_>>()?;

    let mut counts = vec![0u64; checkpoints.len()];
    let mut running = 0u64;
    for (total, partials) in sieved {
        for (idx, inside) in partials {
            counts[idx] = running + inside;
        }
        running += total;
    }
    Ok(counts)
}

/// π(limit), the number of standard primes <= limit.
pub fn prime_count(limit: u64) -> Result<u64> {
    Ok(prime_counts_at(&[limit.max(1)])?[0])
}

/// Starting points of adjacent prime pairs: every n <= limit − 1 with n and
/// n + 1 both prime. Over the integers this is exactly [2], which the
/// experiment suites confirm by scanning.
pub fn adjacent_prime_pairs(limit: u64) -> Result<Vec<u64>> {
    if limit < 3 {
        return Err(Error::domain(format!(
            "adjacent-pair scan needs limit >= 3, got {limit}"
        )));
    }
    if limit > SEGMENTED_LIMIT_CAP {
        return Err(Error::capacity(format!(
            "adjacent-pair scan limit {limit} exceeds {SEGMENTED_LIMIT_CAP}"
        )));
    }
    let base = sieve_primes(limit.isqrt().max(2))?;
    let base: Vec<u64> = base.values().to_vec();
    let mut pairs = Vec::new();
    let mut prev_was_prime = false; // primality of lo − 1 across blocks
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (limit + 1).min(lo + BLOCK_SPAN);
        let mut block = SieveBlock::new(lo, hi)?;
        block.sieve(&base);
        for n in lo..hi {
            let here = block.is_prime(n);
            if prev_was_prime && here {
                pairs.push(n - 1);
            }
            prev_was_prime = here;
        }
        lo = hi;
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trial_division_small_cases() {
        let primes: Vec<u64> = (0..30).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(trial_division_is_prime(97));
        assert!(!trial_division_is_prime(91));
    }

    #[test]
    fn addition_primality_worked_examples() {
        // 1: zero is a multiple of 2 and there is no b between 1 and 1.
        assert!(is_addition_prime(1));
        // 2: 2 − 1 = 1 is not a multiple of 2.
        assert!(!is_addition_prime(2));
        assert!(is_addition_prime(3));
        // 9 = 3·3 and 3 − 1 = 2 is even.
        assert!(!is_addition_prime(9));
        assert!(is_addition_prime(13));
        assert!(!is_addition_prime(15));
        assert!(!is_addition_prime(0));
    }

    #[test]
    fn addition_primality_is_one_and_odd_primes() {
        for n in 1..=20_000u64 {
            let want = n == 1 || (n % 2 == 1 && trial_division_is_prime(n));
            assert_eq!(is_addition_prime(n), want, "mismatch at {n}");
        }
    }

    #[test]
    fn sieve_small_limits() {
        assert_eq!(sieve_primes(2).unwrap().values(), &[2]);
        assert_eq!(sieve_primes(3).unwrap().values(), &[2, 3]);
        assert_eq!(sieve_primes(10).unwrap().values(), &[2, 3, 5, 7]);
        assert!(sieve_primes(1).is_err());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let seq = sieve_primes(50_000).unwrap();
        let want: Vec<u64> = (2..=50_000).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(seq.values(), want.as_slice());
    }

    #[test]
    fn prime_counts_reference_values() {
        // (limit, π(limit))
        let table = [
            (1u64, 0u64),
            (2, 1),
            (10, 4),
            (100, 25),
            (1_000, 168),
            (10_000, 1_229),
            (100_000, 9_592),
            (1_000_000, 78_498),
        ];
        for (limit, want) in table {
            assert_eq!(prime_count(limit).unwrap(), want, "pi({limit})");
        }
    }

    #[test]
    fn multi_checkpoint_pass_matches_single_counts() {
        let cps = [2u64, 97, 1_000, 262_143, 262_144, 262_145, 1_000_000];
        let all = prime_counts_at(&cps).unwrap();
        for (i, &c) in cps.iter().enumerate() {
            assert_eq!(all[i], prime_count(c).unwrap(), "at {c}");
        }
        assert!(prime_counts_at(&[10, 10]).is_err());
        assert!(prime_counts_at(&[]).is_err());
    }

    #[test]
    fn segmented_agrees_with_monolithic() {
        let limit = 1_000_000u64;
        let mono = sieve_primes(limit).unwrap();
        assert_eq!(prime_count(limit).unwrap(), mono.len() as u64);
        // Spot membership across a block boundary.
        let mut block = SieveBlock::new(262_100, 262_200).unwrap();
        block.sieve(&sieve_primes(512 + 1).unwrap().values().to_vec());
        for n in 262_100..262_200 {
            assert_eq!(block.is_prime(n), mono.contains(n), "at {n}");
        }
    }

    #[test]
    fn block_counting_handles_partial_words() {
        let mut block = SieveBlock::new(2, 300).unwrap();
        block.sieve(sieve_primes(17).unwrap().values());
        assert_eq!(block.count_primes_below(101), 25);
        assert_eq!(block.count_primes_below(2), 0);
        assert_eq!(block.count_primes(), 62); // π(299)
        assert_eq!(block.primes().take(4).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn adjacent_pairs_is_exactly_two() {
        assert_eq!(adjacent_prime_pairs(100_000).unwrap(), vec![2]);
        assert_eq!(adjacent_prime_pairs(3).unwrap(), vec![2]);
        assert!(adjacent_prime_pairs(2).is_err());
    }

    #[test]
    fn capacity_guards() {
        assert!(matches!(
            sieve_primes(MONOLITHIC_LIMIT_CAP + 1).unwrap_err(),
            Error::Capacity { .. }
        ));
        assert!(matches!(
            prime_count(SEGMENTED_LIMIT_CAP + 1).unwrap_err(),
            Error::Capacity { .. }
        ));
    }

    proptest! {
        #[test]
        fn counting_is_consistent_with_naive(n in 1u64..5_000) {
            let naive = (2..=n).filter(|&m| trial_division_is_prime(m)).count() as u64;
            prop_assert_eq!(prime_count(n).unwrap(), naive);
        }
    }
}
