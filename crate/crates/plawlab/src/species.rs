//! The species-table generator.
//!
//! A species table is a list of rows, one per created number. The row for
//! base b holds the multiples b·1, b·2, ..., b·F where the frontier F is the
//! most recently created number. A number is covered when some row contains
//! it. Each step finds the smallest positive integer not covered by any row,
//! appends a row for it, and extends every row to the new frontier.
//!
//! Starting from the two-row table {1: (1, 2), 2: (2, 4)} the step sequence
//! creates 3, 5, 7, 11, and so on: exactly the odd primes. Together with the two
//! initial bases this makes the created set {1, 2} ∪ odd primes, and the
//! table's own notion of prime (a created number other than 2) is {1} ∪ odd
//! primes. [`Convention`] converts between that paper numbering and the
//! standard one.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How table state is kept.
///
/// `Literal` materializes every row, mirroring the tables in the worked
/// examples cell for cell; memory grows with frontier², so it is capped at
/// [`LITERAL_FRONTIER_CAP`]. `Implicit` stores only the bases and the
/// frontier and answers coverage queries arithmetically, which is what the
/// large-limit runs use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    Literal,
    Implicit,
}

/// Which set counts as prime.
///
/// `Paper` treats 1 as prime and 2 as non-prime, so the primes are
/// {1} ∪ {odd primes}. `Standard` is the usual set {2, 3, 5, ...}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Paper,
    Standard,
}

/// Largest frontier a literal table will materialize. A literal table at
/// frontier F holds about F·π(F) cells, which near 10_000 is already ~10^7
/// u64s; beyond that implicit mode is the only sensible choice.
pub const LITERAL_FRONTIER_CAP: u64 = 10_000;

impl fmt::Display for TableMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableMode::Literal => "literal",
            TableMode::Implicit => "implicit",
        })
    }
}

impl FromStr for TableMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(TableMode::Literal),
            "implicit" => Ok(TableMode::Implicit),
            other => Err(Error::domain(format!(
                "unknown table mode {other:?}, expected \"literal\" or \"implicit\""
            ))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Paper => "paper",
            Convention::Standard => "standard",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Convention::Paper),
            "standard" => Ok(Convention::Standard),
            other => Err(Error::domain(format!(
                "unknown convention {other:?}, expected \"paper\" or \"standard\""
            ))),
        }
    }
}

/// A strictly increasing run of primes under a stated convention, complete
/// up to `limit`: it contains every prime of that convention in 1..=limit
/// and nothing else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSequence {
    convention: Convention,
    values: Vec<u64>,
    limit: u64,
}

impl PrimeSequence {
    pub fn new(convention: Convention, values: Vec<u64>, limit: u64) -> Result<Self> {
        for pair in values.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::domain(format!(
                    "prime sequence must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if let Some(&last) = values.last() {
            if last > limit {
                return Err(Error::domain(format!(
                    "prime sequence value {last} exceeds its limit {limit}"
                )));
            }
        }
        Ok(PrimeSequence {
            convention,
            values,
            limit,
        })
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// The completeness bound: every prime <= limit is present.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.values.binary_search(&n).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.iter().copied()
    }

    /// Renumbers the sequence under `target`. The two conventions disagree
    /// only on 1 and 2, so this swaps those endpoints and leaves the odd
    /// primes untouched.
    pub fn to_convention(&self, target: Convention) -> PrimeSequence {
        if self.convention == target {
            return self.clone();
        }
        let mut values = Vec::with_capacity(self.values.len() + 1);
        match target {
            // standard -> paper: drop 2, prepend 1 (1 <= limit always,
            // since a sequence exists only for limit >= 1).
            Convention::Paper => {
                values.push(1);
                values.extend(self.values.iter().copied().filter(|&p| p != 2));
            }
            // paper -> standard: drop 1, prepend 2 when in range.
            Convention::Standard => {
                if self.limit >= 2 {
                    values.push(2);
                }
                values.extend(self.values.iter().copied().filter(|&p| p != 1));
            }
        }
        PrimeSequence {
            convention: target,
            values,
            limit: self.limit,
        }
    }
}

/// One materialized row: `members[k]` is `base * (k + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeciesRow {
    base: u64,
    members: Vec<u64>,
}

impl SpeciesRow {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }
}

/// The iterated table. `bases` is always {1, 2} followed by the odd primes
/// created so far, in order; `frontier` is the last entry of `bases`.
#[derive(Clone, Debug)]
pub struct SpeciesTable {
    mode: TableMode,
    bases: Vec<u64>,
    frontier: u64,
    rows: Vec<SpeciesRow>,
}

impl SpeciesTable {
    /// The two-row starting table {1: (1, 2), 2: (2, 4)} at frontier 2.
    pub fn initial(mode: TableMode) -> SpeciesTable {
        let rows = match mode {
            TableMode::Literal => vec![
                SpeciesRow {
                    base: 1,
                    members: vec![1, 2],
                },
                SpeciesRow {
                    base: 2,
                    members: vec![2, 4],
                },
            ],
            TableMode::Implicit => Vec::new(),
        };
        SpeciesTable {
            mode,
            bases: vec![1, 2],
            frontier: 2,
            rows,
        }
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }

    pub fn frontier(&self) -> u64 {
        self.frontier
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    /// Materialized rows; empty in implicit mode.
    pub fn rows(&self) -> &[SpeciesRow] {
        &self.rows
    }

    /// Whether some row contains `m`, i.e. m = b·k for a base b and a
    /// position k <= frontier. Both modes answer this from the definition,
    /// so it doubles as a cross-check on the literal cell contents.
    pub fn is_covered(&self, m: u64) -> bool {
        if m == 0 {
            return false;
        }
        // Row 1 holds 1..=frontier.
        if m <= self.frontier {
            return true;
        }
        self.bases[1..]
            .iter()
            .any(|&b| m % b == 0 && m / b <= self.frontier)
    }

    /// The smallest positive integer no row contains.
    ///
    /// Only numbers in (F, 2F) need scanning, F the frontier: everything
    /// <= F sits in row 1, and Bertrand's postulate puts a prime (hence an
    /// uncovered number, see `step`) strictly inside (F, 2F). The scan still
    /// carries a hard bound of 2F and reports `WindowExhausted` rather than
    /// walking off it.
    pub fn smallest_missing(&self) -> Result<u64> {
        let bound = self
            .frontier
            .checked_mul(2)
            .ok_or(Error::Overflow {
                context: "doubling the frontier for the missing-number window",
            })?;
        match self.mode {
            TableMode::Literal => {
                // Mirror the examples: mark every materialized cell, then
                // take the first gap. Cells beyond the window are ignored.
                let mut seen = vec![false; bound as usize + 1];
                for row in &self.rows {
                    for &v in &row.members {
                        if v <= bound {
                            seen[v as usize] = true;
                        }
                    }
                }
                for m in 1..=bound {
                    if !seen[m as usize] {
                        return Ok(m);
                    }
                }
            }
            TableMode::Implicit => {
                // In (F, 2F) the quotient condition is automatic: m = b·k
                // with b >= 2 forces k <= m/2 < F. So covered reduces to
                // "divisible by some base >= 2", and for a composite m < F²
                // a prime factor <= sqrt(m) < F is always among the bases.
                for m in (self.frontier + 1)..bound {
                    if m % 2 == 0 {
                        continue;
                    }
                    let covered = self.bases[2..]
                        .iter()
                        .take_while(|&&b| b * b <= m)
                        .any(|&b| m % b == 0);
                    if !covered {
                        return Ok(m);
                    }
                }
            }
        }
        Err(Error::WindowExhausted {
            frontier: self.frontier,
            bound,
        })
    }

    /// Creates the next number: finds the smallest missing m, appends its
    /// row, and extends all rows to the new frontier m. Returns m.
    ///
    /// The created number is always prime: a composite in the window has a
    /// base as a factor and is covered. By induction the bases stay
    /// {1, 2} ∪ {odd primes <= frontier}, which is why coverage scans above
    /// may treat `bases` as the primes up to the frontier.
    pub fn step(&mut self) -> Result<u64> {
        let created = self.smallest_missing()?;
        self.admit(created)?;
        Ok(created)
    }

    // Extends the table to frontier `created`; callers guarantee `created`
    // is the current smallest missing number.
    fn admit(&mut self, created: u64) -> Result<()> {
        if self.mode == TableMode::Literal {
            if created > LITERAL_FRONTIER_CAP {
                return Err(Error::Capacity {
                    what: format!(
                        "literal table frontier {created} exceeds the cap {LITERAL_FRONTIER_CAP}; \
                         use implicit mode for large limits"
                    ),
                });
            }
            // The largest cell is created², from the new row's last member.
            for row in &mut self.rows {
                for k in (self.frontier + 1)..=created {
                    let cell = row.base.checked_mul(k).ok_or(Error::Overflow {
                        context: "extending a literal species row",
                    })?;
                    row.members.push(cell);
                }
            }
            let members = (1..=created)
                .map(|k| {
                    created.checked_mul(k).ok_or(Error::Overflow {
                        context: "materializing a new species row",
                    })
                })
                .collect::<Result<Vec<u64>>>()?;
            self.rows.push(SpeciesRow {
                base: created,
                members,
            });
        }
        self.bases.push(created);
        self.frontier = created;
        Ok(())
    }

    /// CSV snapshot of a literal table, one row per line:
    /// `base,member1,...,memberF`.
    pub fn to_csv(&self) -> Result<String> {
        if self.mode != TableMode::Literal {
            return Err(Error::domain(
                "csv snapshot requires a literal-mode table".to_string(),
            ));
        }
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.base.to_string());
            for &v in &row.members {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Runs the table until the next creation would exceed `limit` and returns
/// the created primes under the paper convention: {1} ∪ {odd primes} ∩
/// 1..=limit.
///
/// The bound is checked before admitting, so a literal run never pays for
/// (or errors on) a frontier past the last in-range prime.
pub fn generate(limit: u64, mode: TableMode) -> Result<PrimeSequence> {
    if limit == 0 {
        return Err(Error::domain("generation limit must be at least 1".to_string()));
    }
    let mut values = vec![1];
    if limit >= 3 {
        let mut table = SpeciesTable::initial(mode);
        loop {
            let next = table.smallest_missing()?;
            if next > limit {
                break;
            }
            table.admit(next)?;
            values.push(next);
        }
    }
    PrimeSequence::new(Convention::Paper, values, limit)
}

/// Membership oracle backed by a growing implicit table.
///
/// `is_prime(n)` steps the shared table until the frontier reaches n, then
/// answers from the created set. Queries arriving in any order reuse all
/// prior growth.
#[derive(Clone, Debug)]
pub struct PrimeLawCache {
    table: SpeciesTable,
}

impl PrimeLawCache {
    pub fn new() -> PrimeLawCache {
        PrimeLawCache {
            table: SpeciesTable::initial(TableMode::Implicit),
        }
    }

    pub fn frontier(&self) -> u64 {
        self.table.frontier()
    }

    /// Paper-convention primality: true for 1 and the odd primes.
    pub fn is_prime(&mut self, n: u64) -> Result<bool> {
        if n == 0 {
            return Err(Error::domain("primality is defined for n >= 1".to_string()));
        }
        while self.table.frontier() < n {
            self.table.step()?;
        }
        Ok(n != 2 && self.table.bases.binary_search(&n).is_ok())
    }
}

impl Default for PrimeLawCache {
    fn default() -> Self {
        PrimeLawCache::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic;
    use proptest::prelude::*;

    fn row(base: u64, members: &[u64]) -> SpeciesRow {
        SpeciesRow {
            base,
            members: members.to_vec(),
        }
    }

    #[test]
    fn initial_table_layout() {
        let t = SpeciesTable::initial(TableMode::Literal);
        assert_eq!(t.frontier(), 2);
        assert_eq!(t.bases(), &[1, 2]);
        assert_eq!(t.rows(), &[row(1, &[1, 2]), row(2, &[2, 4])]);
        assert_eq!(t.to_csv().unwrap(), "1,1,2\n2,2,4\n");
    }

    #[test]
    fn first_step_creates_three() {
        let mut t = SpeciesTable::initial(TableMode::Literal);
        assert_eq!(t.smallest_missing().unwrap(), 3);
        assert_eq!(t.step().unwrap(), 3);
        assert_eq!(
            t.rows(),
            &[
                row(1, &[1, 2, 3]),
                row(2, &[2, 4, 6]),
                row(3, &[3, 6, 9]),
            ]
        );
    }

    #[test]
    fn second_step_creates_five_at_five_positions() {
        let mut t = SpeciesTable::initial(TableMode::Literal);
        t.step().unwrap();
        assert_eq!(t.step().unwrap(), 5);
        assert_eq!(
            t.to_csv().unwrap(),
            "1,1,2,3,4,5\n2,2,4,6,8,10\n3,3,6,9,12,15\n5,5,10,15,20,25\n"
        );
        // 6 = 2·3, covered; 7 has no base factor and is next.
        assert!(t.is_covered(6));
        assert_eq!(t.smallest_missing().unwrap(), 7);
    }

    #[test]
    fn created_sequence_matches_brute_force() {
        // Brute-force oracle: the smallest m > F not divisible by any base
        // >= 2 (the quotient condition is automatic inside the window).
        let mut t = SpeciesTable::initial(TableMode::Implicit);
        for _ in 0..200 {
            let f = t.frontier();
            let mut expect = f + 1;
            while t.bases()[1..].iter().any(|&b| expect % b == 0) {
                expect += 1;
            }
            assert_eq!(t.step().unwrap(), expect);
        }
    }

    #[test]
    fn modes_agree_for_two_hundred_steps() {
        let mut lit = SpeciesTable::initial(TableMode::Literal);
        let mut imp = SpeciesTable::initial(TableMode::Implicit);
        for _ in 0..200 {
            assert_eq!(lit.step().unwrap(), imp.step().unwrap());
            assert_eq!(lit.bases(), imp.bases());
        }
        assert_eq!(lit.frontier(), 1229);
    }

    #[test]
    fn windows_stay_inside_bertrand_bound() {
        let mut t = SpeciesTable::initial(TableMode::Implicit);
        let mut prev = t.frontier();
        for _ in 0..2000 {
            let p = t.step().unwrap();
            assert!(p > prev && p < 2 * prev, "created {p} outside ({prev}, {})", 2 * prev);
            // Consecutive creations past 3 differ by at least 2.
            if prev >= 3 {
                assert!(p - prev >= 2);
            }
            prev = p;
        }
    }

    #[test]
    fn literal_coverage_matches_materialized_cells() {
        let mut t = SpeciesTable::initial(TableMode::Literal);
        for _ in 0..25 {
            t.step().unwrap();
        }
        let mut cells = std::collections::BTreeSet::new();
        for r in t.rows() {
            cells.extend(r.members().iter().copied());
        }
        let max = t.frontier() * t.frontier();
        for m in 0..=max + 5 {
            assert_eq!(t.is_covered(m), cells.contains(&m), "coverage mismatch at {m}");
        }
    }

    #[test]
    fn generate_small_limits() {
        assert_eq!(generate(1, TableMode::Implicit).unwrap().values(), &[1]);
        assert_eq!(generate(2, TableMode::Implicit).unwrap().values(), &[1]);
        assert_eq!(generate(4, TableMode::Literal).unwrap().values(), &[1, 3]);
        assert_eq!(
            generate(11, TableMode::Literal).unwrap().values(),
            &[1, 3, 5, 7, 11]
        );
        assert!(generate(0, TableMode::Implicit).is_err());
    }

    #[test]
    fn generate_hundred_matches_sieve() {
        let plaw = generate(100, TableMode::Literal).unwrap();
        let sieve = classic::sieve_primes(100).unwrap();
        assert_eq!(plaw.values(), sieve.to_convention(Convention::Paper).values());
        assert_eq!(plaw.len(), 25);
    }

    #[test]
    fn literal_cap_is_enforced() {
        let mut t = SpeciesTable::initial(TableMode::Literal);
        let err = t.admit(LITERAL_FRONTIER_CAP + 1).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn overflow_window_is_reported() {
        let t = SpeciesTable {
            mode: TableMode::Implicit,
            bases: vec![1, 2, 3],
            frontier: u64::MAX / 2 + 1,
            rows: Vec::new(),
        };
        assert!(matches!(
            t.smallest_missing().unwrap_err(),
            Error::Overflow { .. }
        ));
    }

    #[test]
    fn cache_answers_out_of_order() {
        let mut cache = PrimeLawCache::new();
        assert!(cache.is_prime(97).unwrap());
        assert!(cache.is_prime(1).unwrap());
        assert!(!cache.is_prime(2).unwrap());
        assert!(!cache.is_prime(9).unwrap());
        assert!(cache.is_prime(3).unwrap());
        assert!(!cache.is_prime(91).unwrap(), "91 = 7 * 13");
        assert!(cache.is_prime(0).is_err());
        assert!(cache.frontier() >= 97);
    }

    #[test]
    fn convention_round_trip() {
        let paper = generate(30, TableMode::Implicit).unwrap();
        let standard = paper.to_convention(Convention::Standard);
        assert_eq!(standard.values(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(standard.to_convention(Convention::Paper), paper);
        // Below 2 the standard set is empty.
        let tiny = generate(1, TableMode::Implicit).unwrap();
        assert!(tiny.to_convention(Convention::Standard).is_empty());
    }

    proptest! {
        #[test]
        fn generated_set_is_one_and_odd_primes(limit in 1u64..3000) {
            let got = generate(limit, TableMode::Implicit).unwrap();
            let want: Vec<u64> = (1..=limit)
                .filter(|&n| n == 1 || (n % 2 == 1 && classic::trial_division_is_prime(n)))
                .collect();
            prop_assert_eq!(got.values(), want.as_slice());
        }
    }
}
