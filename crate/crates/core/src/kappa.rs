//! The disbelief (ranking) calculus.
//!
//! A ranking function assigns every world a non-negative integer degree of
//! disbelief, with at least one world ranked 0. Rank 0 means "not
//! disbelieved"; larger ranks mean more firmly disbelieved. Events extend by
//! minimum, conditioning subtracts the evidence's rank, and the signed
//! belief value summarizes how firmly an event is believed or disbelieved.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::{Event, WorldSpace};

/// Enumeration guard for [`RankingFunction::plain_beliefs`], which walks all
/// 2^n events.
pub const PLAIN_BELIEF_GUARD: usize = 20;

/// A rank extended with the infinite sentinel used for the empty event and
/// for worlds outside the evidence. `Infinite` compares above every finite
/// rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRank {
    Finite(u32),
    Infinite,
}

impl ExtRank {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRank::Finite(_))
    }

    /// The finite rank, or a panic on the infinite sentinel.
    pub fn finite(&self) -> u32 {
        match self {
            ExtRank::Finite(r) => *r,
            ExtRank::Infinite => panic!("rank is infinite"),
        }
    }
}

impl fmt::Display for ExtRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRank::Finite(r) => write!(f, "{r}"),
            ExtRank::Infinite => write!(f, "inf"),
        }
    }
}

/// Signed belief in an event: positive means believed, negative means
/// disbelieved, zero means suspended judgement. The full space and the
/// empty event take the infinite sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BeliefValue {
    MinusInfinity,
    Finite(i64),
    PlusInfinity,
}

impl BeliefValue {
    /// Believed to some positive degree (including the certain full space).
    pub fn is_believed(&self) -> bool {
        match self {
            BeliefValue::PlusInfinity => true,
            BeliefValue::Finite(m) => *m > 0,
            BeliefValue::MinusInfinity => false,
        }
    }
}

impl fmt::Display for BeliefValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeliefValue::MinusInfinity => write!(f, "-inf"),
            BeliefValue::Finite(m) => write!(f, "{m}"),
            BeliefValue::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// Occupancy counts (k_0, ..., k_s) of the rank levels of a ranking
/// function: k_i worlds carry rank i. The last stratum is non-empty by
/// definition of s; inner strata may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrataVector {
    counts: Vec<usize>,
}

impl StrataVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        match counts.last() {
            Some(&last) if last > 0 => Ok(Self { counts }),
            _ => Err(Error::InvalidStrata),
        }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// s, the highest rank.
    pub fn max_rank(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn world_count(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Dense means no empty stratum.
    pub fn is_dense(&self) -> bool {
        self.counts.iter().all(|&k| k > 0)
    }
}

impl fmt::Display for StrataVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// A ranking (disbelief) function: a non-negative integer rank per world,
/// with minimum rank exactly 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingFunction {
    space: WorldSpace,
    ranks: Vec<u32>,
}

impl RankingFunction {
    pub fn new(space: WorldSpace, ranks: Vec<u32>) -> Result<Self> {
        if ranks.len() != space.world_count() {
            return Err(Error::LengthMismatch {
                expected: space.world_count(),
                got: ranks.len(),
            });
        }
        let min = *ranks.iter().min().expect("space is non-empty");
        if min != 0 {
            return Err(Error::MinRankNotZero(min));
        }
        Ok(Self { space, ranks })
    }

    /// Internal constructor for ranks that satisfy the axioms by
    /// construction.
    pub(crate) fn new_unchecked(space: WorldSpace, ranks: Vec<u32>) -> Self {
        debug_assert_eq!(ranks.len(), space.world_count());
        debug_assert_eq!(ranks.iter().min(), Some(&0));
        Self { space, ranks }
    }

    /// The all-zero ranking: nothing is disbelieved.
    pub fn vacuous(space: WorldSpace) -> Self {
        let ranks = vec![0; space.world_count()];
        Self { space, ranks }
    }

    /// Materializes a ranking with the given strata over a generated space:
    /// the first k_0 worlds get rank 0, the next k_1 rank 1, and so on.
    pub fn from_strata(strata: &StrataVector) -> Result<Self> {
        let space = WorldSpace::with_size(strata.world_count())?;
        let mut ranks = Vec::with_capacity(strata.world_count());
        for (rank, &count) in strata.counts().iter().enumerate() {
            ranks.extend(std::iter::repeat_n(rank as u32, count));
        }
        Self::new(space, ranks)
    }

    pub fn space(&self) -> &WorldSpace {
        &self.space
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank(&self, world: usize) -> u32 {
        self.ranks[world]
    }

    pub fn max_rank(&self) -> u32 {
        *self.ranks.iter().max().expect("space is non-empty")
    }

    /// Occupancy counts per rank level, (k_0, ..., k_s).
    pub fn strata(&self) -> StrataVector {
        let mut counts = vec![0usize; self.max_rank() as usize + 1];
        for &rank in &self.ranks {
            counts[rank as usize] += 1;
        }
        StrataVector::new(counts).expect("top stratum is occupied by its witness")
    }

    /// The rank of an event: the minimum rank of its members, infinite for
    /// the empty event.
    pub fn rank_of_event(&self, event: &Event) -> ExtRank {
        self.assert_same_space(event);
        event
            .members()
            .map(|w| self.ranks[w])
            .min()
            .map_or(ExtRank::Infinite, ExtRank::Finite)
    }

    /// Conditions on non-empty evidence: members keep their rank minus the
    /// evidence's rank; excluded worlds drop out of the contracted space.
    /// Labels are preserved, so results align with the original space.
    pub fn condition(&self, evidence: &Event) -> Result<RankingFunction> {
        self.assert_same_space(evidence);
        if evidence.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        let base = self.rank_of_event(evidence).finite();
        let ranks = evidence.members().map(|w| self.ranks[w] - base).collect();
        Ok(Self::new_unchecked(self.space.contract(evidence), ranks))
    }

    /// Signed belief in an event: -rank(A) when A is disbelieved at all,
    /// otherwise rank(not A). The full space and the empty event take the
    /// infinite sentinels.
    pub fn belief(&self, event: &Event) -> BeliefValue {
        match self.rank_of_event(event) {
            ExtRank::Infinite => BeliefValue::MinusInfinity,
            ExtRank::Finite(r) if r > 0 => BeliefValue::Finite(-i64::from(r)),
            ExtRank::Finite(_) => match self.rank_of_event(&event.complement()) {
                ExtRank::Infinite => BeliefValue::PlusInfinity,
                ExtRank::Finite(r) => BeliefValue::Finite(i64::from(r)),
            },
        }
    }

    /// All plainly believed events, in increasing bitmask order. These are
    /// exactly the supersets of the rank-0 stratum, which makes the set
    /// closed under intersection and superset.
    pub fn plain_beliefs(&self) -> Result<Vec<Event>> {
        let n = self.space.world_count();
        if n > PLAIN_BELIEF_GUARD {
            return Err(Error::SpaceTooLarge {
                n,
                guard: PLAIN_BELIEF_GUARD,
            });
        }
        let believed = (0u64..1 << n)
            .map(|mask| Event::from_mask(mask, n))
            .filter(|event| self.belief(event).is_believed())
            .collect();
        Ok(believed)
    }

    /// The rank-0 stratum: the worlds not disbelieved at all.
    pub fn core_event(&self) -> Event {
        self.space
            .subset((0..self.ranks.len()).filter(|&w| self.ranks[w] == 0))
    }

    /// Order-isomorphic ranking whose achieved ranks are exactly 0..=m:
    /// empty strata are removed and higher strata shifted down. Idempotent,
    /// and the identity on dense rankings.
    pub fn densify(&self) -> RankingFunction {
        let mut achieved = self.ranks.clone();
        achieved.sort_unstable();
        achieved.dedup();
        let ranks = self
            .ranks
            .iter()
            .map(|r| achieved.binary_search(r).expect("achieved rank") as u32)
            .collect();
        Self::new_unchecked(self.space.clone(), ranks)
    }

    /// True iff no stratum below the maximum rank is empty.
    pub fn is_dense(&self) -> bool {
        self.strata().is_dense()
    }

    fn assert_same_space(&self, event: &Event) {
        assert_eq!(
            event.world_count(),
            self.space.world_count(),
            "event belongs to a different space"
        );
    }
}
