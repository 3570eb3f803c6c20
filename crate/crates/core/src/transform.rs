//! Order-congruent transformations between probability distributions and
//! ranking functions.
//!
//! `to_kappa` sends a distribution to the least coarse ranking function
//! that never ranks a more probable event as more disbelieved. `to_prob`
//! goes the other way, giving each world the largest probability
//! congruence permits; `to_prob_exponential` is the variant that decays
//! by a single fixed factor per rank. The `epsilon_rule` threshold
//! transformation is also provided: it is the baseline these
//! transformations improve on, and it can break order congruence.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::kappa::{RankingFunction, StrataVector};
use crate::prob::ProbDist;
use crate::rational::Rational;

/// Positions in a non-increasing mass sequence whose entry strictly
/// exceeds the sum of everything after it. Positions are 0-based; the
/// last position never qualifies.
///
/// The number of leaps is invariant under reordering tied masses, and
/// `leaps + 1` bounds the number of levels any order-congruent ranking
/// of the sequence can have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeapIndexSet {
    indices: Vec<usize>,
}

impl LeapIndexSet {
    /// Leap positions in increasing order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

/// Computes the leap index set of a non-increasing sequence of positive
/// masses.
pub fn leap_indices(masses: &[Rational]) -> Result<LeapIndexSet> {
    for (i, mass) in masses.iter().enumerate() {
        if mass <= &Rational::zero() {
            return Err(Error::NonPositiveEntry(i));
        }
        if i > 0 && masses[i - 1] < *mass {
            return Err(Error::NotSorted(i));
        }
    }
    let mut tail = Rational::zero();
    let mut indices = Vec::new();
    // walk from the right so each tail sum is incremental
    for i in (0..masses.len()).rev() {
        if i + 1 < masses.len() && masses[i] > tail {
            indices.push(i);
        }
        tail += &masses[i];
    }
    indices.reverse();
    Ok(LeapIndexSet { indices })
}

/// One step of the mass-countdown transformation: the world visited, its
/// mass, the mass still remaining after it, and the rank it received.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaTraceRow {
    pub world: usize,
    pub mass: Rational,
    pub remaining: Rational,
    pub rank: u32,
}

/// Full trace of [`to_kappa`], in visiting order (non-increasing mass,
/// ties by original index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaTrace {
    space: crate::space::WorldSpace,
    rows: Vec<KappaTraceRow>,
}

impl KappaTrace {
    pub fn rows(&self) -> &[KappaTraceRow] {
        &self.rows
    }

    pub fn space(&self) -> &crate::space::WorldSpace {
        &self.space
    }

    /// The ranking the trace produced, indexed by world again.
    pub fn ranking(&self) -> RankingFunction {
        let mut ranks = vec![0u32; self.rows.len()];
        for row in &self.rows {
            ranks[row.world] = row.rank;
        }
        RankingFunction::new(self.space.clone(), ranks).expect("first visited world has rank 0")
    }
}

/// The transformation from probability to ranking: visit worlds in
/// non-increasing mass order, hand out the current rank, and raise the
/// rank whenever a world's mass strictly exceeds all remaining mass.
///
/// The result is order-congruent (a more probable event is never more
/// disbelieved) and least coarse among congruent transformations: its
/// number of rank levels is exactly the leap count plus one. Ties are
/// visited in original index order, which fixes a deterministic output;
/// the rank multiset is the same for any tie order.
pub fn to_kappa(p: &ProbDist) -> RankingFunction {
    to_kappa_trace(p).ranking()
}

/// Like [`to_kappa`], but keeping the per-step countdown, mostly for
/// table rendering.
pub fn to_kappa_trace(p: &ProbDist) -> KappaTrace {
    let mut order: Vec<usize> = (0..p.space().world_count()).collect();
    order.sort_by(|&a, &b| p.mass(b).cmp(p.mass(a)).then(a.cmp(&b)));
    let mut remaining = Rational::one();
    let mut rank = 0u32;
    let rows = order
        .into_iter()
        .map(|world| {
            let mass = p.mass(world).clone();
            remaining -= &mass;
            let row = KappaTraceRow {
                world,
                mass: mass.clone(),
                remaining: remaining.clone(),
                rank,
            };
            if mass > remaining {
                rank += 1;
            }
            row
        })
        .collect();
    KappaTrace {
        space: p.space().clone(),
        rows,
    }
}

/// Per-world result of the epsilon-rule transformation.
///
/// The raw assignment maps a world with mass in (eps^(k+1), eps^k] to
/// rank k. Raw ranks can have a positive minimum, which violates the
/// zero-minimum axiom, so the returned ranking is rebased by subtracting
/// that minimum; the raw values stay available for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonRanks {
    raw: Vec<u32>,
    ranking: RankingFunction,
}

impl EpsilonRanks {
    pub fn raw(&self) -> &[u32] {
        &self.raw
    }

    pub fn ranking(&self) -> &RankingFunction {
        &self.ranking
    }

    pub fn into_ranking(self) -> RankingFunction {
        self.ranking
    }
}

/// The epsilon-rule transformation for an epsilon strictly between 0 and
/// 1: each world gets the unique k with eps^(k+1) < mass <= eps^k,
/// computed exactly, boundary inclusive above.
pub fn epsilon_rule(p: &ProbDist, eps: &Rational) -> Result<EpsilonRanks> {
    if eps <= &Rational::zero() || eps >= &Rational::one() {
        return Err(Error::BadEpsilon);
    }
    let raw: Vec<u32> = p
        .masses()
        .iter()
        .map(|mass| {
            // smallest k with eps^(k+1) < mass; minimality gives mass <= eps^k
            let mut power = eps.clone();
            let mut k = 0u32;
            while &power >= mass {
                power *= eps;
                k += 1;
            }
            k
        })
        .collect();
    let base = *raw.iter().min().expect("space is non-empty");
    let ranks = raw.iter().map(|k| k - base).collect();
    let ranking = RankingFunction::new(p.space().clone(), ranks).expect("rebased to minimum 0");
    Ok(EpsilonRanks { raw, ranking })
}

/// Per-rank breakdown of [`to_prob`]: the unnormalized mass of one world
/// at each rank, and the normalization constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToProbTrace {
    strata: StrataVector,
    unnormalized: Vec<Rational>,
    z: Rational,
    dist: ProbDist,
}

impl ToProbTrace {
    pub fn strata(&self) -> &StrataVector {
        &self.strata
    }

    /// Unnormalized per-world mass at each rank 0..=s. Empty strata
    /// contribute a factor of 1, so they never change the result.
    pub fn unnormalized(&self) -> &[Rational] {
        &self.unnormalized
    }

    /// The normalization constant Z (the reciprocal of the unnormalized
    /// total).
    pub fn z(&self) -> &Rational {
        &self.z
    }

    pub fn dist(&self) -> &ProbDist {
        &self.dist
    }

    pub fn into_dist(self) -> ProbDist {
        self.dist
    }
}

fn stratified_unnormalized(strata: &StrataVector) -> Vec<Rational> {
    let mut product = Rational::one();
    strata
        .counts()
        .iter()
        .map(|&k| {
            product /= Rational::from_integer((k as i64 + 1).into());
            product.clone()
        })
        .collect()
}

/// The transformation from ranking to probability: a world at rank i
/// gets mass proportional to the product of 1/(k_j + 1) over ranks
/// j <= i. Worlds in the same stratum share one value, each stratum is
/// strictly more probable than all strata above it combined, and the
/// result is the least skewed distribution that keeps strict order
/// congruence.
pub fn to_prob(delta: &RankingFunction) -> ProbDist {
    to_prob_trace(delta).into_dist()
}

/// Like [`to_prob`], with the per-rank values and normalization constant.
pub fn to_prob_trace(delta: &RankingFunction) -> ToProbTrace {
    let strata = delta.strata();
    let unnormalized = stratified_unnormalized(&strata);
    let total: Rational = delta
        .ranks()
        .iter()
        .map(|&r| &unnormalized[r as usize])
        .sum();
    let z = total.recip();
    let masses = delta
        .ranks()
        .iter()
        .map(|&r| &unnormalized[r as usize] * &z)
        .collect();
    let dist = ProbDist::new(delta.space().clone(), masses).expect("masses sum to 1 by scaling");
    ToProbTrace {
        strata,
        unnormalized,
        z,
        dist,
    }
}

/// Per-rank breakdown of [`to_prob_exponential`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToProbExpTrace {
    strata: StrataVector,
    k_max: usize,
    unnormalized: Vec<Rational>,
    z: Rational,
    dist: ProbDist,
}

impl ToProbExpTrace {
    pub fn strata(&self) -> &StrataVector {
        &self.strata
    }

    /// The largest stratum size, the shared decay base.
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn unnormalized(&self) -> &[Rational] {
        &self.unnormalized
    }

    pub fn z(&self) -> &Rational {
        &self.z
    }

    pub fn dist(&self) -> &ProbDist {
        &self.dist
    }

    pub fn into_dist(self) -> ProbDist {
        self.dist
    }
}

/// The exponential-law variant: a world at rank i gets mass proportional
/// to (1/(k_max + 1))^i, where k_max is the largest stratum size. Still
/// order-congruent, but at least as skewed as [`to_prob`] between any two
/// rank levels.
pub fn to_prob_exponential(delta: &RankingFunction) -> ProbDist {
    to_prob_exponential_trace(delta).into_dist()
}

/// Like [`to_prob_exponential`], with the per-rank values, the decay base
/// and the normalization constant.
pub fn to_prob_exponential_trace(delta: &RankingFunction) -> ToProbExpTrace {
    let strata = delta.strata();
    let k_max = *strata.counts().iter().max().expect("non-empty strata");
    let base = Rational::new(1.into(), (k_max as i64 + 1).into());
    let unnormalized: Vec<Rational> = (0..=strata.max_rank())
        .map(|i| num::pow::pow(base.clone(), i))
        .collect();
    let total: Rational = delta
        .ranks()
        .iter()
        .map(|&r| &unnormalized[r as usize])
        .sum();
    let z = total.recip();
    let masses = delta
        .ranks()
        .iter()
        .map(|&r| &unnormalized[r as usize] * &z)
        .collect();
    let dist = ProbDist::new(delta.space().clone(), masses).expect("masses sum to 1 by scaling");
    ToProbExpTrace {
        strata,
        k_max,
        unnormalized,
        z,
        dist,
    }
}

/// The half-open probability interval `[lo, hi)` that [`to_prob`] assigns
/// to events of a given rank: every event ranked `i` has probability at
/// least the mass of a single rank-`i` world and strictly below the
/// rank-`(i-1)` world mass (Z itself for rank 0, via the empty product).
pub fn probability_bounds(strata: &StrataVector, rank: usize) -> Result<(Rational, Rational)> {
    if rank > strata.max_rank() {
        return Err(Error::RankOutOfRange {
            rank,
            max: strata.max_rank(),
        });
    }
    let unnormalized = stratified_unnormalized(strata);
    let total: Rational = strata
        .counts()
        .iter()
        .zip(&unnormalized)
        .map(|(&k, u)| u * Rational::from_integer((k as i64).into()))
        .sum();
    let z = total.recip();
    let lo = &unnormalized[rank] * &z;
    let hi = if rank == 0 {
        z
    } else {
        &unnormalized[rank - 1] * &z
    };
    Ok((lo, hi))
}

/// The acceptance threshold induced by a strata vector.
///
/// Under [`to_prob`], an event is plainly believed exactly when its
/// probability reaches the normalized threshold; the rank-0 stratum
/// itself sits exactly at the threshold and every non-believed event
/// stays strictly below it. The unnormalized form is k_0/(k_0 + 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptanceThreshold {
    pub unnormalized: Rational,
    pub normalized: Rational,
}

pub fn acceptance_threshold(strata: &StrataVector) -> AcceptanceThreshold {
    let k0 = strata.counts()[0] as i64;
    let unnormalized = Rational::new(k0.into(), (k0 + 1).into());
    let total: Rational = strata
        .counts()
        .iter()
        .zip(stratified_unnormalized(strata))
        .map(|(&k, u)| u * Rational::from_integer((k as i64).into()))
        .sum();
    let normalized = &unnormalized * total.recip();
    AcceptanceThreshold {
        unnormalized,
        normalized,
    }
}
