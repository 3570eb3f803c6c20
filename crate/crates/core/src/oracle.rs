//! Brute-force verification of the calculus laws.
//!
//! Everything here quantifies over *all* events (or event pairs, or
//! evidence events) of a space, so a passing report is a proof at the
//! checked size, not a sample. The checks are deliberately independent of
//! the transformations they scrutinize: they recompute event values from
//! definitions and compare, rather than reusing any derived structure.

use num::bigint::BigInt;
use num::{Integer, One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::kappa::{RankingFunction, StrataVector};
use crate::prob::ProbDist;
use crate::rational::Rational;
use crate::space::{Event, WorldSpace};
use crate::transform::to_kappa;

/// Default cap on the space size for whole-powerset enumerations
/// (2^12 events, about 16.8M ordered pairs).
pub const DEFAULT_EVENT_GUARD: usize = 12;

/// One ordered event pair that breaks a congruence principle, with the
/// exact values on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceViolation {
    pub event_a: Event,
    pub event_b: Event,
    pub p_a: Rational,
    pub p_b: Rational,
    pub rank_a: u32,
    pub rank_b: u32,
}

/// Outcome of a congruence scan over all ordered pairs of non-empty
/// events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub violations: Vec<CongruenceViolation>,
    pub pairs_checked: u64,
}

impl CongruenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-event probabilities as integer numerators over one common
/// denominator, plus per-event minimum ranks. Integer comparisons keep
/// the quadratic pair scans cheap without giving up exactness.
struct EventTable {
    numerators: Vec<BigInt>,
    denominator: BigInt,
    ranks: Vec<u32>,
}

impl EventTable {
    fn build(p: &ProbDist, delta: &RankingFunction) -> Self {
        let n = p.space().world_count();
        let denominator = p
            .masses()
            .iter()
            .fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
        let world_numerators: Vec<BigInt> = p
            .masses()
            .iter()
            .map(|m| m.numer() * (&denominator / m.denom()))
            .collect();
        let mut numerators = vec![BigInt::zero(); 1 << n];
        let mut ranks = vec![u32::MAX; 1 << n];
        for mask in 1usize..1 << n {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            numerators[mask] = &numerators[rest] + &world_numerators[low];
            ranks[mask] = ranks[rest].min(delta.rank(low));
        }
        Self {
            numerators,
            denominator,
            ranks,
        }
    }

    fn prob(&self, mask: usize) -> Rational {
        Rational::new(self.numerators[mask].clone(), self.denominator.clone())
    }
}

fn guard_space(n: usize, guard: usize) -> Result<()> {
    if n > guard {
        return Err(Error::SpaceTooLarge { n, guard });
    }
    Ok(())
}

/// Scans all ordered pairs of non-empty events for breaches of the first
/// congruence principle: a pair with p(A) >= p(B) whose ranking
/// nevertheless has A more disbelieved, rank(A) > rank(B). Violations are
/// recorded with A (the at-least-as-probable event) first.
pub fn check_congruence_i(
    p: &ProbDist,
    delta: &RankingFunction,
    guard: usize,
) -> Result<CongruenceReport> {
    let n = p.space().world_count();
    assert_eq!(delta.space(), p.space(), "ranking is on a different space");
    guard_space(n, guard)?;
    let table = EventTable::build(p, delta);
    let mut violations = Vec::new();
    for a in 1usize..1 << n {
        for b in 1usize..1 << n {
            if table.ranks[a] > table.ranks[b] && table.numerators[a] >= table.numerators[b] {
                violations.push(CongruenceViolation {
                    event_a: Event::from_mask(a as u64, n),
                    event_b: Event::from_mask(b as u64, n),
                    p_a: table.prob(a),
                    p_b: table.prob(b),
                    rank_a: table.ranks[a],
                    rank_b: table.ranks[b],
                });
            }
        }
    }
    let pairs = ((1u64 << n) - 1) * ((1u64 << n) - 1);
    Ok(CongruenceReport {
        violations,
        pairs_checked: pairs,
    })
}

/// Scans all ordered pairs of non-empty events for breaches of the second
/// congruence principle: a pair with rank(A) < rank(B) whose probabilities
/// fail to separate strictly, p(A) <= p(B). Violations are recorded with A
/// (the strictly-less-disbelieved event) first.
pub fn check_congruence_ii(
    delta: &RankingFunction,
    p: &ProbDist,
    guard: usize,
) -> Result<CongruenceReport> {
    let n = p.space().world_count();
    assert_eq!(delta.space(), p.space(), "ranking is on a different space");
    guard_space(n, guard)?;
    let table = EventTable::build(p, delta);
    let mut violations = Vec::new();
    for a in 1usize..1 << n {
        for b in 1usize..1 << n {
            if table.ranks[a] < table.ranks[b] && table.numerators[a] <= table.numerators[b] {
                violations.push(CongruenceViolation {
                    event_a: Event::from_mask(a as u64, n),
                    event_b: Event::from_mask(b as u64, n),
                    p_a: table.prob(a),
                    p_b: table.prob(b),
                    rank_a: table.ranks[a],
                    rank_b: table.ranks[b],
                });
            }
        }
    }
    let pairs = ((1u64 << n) - 1) * ((1u64 << n) - 1);
    Ok(CongruenceReport {
        violations,
        pairs_checked: pairs,
    })
}

/// Worlds whose mass fails to strictly dominate the total mass of all
/// strictly-more-disbelieved worlds. Empty for any distribution produced
/// by the rank-to-probability transformations.
pub fn tail_dominance_violations(delta: &RankingFunction, p: &ProbDist) -> Vec<usize> {
    assert_eq!(delta.space(), p.space(), "ranking is on a different space");
    let n = p.space().world_count();
    (0..n)
        .filter(|&w| {
            let tail: Rational = (0..n)
                .filter(|&v| delta.rank(v) > delta.rank(w))
                .map(|v| p.mass(v))
                .sum();
            p.mass(w) <= &tail
        })
        .collect()
}

/// How the probability side of the commuting-square check revises on
/// evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevisionMode {
    Conditioning,
    Imaging,
}

impl std::fmt::Display for RevisionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RevisionMode::Conditioning => write!(f, "conditioning"),
            RevisionMode::Imaging => write!(f, "imaging"),
        }
    }
}

/// Outcome of one commuting-square check: revising the ranking directly
/// versus translating to probability, revising there, and translating
/// back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem3Report {
    pub mode: RevisionMode,
    pub evidence: Event,
    /// The ranking path: condition the ranking on the evidence, then
    /// densify.
    pub left: RankingFunction,
    /// The probability path: transform to probability, revise on the
    /// evidence, transform back to a ranking.
    pub right: RankingFunction,
    /// Imaging only: true when some excluded world's stratum had no
    /// surviving member, so its mass fell to the nearest other stratum.
    pub used_nearest_class_fallback: bool,
}

impl Theorem3Report {
    /// Both paths agree world-by-world on the evidence.
    pub fn matches(&self) -> bool {
        self.left == self.right
    }
}

/// Checks that ranking-side conditioning commutes with probability-side
/// revision through the transformations: densify(delta | A) against
/// to_kappa(revise(to_prob(delta), A)). For imaging, the revised
/// distribution is restricted to its support (exactly the evidence)
/// before transforming back, since rankings require positive masses.
pub fn check_theorem3(
    delta: &RankingFunction,
    evidence: &Event,
    mode: RevisionMode,
) -> Result<Theorem3Report> {
    if evidence.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    let left = delta.condition(evidence)?.densify();
    let p = crate::transform::to_prob(delta);
    let (right, used_fallback) = match mode {
        RevisionMode::Conditioning => (to_kappa(&p.condition(evidence)?), false),
        RevisionMode::Imaging => {
            let fallback = evidence
                .complement()
                .members()
                .any(|x| !evidence.members().any(|w| delta.rank(w) == delta.rank(x)));
            let imaged = p.image(delta, evidence)?;
            (to_kappa(&imaged.restrict_to_support()), fallback)
        }
    };
    Ok(Theorem3Report {
        mode,
        evidence: *evidence,
        left,
        right,
        used_nearest_class_fallback: used_fallback,
    })
}

/// The number of distinct world ranks.
pub fn coarseness_levels(delta: &RankingFunction) -> usize {
    let mut ranks = delta.ranks().to_vec();
    ranks.sort_unstable();
    ranks.dedup();
    ranks.len()
}

/// All dense strata vectors over n worlds: the 2^(n-1) compositions of n
/// into positive parts, in cut-mask order.
pub fn dense_strata_vectors(n: usize, guard: usize) -> Result<Vec<StrataVector>> {
    guard_space(n, guard)?;
    assert!(n >= 1);
    let mut vectors = Vec::with_capacity(1 << (n - 1));
    for cuts in 0u64..1 << (n - 1) {
        let mut counts = Vec::new();
        let mut size = 1usize;
        for gap in 0..n - 1 {
            if cuts & (1 << gap) != 0 {
                counts.push(size);
                size = 1;
            } else {
                size += 1;
            }
        }
        counts.push(size);
        vectors.push(StrataVector::new(counts).expect("parts are positive"));
    }
    Ok(vectors)
}

/// All strata vectors over n worlds with at most `max_rank + 1` strata,
/// empty inner strata allowed (the last stratum is always non-empty).
/// Includes the dense vectors with up to that many strata.
pub fn strata_vectors_with_gaps(
    n: usize,
    max_rank: usize,
    guard: usize,
) -> Result<Vec<StrataVector>> {
    guard_space(n, guard)?;
    fn fill(n: usize, length: usize, prefix: &mut Vec<usize>, out: &mut Vec<StrataVector>) {
        let used: usize = prefix.iter().sum();
        if prefix.len() + 1 == length {
            if n - used >= 1 {
                let mut counts = prefix.clone();
                counts.push(n - used);
                out.push(StrataVector::new(counts).expect("positive last part"));
            }
            return;
        }
        for k in 0..=(n - used) {
            prefix.push(k);
            fill(n, length, prefix, out);
            prefix.pop();
        }
    }
    let mut vectors = Vec::new();
    for length in 1..=max_rank + 1 {
        fill(n, length, &mut Vec::new(), &mut vectors);
    }
    Ok(vectors)
}

/// A random distribution with exact rational masses: a common denominator
/// is drawn up to `max_denominator` and split into positive integer
/// shares, one per world.
pub fn random_rational_dist<R: Rng + ?Sized>(
    space: &WorldSpace,
    max_denominator: u64,
    rng: &mut R,
) -> ProbDist {
    let n = space.world_count() as u64;
    assert!(
        max_denominator >= n,
        "denominator must fit {n} positive parts"
    );
    let denominator = rng.random_range(n..=max_denominator);
    let mut cuts = std::collections::BTreeSet::new();
    while (cuts.len() as u64) < n - 1 {
        cuts.insert(rng.random_range(1..denominator));
    }
    let mut masses = Vec::with_capacity(n as usize);
    let mut previous = 0u64;
    for cut in cuts.into_iter().chain(std::iter::once(denominator)) {
        masses.push(Rational::new(
            BigInt::from(cut - previous),
            BigInt::from(denominator),
        ));
        previous = cut;
    }
    ProbDist::new(space.clone(), masses).expect("shares are positive and sum to 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, ratio};
    use crate::transform::{epsilon_rule, to_prob, to_prob_exponential};
    use rand::SeedableRng;

    fn dist(values: &[&str]) -> ProbDist {
        let space = WorldSpace::with_size(values.len()).unwrap();
        let masses = values.iter().map(|v| parse_rational(v).unwrap()).collect();
        ProbDist::new(space, masses).unwrap()
    }

    fn ranking(ranks: &[u32]) -> RankingFunction {
        RankingFunction::new(WorldSpace::with_size(ranks.len()).unwrap(), ranks.to_vec()).unwrap()
    }

    fn four_world_example() -> ProbDist {
        dist(&["0.5185", "0.2308", "0.1538", "0.0969"])
    }

    #[test]
    fn mass_countdown_ranking_is_congruent_on_the_example() {
        let p = four_world_example();
        let report = check_congruence_i(&p, &to_kappa(&p), DEFAULT_EVENT_GUARD).unwrap();
        assert!(report.holds());
        assert_eq!(report.pairs_checked, 225);
    }

    #[test]
    fn epsilon_rule_breaks_congruence_on_the_example() {
        let p = four_world_example();
        let delta = epsilon_rule(&p, &ratio(1, 5)).unwrap().into_ranking();
        let report = check_congruence_i(&p, &delta, DEFAULT_EVENT_GUARD).unwrap();
        assert!(!report.holds());
        let space = p.space();
        let witness = report
            .violations
            .iter()
            .find(|v| v.event_a == space.subset([2, 3]) && v.event_b == space.subset([1]))
            .expect("the two-world event must be recorded against the singleton");
        assert_eq!(witness.p_a, ratio(2507, 10000));
        assert_eq!(witness.p_b, ratio(2308, 10000));
        assert_eq!((witness.rank_a, witness.rank_b), (1, 0));
    }

    #[test]
    fn vacuous_ranking_is_congruent_with_anything() {
        let p = dist(&["0.7", "0.2", "0.1"]);
        let delta = RankingFunction::vacuous(p.space().clone());
        assert!(check_congruence_i(&p, &delta, DEFAULT_EVENT_GUARD)
            .unwrap()
            .holds());
    }

    #[test]
    fn congruence_scan_respects_the_guard() {
        let p = ProbDist::uniform(WorldSpace::with_size(5).unwrap());
        let delta = RankingFunction::vacuous(p.space().clone());
        assert_eq!(
            check_congruence_i(&p, &delta, 4),
            Err(Error::SpaceTooLarge { n: 5, guard: 4 })
        );
    }

    #[test]
    fn second_congruence_holds_for_the_derived_distribution() {
        let delta = ranking(&[0, 1, 1, 2]);
        let report = check_congruence_ii(&delta, &to_prob(&delta), DEFAULT_EVENT_GUARD).unwrap();
        assert!(report.holds());
        assert_eq!(report.pairs_checked, 225);
    }

    #[test]
    fn second_congruence_fails_for_a_uniform_distribution() {
        let delta = ranking(&[0, 1, 1, 2]);
        let p = ProbDist::uniform(delta.space().clone());
        let report = check_congruence_ii(&delta, &p, DEFAULT_EVENT_GUARD).unwrap();
        assert!(!report.holds());
        let space = delta.space();
        assert!(report
            .violations
            .iter()
            .any(|v| v.event_a == space.subset([0]) && v.event_b == space.subset([3])));
    }

    #[test]
    fn second_congruence_is_vacuous_on_one_world() {
        let delta = ranking(&[0]);
        let p = ProbDist::uniform(delta.space().clone());
        let report = check_congruence_ii(&delta, &p, DEFAULT_EVENT_GUARD).unwrap();
        assert!(report.holds());
        assert_eq!(report.pairs_checked, 1);
    }

    #[test]
    fn tail_dominance_of_derived_distributions() {
        for delta in [ranking(&[0, 1, 1, 2]), ranking(&[0, 0, 1, 2, 2, 3])] {
            assert!(tail_dominance_violations(&delta, &to_prob(&delta)).is_empty());
            assert!(tail_dominance_violations(&delta, &to_prob_exponential(&delta)).is_empty());
        }
        // uniform masses dominate neither a two-world tail nor a tied one
        let delta = ranking(&[0, 1, 2]);
        let p = ProbDist::uniform(delta.space().clone());
        assert_eq!(tail_dominance_violations(&delta, &p), vec![0, 1]);
    }

    #[test]
    fn commuting_square_on_the_worked_example() {
        let delta = ranking(&[0, 1, 1, 2]);
        let evidence = delta.space().subset([1, 2, 3]);
        let report = check_theorem3(&delta, &evidence, RevisionMode::Conditioning).unwrap();
        assert!(report.matches());
        assert_eq!(report.left.ranks(), &[0, 0, 1]);
        assert_eq!(report.right.ranks(), &[0, 0, 1]);
    }

    #[test]
    fn commuting_square_on_full_evidence_is_densification() {
        let delta = ranking(&[0, 2, 2, 5]);
        let evidence = delta.space().full_event();
        for mode in [RevisionMode::Conditioning, RevisionMode::Imaging] {
            let report = check_theorem3(&delta, &evidence, mode).unwrap();
            assert!(report.matches());
            assert_eq!(report.left, delta.densify());
            assert!(!report.used_nearest_class_fallback);
        }
    }

    #[test]
    fn commuting_square_flags_the_fallback_rule() {
        // excluding the only rank-0 world forces its mass out of its class
        let delta = ranking(&[0, 1, 1]);
        let evidence = delta.space().subset([1, 2]);
        let report = check_theorem3(&delta, &evidence, RevisionMode::Imaging).unwrap();
        assert!(report.used_nearest_class_fallback);
        assert!(report.matches());
        assert_eq!(report.left.ranks(), &[0, 0]);
    }

    #[test]
    fn commuting_square_rejects_empty_evidence() {
        let delta = ranking(&[0, 1]);
        let empty = delta.space().empty_event();
        assert_eq!(
            check_theorem3(&delta, &empty, RevisionMode::Conditioning),
            Err(Error::EmptyEvidence)
        );
    }

    #[test]
    fn commuting_square_exhaustive_at_small_sizes() {
        for n in 1..=5usize {
            for strata in dense_strata_vectors(n, DEFAULT_EVENT_GUARD).unwrap() {
                let delta = RankingFunction::from_strata(&strata).unwrap();
                for mask in 1u64..1 << n {
                    let evidence = Event::from_mask(mask, n);
                    for mode in [RevisionMode::Conditioning, RevisionMode::Imaging] {
                        let report = check_theorem3(&delta, &evidence, mode).unwrap();
                        assert!(
                            report.matches(),
                            "strata {strata} evidence {evidence} mode {mode}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn level_counts() {
        assert_eq!(coarseness_levels(&ranking(&[0, 1, 1, 2])), 3);
        assert_eq!(coarseness_levels(&ranking(&[0, 0, 0])), 1);
        assert_eq!(coarseness_levels(&ranking(&[0, 1, 2, 3])), 4);
    }

    #[test]
    fn dense_vectors_are_the_compositions() {
        let vectors = dense_strata_vectors(3, DEFAULT_EVENT_GUARD).unwrap();
        let counts: Vec<_> = vectors.iter().map(|v| v.counts().to_vec()).collect();
        assert_eq!(counts.len(), 4);
        for expected in [vec![3], vec![2, 1], vec![1, 2], vec![1, 1, 1]] {
            assert!(counts.contains(&expected), "missing {expected:?}");
        }
        assert_eq!(
            dense_strata_vectors(1, DEFAULT_EVENT_GUARD).unwrap().len(),
            1
        );
        assert_eq!(
            dense_strata_vectors(4, DEFAULT_EVENT_GUARD).unwrap().len(),
            8
        );
        assert_eq!(
            dense_strata_vectors(13, DEFAULT_EVENT_GUARD),
            Err(Error::SpaceTooLarge { n: 13, guard: 12 })
        );
    }

    #[test]
    fn gapped_vectors_include_sparse_strata() {
        let vectors = strata_vectors_with_gaps(3, 2, DEFAULT_EVENT_GUARD).unwrap();
        let counts: Vec<_> = vectors.iter().map(|v| v.counts().to_vec()).collect();
        assert!(counts.contains(&vec![1, 0, 2]));
        assert!(counts.contains(&vec![1, 2]));
        assert!(counts.contains(&vec![3]));
        assert!(counts.contains(&vec![0, 3])); // no ranking has it, but the vector exists
        for v in &vectors {
            assert_eq!(v.world_count(), 3);
            assert!(v.max_rank() <= 2);
        }
        // every vector is distinct
        let mut dedup = counts.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), counts.len());
    }

    #[test]
    fn random_distributions_are_exact_and_reproducible() {
        let space = WorldSpace::with_size(6).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = random_rational_dist(&space, 10_000, &mut rng);
        let total: Rational = p.masses().iter().sum();
        assert!(total.is_one());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let q = random_rational_dist(&space, 10_000, &mut rng);
        assert_eq!(p, q);
    }
}
