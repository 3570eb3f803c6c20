//! Exact probability distributions, Bayesian conditioning, and imaging.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::kappa::RankingFunction;
use crate::rational::Rational;
use crate::space::{Event, WorldSpace};

/// A probability function with strictly positive per-world masses summing
/// to exactly 1.
///
/// Zero masses are rejected at construction: a world with probability 0
/// has no finite disbelief rank, and conditioning stays total when every
/// non-empty event has positive probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbDist {
    space: WorldSpace,
    masses: Vec<Rational>,
}

impl ProbDist {
    /// Builds a distribution, checking positivity and that the masses sum
    /// to exactly 1. No silent normalization; see [`ProbDist::normalized`].
    pub fn new(space: WorldSpace, masses: Vec<Rational>) -> Result<Self> {
        check_positive_masses(&space, &masses)?;
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::MassSumNotOne(total.to_string()));
        }
        Ok(Self { space, masses })
    }

    /// Divides positive weights by their sum. This is the only place mass
    /// rescaling happens implicitly; `new` rejects anything not summing
    /// to 1 so that input errors stay visible.
    pub fn normalized(space: WorldSpace, weights: Vec<Rational>) -> Result<Self> {
        check_positive_masses(&space, &weights)?;
        let total: Rational = weights.iter().sum();
        let masses = weights.into_iter().map(|w| w / &total).collect();
        Ok(Self { space, masses })
    }

    pub fn uniform(space: WorldSpace) -> Self {
        let share = Rational::new(1.into(), (space.world_count() as i64).into());
        let masses = vec![share; space.world_count()];
        Self { space, masses }
    }

    pub(crate) fn new_unchecked(space: WorldSpace, masses: Vec<Rational>) -> Self {
        debug_assert_eq!(masses.len(), space.world_count());
        debug_assert!(masses.iter().all(|m| m > &Rational::zero()));
        debug_assert!(masses.iter().sum::<Rational>().is_one());
        Self { space, masses }
    }

    pub fn space(&self) -> &WorldSpace {
        &self.space
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, world: usize) -> &Rational {
        &self.masses[world]
    }

    /// The probability of an event: the exact sum of its members' masses.
    pub fn prob_of_event(&self, event: &Event) -> Rational {
        self.assert_same_space(event);
        event.members().map(|w| &self.masses[w]).sum()
    }

    /// Bayesian conditioning on non-empty evidence, onto the contracted
    /// space. Positivity of masses guarantees the evidence has positive
    /// probability.
    pub fn condition(&self, evidence: &Event) -> Result<ProbDist> {
        self.assert_same_space(evidence);
        if evidence.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        let total = self.prob_of_event(evidence);
        let masses = evidence
            .members()
            .map(|w| &self.masses[w] / &total)
            .collect();
        Ok(Self::new_unchecked(self.space.contract(evidence), masses))
    }

    /// Imaging on non-empty evidence, with closeness induced by a ranking
    /// function on the same space: each excluded world's mass moves to the
    /// retained worlds at minimal rank distance, split evenly among them.
    /// When the excluded world's own stratum survives in the evidence, the
    /// mass stays within its class, and the minimizers are exactly those
    /// class members.
    ///
    /// The result lives on the full space with zero mass outside the
    /// evidence, so it is returned as an [`ImagedDist`] rather than a
    /// [`ProbDist`].
    pub fn image(&self, closeness: &RankingFunction, evidence: &Event) -> Result<ImagedDist> {
        self.assert_same_space(evidence);
        assert_eq!(
            closeness.space(),
            &self.space,
            "closeness ranking belongs to a different space"
        );
        if evidence.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        let mut masses: Vec<Rational> = (0..self.space.world_count())
            .map(|w| {
                if evidence.contains(w) {
                    self.masses[w].clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for excluded in evidence.complement().members() {
            let distance = |w: usize| closeness.rank(w).abs_diff(closeness.rank(excluded));
            let best = evidence.members().map(distance).min().expect("non-empty");
            let targets: Vec<usize> = evidence
                .members()
                .filter(|&w| distance(w) == best)
                .collect();
            let share =
                &self.masses[excluded] / Rational::from_integer((targets.len() as i64).into());
            for target in targets {
                masses[target] += &share;
            }
        }
        Ok(ImagedDist {
            space: self.space.clone(),
            masses,
        })
    }

    fn assert_same_space(&self, event: &Event) {
        assert_eq!(
            event.world_count(),
            self.space.world_count(),
            "event belongs to a different space"
        );
    }
}

fn check_positive_masses(space: &WorldSpace, masses: &[Rational]) -> Result<()> {
    if masses.len() != space.world_count() {
        return Err(Error::LengthMismatch {
            expected: space.world_count(),
            got: masses.len(),
        });
    }
    for (world, mass) in masses.iter().enumerate() {
        if mass <= &Rational::zero() {
            return Err(Error::NonPositiveMass(space.label(world).to_owned()));
        }
    }
    Ok(())
}

/// The output of imaging: total mass 1 on the full space, but with zero
/// mass on the worlds excluded by the evidence. Kept distinct from
/// [`ProbDist`] so its strict-positivity invariant stays intact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagedDist {
    space: WorldSpace,
    masses: Vec<Rational>,
}

impl ImagedDist {
    pub fn space(&self) -> &WorldSpace {
        &self.space
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, world: usize) -> &Rational {
        &self.masses[world]
    }

    pub fn prob_of_event(&self, event: &Event) -> Rational {
        assert_eq!(event.world_count(), self.space.world_count());
        event.members().map(|w| &self.masses[w]).sum()
    }

    /// The worlds carrying positive mass.
    pub fn support(&self) -> Event {
        self.space
            .subset((0..self.masses.len()).filter(|&w| self.masses[w] > Rational::zero()))
    }

    /// The same distribution as a strict [`ProbDist`] on the contracted
    /// support space. Total mass is already 1, so nothing is rescaled.
    pub fn restrict_to_support(&self) -> ProbDist {
        let support = self.support();
        let masses = support.members().map(|w| self.masses[w].clone()).collect();
        ProbDist::new_unchecked(self.space.contract(&support), masses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, ratio};

    fn dist(values: &[&str]) -> ProbDist {
        let space = WorldSpace::with_size(values.len()).unwrap();
        let masses = values.iter().map(|v| parse_rational(v).unwrap()).collect();
        ProbDist::new(space, masses).unwrap()
    }

    fn four_world_example() -> ProbDist {
        dist(&["0.5185", "0.2308", "0.1538", "0.0969"])
    }

    #[test]
    fn construction_requires_exact_unit_mass() {
        let space = WorldSpace::with_size(2).unwrap();
        assert_eq!(
            ProbDist::new(space.clone(), vec![ratio(1, 2), ratio(49, 100)]),
            Err(Error::MassSumNotOne("99/100".into()))
        );
        assert_eq!(
            ProbDist::new(space.clone(), vec![ratio(1, 1), ratio(0, 1)]),
            Err(Error::NonPositiveMass("w2".into()))
        );
        assert_eq!(
            ProbDist::new(space.clone(), vec![ratio(1, 1)]),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        );
        assert!(ProbDist::new(space, vec![ratio(1, 2), ratio(1, 2)]).is_ok());
    }

    #[test]
    fn normalization_is_explicit() {
        let space = WorldSpace::with_size(2).unwrap();
        let p = ProbDist::normalized(space, vec![ratio(3, 1), ratio(1, 1)]).unwrap();
        assert_eq!(p.masses(), &[ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn event_probabilities_are_exact_sums() {
        let p = four_world_example();
        let space = p.space().clone();
        let a = space.subset([1]);
        let b = space.subset([2, 3]);
        assert_eq!(p.prob_of_event(&a), ratio(2308, 10000));
        assert_eq!(p.prob_of_event(&b), ratio(2507, 10000));
        assert!(p.prob_of_event(&a) < p.prob_of_event(&b));
        assert_eq!(p.prob_of_event(&space.full_event()), ratio(1, 1));
        assert_eq!(p.prob_of_event(&space.empty_event()), ratio(0, 1));
    }

    #[test]
    fn conditioning_rescales_onto_the_evidence() {
        let p = dist(&["6/11", "2/11", "2/11", "1/11"]);
        let space = p.space().clone();
        let conditioned = p.condition(&space.subset([1, 2, 3])).unwrap();
        assert_eq!(
            conditioned.masses(),
            &[ratio(2, 5), ratio(2, 5), ratio(1, 5)]
        );
        assert_eq!(conditioned.space().labels(), ["w2", "w3", "w4"]);

        assert_eq!(p.condition(&space.full_event()).unwrap(), p);
        let singleton = p.condition(&space.subset([2])).unwrap();
        assert_eq!(singleton.masses(), &[ratio(1, 1)]);
        assert_eq!(p.condition(&space.empty_event()), Err(Error::EmptyEvidence));
    }

    #[test]
    fn conditional_event_probabilities_satisfy_the_product_rule() {
        // p(B|A) * p(A) = p(A and B), exhaustively over a 5-world space
        let p = dist(&["1/3", "1/4", "1/5", "1/6", "1/20"]);
        let n = 5;
        for a_mask in 1u64..1 << n {
            let a = Event::from_mask(a_mask, n);
            let conditioned = p.condition(&a).unwrap();
            for b_mask in 0u64..1 << n {
                let b = Event::from_mask(b_mask, n);
                let restricted = a.intersection(&b);
                // express B in the contracted space
                let b_contracted = conditioned.space().subset(
                    a.members()
                        .enumerate()
                        .filter_map(|(i, w)| restricted.contains(w).then_some(i)),
                );
                assert_eq!(
                    conditioned.prob_of_event(&b_contracted) * p.prob_of_event(&a),
                    p.prob_of_event(&restricted)
                );
            }
        }
    }

    #[test]
    fn imaging_moves_mass_within_the_class_when_it_survives() {
        let p = dist(&["6/11", "2/11", "2/11", "1/11"]);
        let space = p.space().clone();
        let delta = RankingFunction::new(space.clone(), vec![0, 1, 1, 2]).unwrap();
        let imaged = p.image(&delta, &space.subset([0, 2, 3])).unwrap();
        assert_eq!(
            imaged.masses(),
            &[ratio(6, 11), ratio(0, 1), ratio(4, 11), ratio(1, 11)]
        );
        assert_eq!(imaged.support(), space.subset([0, 2, 3]));
        let restricted = imaged.restrict_to_support();
        assert_eq!(restricted.space().labels(), ["w1", "w3", "w4"]);
        assert_eq!(
            restricted.masses(),
            &[ratio(6, 11), ratio(4, 11), ratio(1, 11)]
        );
    }

    #[test]
    fn imaging_on_the_full_space_changes_nothing() {
        let p = four_world_example();
        let space = p.space().clone();
        let delta = RankingFunction::new(space.clone(), vec![0, 1, 1, 2]).unwrap();
        let imaged = p.image(&delta, &space.full_event()).unwrap();
        assert_eq!(imaged.masses(), p.masses());
        assert_eq!(imaged.restrict_to_support(), p);
    }

    #[test]
    fn imaging_splits_between_equidistant_targets() {
        // ranks (0, 1, 1): excluding the rank-0 world leaves two targets at
        // distance 1, which share its mass equally
        let space = WorldSpace::with_size(3).unwrap();
        let delta = RankingFunction::new(space.clone(), vec![0, 1, 1]).unwrap();
        let p = ProbDist::new(space.clone(), vec![ratio(3, 5), ratio(1, 5), ratio(1, 5)]).unwrap();
        let imaged = p.image(&delta, &space.subset([1, 2])).unwrap();
        assert_eq!(imaged.masses(), &[ratio(0, 1), ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn imaging_preserves_total_mass_and_zeroes_the_excluded_worlds() {
        let p = dist(&["1/3", "1/4", "1/5", "1/6", "1/20"]);
        let space = p.space().clone();
        let delta = RankingFunction::new(space.clone(), vec![0, 2, 1, 1, 0]).unwrap();
        for mask in 1u64..1 << 5 {
            let evidence = Event::from_mask(mask, 5);
            let imaged = p.image(&delta, &evidence).unwrap();
            let total: Rational = imaged.masses().iter().sum();
            assert!(total.is_one());
            assert_eq!(imaged.support(), evidence);
        }
        assert_eq!(
            p.image(&delta, &space.empty_event()),
            Err(Error::EmptyEvidence)
        );
    }
}
