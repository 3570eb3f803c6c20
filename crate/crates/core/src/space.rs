//! Finite world spaces and events (subsets of worlds).

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the number of worlds: events are stored as `u64` bitmasks.
/// Everything here is desk-scale by design; the exhaustive verifiers carry
/// much tighter guards of their own.
pub const MAX_WORLDS: usize = 64;

/// A finite, ordered set of distinct possible worlds.
///
/// Worlds are addressed by 0-based index throughout the crate; labels exist
/// for input and display. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSpace {
    labels: Vec<String>,
}

impl WorldSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        if labels.len() > MAX_WORLDS {
            return Err(Error::TooManyWorlds {
                n: labels.len(),
                max: MAX_WORLDS,
            });
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Space with generated labels `w1..wn`.
    pub fn with_size(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("w{i}")))
    }

    pub fn world_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, world: usize) -> &str {
        &self.labels[world]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The event containing exactly the given worlds. May be empty.
    ///
    /// Panics if an index is out of range; that is a caller bug, not input
    /// validation (labels from the outside world go through
    /// [`WorldSpace::event_from_labels`]).
    pub fn subset<I: IntoIterator<Item = usize>>(&self, members: I) -> Event {
        let mut mask = 0u64;
        for world in members {
            assert!(
                world < self.world_count(),
                "world index {world} out of range for space of {} worlds",
                self.world_count()
            );
            mask |= 1 << world;
        }
        Event::from_mask(mask, self.world_count())
    }

    pub fn event_from_labels<'a, I>(&self, labels: I) -> Result<Event>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut mask = 0u64;
        for label in labels {
            let world = self
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_owned()))?;
            mask |= 1 << world;
        }
        Ok(Event::from_mask(mask, self.world_count()))
    }

    pub fn full_event(&self) -> Event {
        Event::from_mask(mask_of_full(self.world_count()), self.world_count())
    }

    pub fn empty_event(&self) -> Event {
        Event::from_mask(0, self.world_count())
    }

    /// The space containing only the members of `event`, in original order.
    /// Labels are preserved, so contracted results can be aligned with the
    /// space they came from. Panics on the empty event.
    pub fn contract(&self, event: &Event) -> WorldSpace {
        assert_eq!(
            event.world_count(),
            self.world_count(),
            "event belongs to a different space"
        );
        assert!(!event.is_empty(), "cannot contract onto the empty event");
        WorldSpace {
            labels: event.members().map(|w| self.labels[w].clone()).collect(),
        }
    }
}

fn mask_of_full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An event: a subset of the worlds of one space, stored as a bitmask.
///
/// Events carry the world count of their space so that cross-space misuse
/// fails fast. They do not borrow the space itself and are freely copyable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    mask: u64,
    world_count: usize,
}

impl Event {
    /// Builds an event directly from a bitmask; bit `i` is world `i`.
    /// Panics if the mask has bits outside the space.
    pub fn from_mask(mask: u64, world_count: usize) -> Self {
        assert!(world_count <= MAX_WORLDS);
        assert_eq!(
            mask & !mask_of_full(world_count),
            0,
            "event mask has bits outside the {world_count}-world space"
        );
        Self { mask, world_count }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == mask_of_full(self.world_count)
    }

    pub fn contains(&self, world: usize) -> bool {
        world < self.world_count && self.mask & (1 << world) != 0
    }

    /// Member worlds in increasing index order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.world_count).filter(|w| self.mask & (1 << w) != 0)
    }

    pub fn complement(&self) -> Event {
        Event {
            mask: !self.mask & mask_of_full(self.world_count),
            world_count: self.world_count,
        }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        assert_eq!(self.world_count, other.world_count);
        Event {
            mask: self.mask & other.mask,
            world_count: self.world_count,
        }
    }

    pub fn union(&self, other: &Event) -> Event {
        assert_eq!(self.world_count, other.world_count);
        Event {
            mask: self.mask | other.mask,
            world_count: self.world_count,
        }
    }

    pub fn is_subset_of(&self, other: &Event) -> bool {
        self.world_count == other.world_count && self.mask & !other.mask == 0
    }

    /// Renders the event with its members' labels, e.g. `{w2, w3}`.
    pub fn format_with(&self, space: &WorldSpace) -> String {
        assert_eq!(self.world_count, space.world_count());
        let mut out = String::from("{");
        for (i, world) in self.members().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(space.label(world));
        }
        out.push('}');
        out
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, world) in self.members().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{world}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_labels() {
        assert_eq!(
            WorldSpace::new(Vec::<String>::new()),
            Err(Error::EmptySpace)
        );
        assert_eq!(
            WorldSpace::new(["a", "b", "a"]),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert!(matches!(
            WorldSpace::with_size(65),
            Err(Error::TooManyWorlds { n: 65, .. })
        ));
        let space = WorldSpace::with_size(4).unwrap();
        assert_eq!(space.world_count(), 4);
        assert_eq!(space.label(0), "w1");
        assert_eq!(space.index_of("w3"), Some(2));
        assert_eq!(space.index_of("w9"), None);
    }

    #[test]
    fn subset_sizes() {
        let space = WorldSpace::with_size(4).unwrap();
        assert_eq!(space.subset([0, 1]).size(), 2);
        assert!(space.subset([]).is_empty());
        assert!(space.subset([0, 1, 2, 3]).is_full());
        assert_eq!(space.subset([0, 1, 2, 3]), space.full_event());
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn subset_rejects_out_of_range_index() {
        let space = WorldSpace::with_size(3).unwrap();
        space.subset([3]);
    }

    #[test]
    fn labels_round_trip_through_events() {
        let space = WorldSpace::new(["rain", "snow", "sun"]).unwrap();
        let event = space.event_from_labels(["sun", "rain"]).unwrap();
        assert_eq!(event, space.subset([0, 2]));
        assert_eq!(event.format_with(&space), "{rain, sun}");
        assert_eq!(
            space.event_from_labels(["fog"]),
            Err(Error::UnknownLabel("fog".into()))
        );
    }

    #[test]
    fn set_algebra() {
        let space = WorldSpace::with_size(5).unwrap();
        let a = space.subset([0, 1, 2]);
        let b = space.subset([2, 3]);
        assert_eq!(a.intersection(&b), space.subset([2]));
        assert_eq!(a.union(&b), space.subset([0, 1, 2, 3]));
        assert_eq!(a.complement(), space.subset([3, 4]));
        assert!(space.subset([2]).is_subset_of(&b));
        assert!(!a.is_subset_of(&b));
        assert_eq!(a.members().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn contraction_keeps_labels_in_order() {
        let space = WorldSpace::with_size(4).unwrap();
        let contracted = space.contract(&space.subset([1, 3]));
        assert_eq!(contracted.labels(), ["w2", "w4"]);
    }
}
