//! Input documents: JSON descriptions of probability distributions and
//! ranking functions.
//!
//! Values are strings so that decimals stay exact; fractions like `"1/3"`
//! are accepted for values with no finite decimal form. Ranking values may
//! be plain integers.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use rankprob_core::kappa::RankingFunction;
use rankprob_core::prob::ProbDist;
use rankprob_core::rational::{parse_rational, Rational};
use rankprob_core::space::{Event, WorldSpace};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Probability,
    Ranking,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Integer(u64),
    Text(String),
}

/// A parsed input document; `eps` and `evidence` are optional metadata
/// that the matching command-line flags override.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub kind: Kind,
    pub worlds: Vec<String>,
    pub values: Vec<ValueRepr>,
    #[serde(default)]
    pub eps: Option<String>,
    #[serde(default)]
    pub evidence: Option<Vec<String>>,
}

impl Document {
    /// Reads a document from a file, or from stdin when the path is absent
    /// or `-`.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let (source, text) = match path {
            Some(p) if p.as_os_str() != "-" => (
                p.display().to_string(),
                std::fs::read_to_string(p)
                    .map_err(|e| CliError::input(format!("cannot read {}: {e}", p.display())))?,
            ),
            _ => {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::input(format!("cannot read stdin: {e}")))?;
                ("stdin".to_owned(), text)
            }
        };
        serde_json::from_str(&text).map_err(|e| {
            CliError::input(format!(
                "{source}: parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn space(&self) -> Result<WorldSpace, CliError> {
        WorldSpace::new(self.worlds.clone()).map_err(CliError::from)
    }

    /// Interprets the document as a probability distribution. Masses must
    /// sum to exactly 1 unless `normalize` divides them by their total.
    pub fn to_prob_dist(&self, normalize: bool) -> Result<ProbDist, CliError> {
        if self.kind != Kind::Probability {
            return Err(CliError::input(
                "expected a probability document (kind = \"probability\")".to_owned(),
            ));
        }
        let space = self.space()?;
        let masses = self
            .values
            .iter()
            .map(|v| match v {
                ValueRepr::Integer(i) => Ok(Rational::from_integer((*i).into())),
                ValueRepr::Text(s) => parse_rational(s).map_err(CliError::from),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if normalize {
            return Ok(ProbDist::normalized(space, masses)?);
        }
        ProbDist::new(space, masses).map_err(|e| match e {
            rankprob_core::Error::MassSumNotOne(sum) => CliError::input(format!(
                "masses must sum to exactly 1, got {sum} (pass --normalize to rescale)"
            )),
            other => CliError::from(other),
        })
    }

    /// Interprets the document as a ranking function. A minimum rank above
    /// zero is a validation error unless `densify` is set, which also
    /// closes any rank gaps.
    pub fn to_ranking(&self, densify: bool) -> Result<RankingFunction, CliError> {
        if self.kind != Kind::Ranking {
            return Err(CliError::input(
                "expected a ranking document (kind = \"ranking\")".to_owned(),
            ));
        }
        let space = self.space()?;
        let ranks = self
            .values
            .iter()
            .map(|v| match v {
                ValueRepr::Integer(i) => u32::try_from(*i)
                    .map_err(|_| CliError::input(format!("rank {i} is out of range"))),
                ValueRepr::Text(s) => s.trim().parse::<u32>().map_err(|_| {
                    CliError::input(format!("rank `{s}` is not a non-negative integer"))
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if densify {
            let base = *ranks
                .iter()
                .min()
                .ok_or_else(|| CliError::input("ranking document has no values".to_owned()))?;
            let shifted = ranks.iter().map(|r| r - base).collect();
            Ok(RankingFunction::new(space, shifted)?.densify())
        } else {
            RankingFunction::new(space, ranks).map_err(|e| match e {
                rankprob_core::Error::MinRankNotZero(min) => CliError::input(format!(
                    "minimum rank must be 0, got {min} (pass --densify to rebase)"
                )),
                other => CliError::from(other),
            })
        }
    }

    /// Resolves the evidence event: the `--evidence` flag (comma-separated
    /// labels) wins over the document's `evidence` field.
    pub fn evidence(
        &self,
        space: &WorldSpace,
        flag: Option<&str>,
    ) -> Result<Option<Event>, CliError> {
        let labels: Option<Vec<String>> = match flag {
            Some(raw) => Some(
                raw.split(',')
                    .map(|s| s.trim().to_owned())
                    .filter(|s| !s.is_empty())
                    .collect(),
            ),
            None => self.evidence.clone(),
        };
        match labels {
            Some(labels) => {
                let event = space.event_from_labels(labels.iter().map(String::as_str))?;
                Ok(Some(event))
            }
            None => Ok(None),
        }
    }

    /// Resolves epsilon: the `--eps` flag wins over the document's `eps`
    /// field.
    pub fn epsilon(&self, flag: Option<&str>) -> Result<Option<Rational>, CliError> {
        match flag.or(self.eps.as_deref()) {
            Some(raw) => Ok(Some(parse_rational(raw)?)),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankprob_core::rational::ratio;

    fn parse(text: &str) -> Document {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn probability_document_round_trip() {
        let doc = parse(r#"{"kind":"probability","worlds":["a","b"],"values":["0.6","0.4"]}"#);
        let p = doc.to_prob_dist(false).unwrap();
        assert_eq!(p.masses(), &[ratio(3, 5), ratio(2, 5)]);
    }

    #[test]
    fn sum_validation_suggests_normalize() {
        let doc = parse(r#"{"kind":"probability","worlds":["a","b"],"values":["0.6","0.3999"]}"#);
        let err = doc.to_prob_dist(false).unwrap_err();
        assert!(err.to_string().contains("--normalize"), "{err}");
        let p = doc.to_prob_dist(true).unwrap();
        assert_eq!(p.masses()[0], ratio(6000, 9999));
    }

    #[test]
    fn ranking_document_accepts_integers_and_strings() {
        let doc = parse(r#"{"kind":"ranking","worlds":["a","b","c"],"values":[0,"1",1]}"#);
        let delta = doc.to_ranking(false).unwrap();
        assert_eq!(delta.ranks(), &[0, 1, 1]);
    }

    #[test]
    fn rebased_minimum_requires_densify() {
        let doc = parse(r#"{"kind":"ranking","worlds":["a","b"],"values":[2,5]}"#);
        let err = doc.to_ranking(false).unwrap_err();
        assert!(err.to_string().contains("--densify"), "{err}");
        let delta = doc.to_ranking(true).unwrap();
        assert_eq!(delta.ranks(), &[0, 1]);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let doc = parse(r#"{"kind":"ranking","worlds":["a"],"values":[0]}"#);
        assert!(doc.to_prob_dist(false).is_err());
    }

    #[test]
    fn evidence_flag_overrides_document_field() {
        let doc =
            parse(r#"{"kind":"ranking","worlds":["a","b","c"],"values":[0,1,2],"evidence":["a"]}"#);
        let space = doc.space().unwrap();
        let from_doc = doc.evidence(&space, None).unwrap().unwrap();
        assert_eq!(from_doc, space.subset([0]));
        let from_flag = doc.evidence(&space, Some("b, c")).unwrap().unwrap();
        assert_eq!(from_flag, space.subset([1, 2]));
        assert!(doc.evidence(&space, Some("zzz")).is_err());
    }

    #[test]
    fn epsilon_comes_from_flag_or_document() {
        let doc = parse(r#"{"kind":"probability","worlds":["a"],"values":["1"],"eps":"0.2"}"#);
        assert_eq!(doc.epsilon(None).unwrap(), Some(ratio(1, 5)));
        assert_eq!(doc.epsilon(Some("1/3")).unwrap(), Some(ratio(1, 3)));
        let bare = parse(r#"{"kind":"probability","worlds":["a"],"values":["1"]}"#);
        assert_eq!(bare.epsilon(None).unwrap(), None);
    }
}
