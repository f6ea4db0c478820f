use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational};
use super::{GaussianRational, MixedPolynomial, MultiIndex};
use crate::error::{Error, Result};

/// Wire form of a [`MixedPolynomial`]:
/// `{"n": n, "terms": [{"alpha": [...], "beta": [...], "re": "p/q", "im": "p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: String,
    pub im: String,
}

impl From<&MixedPolynomial> for PolynomialJson {
    fn from(p: &MixedPolynomial) -> Self {
        let terms = p
            .terms()
            .map(|(a, b, c)| TermJson {
                alpha: a.entries().to_vec(),
                beta: b.entries().to_vec(),
                re: format_rational(c.re()),
                im: format_rational(c.im()),
            })
            .collect();
        PolynomialJson { n: p.dim(), terms }
    }
}

impl TryFrom<&PolynomialJson> for MixedPolynomial {
    type Error = Error;

    fn try_from(j: &PolynomialJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let c = GaussianRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
                Ok((MultiIndex::new(t.alpha.clone()), MultiIndex::new(t.beta.clone()), c))
            })
            .collect::<Result<Vec<_>>>()?;
        MixedPolynomial::from_terms(j.n, terms)
    }
}

impl MixedPolynomial {
    /// Canonical JSON: terms in key order, reduced `"p/q"` strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<MixedPolynomial> {
        let j: PolynomialJson =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        MixedPolynomial::try_from(&j)
    }
}
