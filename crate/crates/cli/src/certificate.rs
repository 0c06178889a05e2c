//! Certificates: a claim plus the function it is about. Verification reads
//! only the certificate and re-evaluates the function at the recorded points.

use anyhow::{bail, Context, Result};
use graphmono::differentiation::KnotEvidence;
use graphmono::exact::rational;
use graphmono::geometry::rect::{graph_meets_open_box, squares_of_rect};
use graphmono::geometry::Rect53;
use graphmono::monotonicity::{MpointRefutation, PcCertificate, WitnessTriple};
use graphmono::Rational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::source::Source;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "kebab-case")]
pub enum Claim {
    /// Outcome of the exact oscillation-condition decision. Fail carries a witness.
    Pc(PcCertificate),
    /// Triple whose distance ratio exceeds `c`.
    Triple {
        #[serde(with = "rational::serde_pq")]
        c: Rational,
        witness: WitnessTriple,
    },
    Mpoint(MpointRefutation),
    Knot(KnotEvidence),
    /// Square `square` of `rect` has interior disjoint from the graph.
    Avoid { rect: Rect53, square: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub source: Source,
    #[serde(flatten)]
    pub claim: Claim,
}

impl Certificate {
    pub fn verify(&self) -> Result<bool> {
        Ok(match &self.claim {
            Claim::Pc(c) => c.verify(&self.source.pl()?),
            Claim::Triple { c, witness } => witness.refutes(&self.source.pl()?, c),
            Claim::Mpoint(r) => r.verify(&self.source.evaluator()?),
            Claim::Knot(ev) => ev.complete() && ev.verify(&self.source.evaluator()?),
            Claim::Avoid { rect, square } => {
                let g = self.source.pl()?;
                let sq = squares_of_rect(rect);
                let Some(s) = sq.get(*square) else { return Ok(false) };
                !graph_meets_open_box(&g, &s.x, &s.x1(), &s.y, &s.y1())
            }
        })
    }
}

/// Certificates found in a document: the document itself, its
/// `certificate` field, or every entry of its `certificates` array.
pub fn extract(doc: &Value) -> Result<Vec<Certificate>> {
    if doc.get("claim").is_some() {
        return Ok(vec![serde_json::from_value(doc.clone()).context("malformed certificate")?]);
    }
    if let Some(c) = doc.get("certificate").filter(|c| !c.is_null()) {
        return Ok(vec![serde_json::from_value(c.clone()).context("malformed certificate")?]);
    }
    if let Some(Value::Array(cs)) = doc.get("certificates") {
        return cs
            .iter()
            .map(|c| serde_json::from_value(c.clone()).context("malformed certificate"))
            .collect();
    }
    bail!("document contains no certificate")
}
