//! Function sources: built-in constructions or JSON files, with an exact
//! piecewise-linear view and a certified evaluator view.

use std::path::Path;

use anyhow::{bail, Context, Result};
use graphmono::constructions::fivefold::{approximant, FivefoldLimit};
use graphmono::constructions::peaks::{peak_build, PeakSumFn, PeakSumModel};
use graphmono::constructions::series::SeriesEvaluator;
use graphmono::exact::rational::pow2;
use graphmono::{CertifiedFn, Enclosure, PlFunction, Rational};
use serde::{Deserialize, Serialize};

use crate::args::{Kind, SourceArgs};

/// Self-contained description of a function; certificates embed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    /// Approximant `f_level` of the five-point refinement.
    Mzv { level: u32 },
    /// The limit function evaluated through blocks of the given depth.
    MzvLimit { depth: u32 },
    Peaks { model: PeakSumModel },
    Nomp { truncation: u32, sample_bits: u32 },
    Takagi { truncation: u32, sample_bits: u32 },
    Pl {
        #[serde(rename = "fn")]
        function: PlFunction,
    },
}

/// Output of `construct`: the source plus its piecewise-linear view.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constructed {
    #[serde(flatten)]
    pub source: Source,
    #[serde(rename = "fn")]
    pub function: PlFunction,
}

pub enum Evaluator {
    Pl(PlFunction),
    Limit(FivefoldLimit),
    Peaks(PeakSumModel),
    Series(SeriesEvaluator),
}

impl CertifiedFn for Evaluator {
    fn enclose(&self, x: &Rational) -> graphmono::Result<Enclosure> {
        match self {
            Evaluator::Pl(f) => f.enclose(x),
            Evaluator::Limit(f) => f.enclose(x),
            Evaluator::Peaks(m) => PeakSumFn { model: m, upto: m.last }.enclose(x),
            Evaluator::Series(s) => s.enclose(x),
        }
    }

    fn domain(&self) -> Option<(Rational, Rational)> {
        match self {
            Evaluator::Pl(f) => CertifiedFn::domain(f),
            Evaluator::Limit(f) => f.domain(),
            Evaluator::Peaks(m) => PeakSumFn { model: m, upto: m.last }.domain(),
            Evaluator::Series(s) => s.domain(),
        }
    }
}

fn series_pl(s: &SeriesEvaluator, bits: u32) -> Result<PlFunction> {
    if bits > 24 {
        bail!("sample_bits {bits} exceeds 24");
    }
    let n = 1i64 << bits;
    let h = pow2(-(bits as i64));
    let pts = (0..=n).map(|k| {
        let x = &h * Rational::from_integer(k.into());
        let y = s.eval(&x).value;
        (x, y)
    });
    Ok(PlFunction::from_points(pts)?)
}

impl Source {
    pub fn from_args(a: &SourceArgs) -> Result<Source> {
        if let Some(path) = &a.input {
            return Source::load(path);
        }
        let kind = a.kind.context("either --in or --kind is required")?;
        Source::build(kind, a.level, a.grid, a.truncation, a.sample_bits)
    }

    pub fn build(kind: Kind, level: u32, grid: u32, truncation: u32, sample_bits: u32) -> Result<Source> {
        Ok(match kind {
            Kind::Mzv => Source::Mzv { level },
            Kind::Peaks => Source::Peaks {
                model: peak_build(level as usize, grid)?,
            },
            Kind::Nomp => Source::Nomp { truncation, sample_bits },
            Kind::Takagi => Source::Takagi { truncation, sample_bits },
        })
    }

    /// Reads a `construct` document or a bare piecewise-linear function.
    pub fn load(path: &Path) -> Result<Source> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        if let Ok(c) = serde_json::from_str::<Constructed>(&text) {
            return Ok(c.source);
        }
        if let Ok(s) = serde_json::from_str::<Source>(&text) {
            return Ok(s);
        }
        let f: PlFunction = serde_json::from_str(&text)
            .with_context(|| format!("{} is neither a construct document nor a piecewise-linear function", path.display()))?;
        Ok(Source::Pl { function: f })
    }

    pub fn pl(&self) -> Result<PlFunction> {
        Ok(match self {
            Source::Mzv { level } => approximant(*level)?.function,
            Source::MzvLimit { depth } => approximant(*depth)?.function,
            Source::Peaks { model } => model.partial_sum_pl(model.last),
            Source::Nomp { truncation, sample_bits } => series_pl(&SeriesEvaluator::no_m_point(*truncation), *sample_bits)?,
            Source::Takagi { truncation, sample_bits } => series_pl(&SeriesEvaluator::takagi(*truncation), *sample_bits)?,
            Source::Pl { function } => function.clone(),
        })
    }

    /// Certified view. Five-point approximants are replaced by the limit
    /// function at `depth`.
    pub fn certified(self, depth: u32) -> Source {
        match self {
            Source::Mzv { .. } => Source::MzvLimit { depth },
            other => other,
        }
    }

    pub fn evaluator(&self) -> Result<Evaluator> {
        Ok(match self {
            Source::Mzv { level } => Evaluator::Pl(approximant(*level)?.function),
            Source::MzvLimit { depth } => Evaluator::Limit(FivefoldLimit::new(*depth)),
            Source::Peaks { model } => Evaluator::Peaks(model.clone()),
            Source::Nomp { truncation, .. } => Evaluator::Series(SeriesEvaluator::no_m_point(*truncation)),
            Source::Takagi { truncation, .. } => Evaluator::Series(SeriesEvaluator::takagi(*truncation)),
            Source::Pl { function } => Evaluator::Pl(function.clone()),
        })
    }

    /// Replaces file-loaded sources by an inline copy so certificates stand alone.
    pub fn constructed(&self) -> Result<Constructed> {
        Ok(Constructed {
            source: self.clone(),
            function: self.pl()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphmono::exact::rational::{int, ratio};

    #[test]
    fn construct_document_round_trips() {
        let c = Source::Mzv { level: 1 }.constructed().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with("{\"kind\":\"mzv\",\"level\":1,\"fn\":"));
        let back: Constructed = serde_json::from_str(&text).unwrap();
        assert_eq!(back.source, Source::Mzv { level: 1 });
        assert_eq!(back.function.values().len(), 6);
    }

    #[test]
    fn series_view_is_sampled() {
        let s = Source::Takagi { truncation: 20, sample_bits: 3 };
        let f = s.pl().unwrap();
        assert_eq!(f.breakpoints().len(), 9);
        assert_eq!(f.eval(&ratio(1, 2)).unwrap(), ratio(1, 2));
        let e = s.evaluator().unwrap();
        assert_eq!(e.enclose(&int(0)).unwrap().value, int(0));
    }

    #[test]
    fn approximants_become_the_limit() {
        assert_eq!(Source::Mzv { level: 3 }.certified(9), Source::MzvLimit { depth: 9 });
        let p = Source::Pl { function: PlFunction::new(vec![int(0), int(1)], vec![int(0), int(1)]).unwrap() };
        assert_eq!(p.clone().certified(9), p);
    }
}
