//! Continuous piecewise-linear functions with rational breakpoints.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// A point `(x, f(x))` of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPoint {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub y: Rational,
}

/// One component of a level set `{x : f(x) = v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crossing {
    Point(Rational),
    /// `f ≡ v` on the whole closed interval.
    Interval(Rational, Rational),
}

impl Crossing {
    pub fn start(&self) -> &Rational {
        match self {
            Crossing::Point(x) | Crossing::Interval(x, _) => x,
        }
    }

    pub fn end(&self) -> &Rational {
        match self {
            Crossing::Point(x) | Crossing::Interval(_, x) => x,
        }
    }
}

/// Strictly increasing breakpoints with values; affine in between.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PlRepr", into = "PlRepr")]
pub struct PlFunction {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PlRepr {
    #[serde(with = "rational::serde_pq::vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    values: Vec<Rational>,
}

impl TryFrom<PlRepr> for PlFunction {
    type Error = Error;

    fn try_from(r: PlRepr) -> Result<Self> {
        PlFunction::new(r.breakpoints, r.values)
    }
}

impl From<PlFunction> for PlRepr {
    fn from(f: PlFunction) -> Self {
        PlRepr {
            breakpoints: f.breakpoints,
            values: f.values,
        }
    }
}

/// Equality of the normalized meshes: collinear interior breakpoints are ignored.
impl PartialEq for PlFunction {
    fn eq(&self, other: &Self) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.breakpoints == b.breakpoints && a.values == b.values
    }
}

impl Eq for PlFunction {}

impl PlFunction {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidPl(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPl("need at least two breakpoints".into()));
        }
        if let Some(w) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPl(format!(
                "breakpoints not strictly increasing at index {}",
                w + 1
            )));
        }
        Ok(PlFunction {
            breakpoints,
            values,
        })
    }

    /// Builds from `(x, y)` pairs.
    pub fn from_points<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let (xs, ys) = points.into_iter().unzip();
        Self::new(xs, ys)
    }

    pub fn constant(lo: Rational, hi: Rational, value: Rational) -> Result<Self> {
        Self::new(vec![lo, hi], vec![value.clone(), value])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    /// Number of affine pieces.
    pub fn segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    pub fn point(&self, i: usize) -> GraphPoint {
        GraphPoint {
            x: self.breakpoints[i].clone(),
            y: self.values[i].clone(),
        }
    }

    pub fn slope(&self, seg: usize) -> Rational {
        (&self.values[seg + 1] - &self.values[seg])
            / (&self.breakpoints[seg + 1] - &self.breakpoints[seg])
    }

    fn check_domain(&self, x: &Rational) -> Result<()> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::OutOfDomain {
                x: x.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        Ok(())
    }

    /// Index `i` of the segment `[b_i, b_{i+1}]` containing `x`; a breakpoint
    /// belongs to the segment on its right, except the last one.
    pub fn segment_of(&self, x: &Rational) -> Result<usize> {
        self.check_domain(x)?;
        let i = match self.breakpoints.binary_search(x) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok(i.min(self.segments() - 1))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.check_domain(x)?;
        match self.breakpoints.binary_search(x) {
            Ok(i) => Ok(self.values[i].clone()),
            Err(i) => Ok(self.interpolate(i - 1, x)),
        }
    }

    fn interpolate(&self, seg: usize, x: &Rational) -> Rational {
        let (x0, x1) = (&self.breakpoints[seg], &self.breakpoints[seg + 1]);
        let (y0, y1) = (&self.values[seg], &self.values[seg + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Sorted union of both meshes; domains must agree.
    pub fn merged_mesh(&self, other: &PlFunction) -> Result<Vec<Rational>> {
        let (a0, a1) = self.domain();
        let (b0, b1) = other.domain();
        if a0 != b0 || a1 != b1 {
            return Err(Error::DomainMismatch(
                a0.clone(),
                a1.clone(),
                b0.clone(),
                b1.clone(),
            ));
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (p, q) = (&self.breakpoints, &other.breakpoints);
        while i < p.len() || j < q.len() {
            let next = match (p.get(i), q.get(j)) {
                (Some(a), Some(b)) => match a.cmp(b) {
                    Ordering::Less => {
                        i += 1;
                        a
                    }
                    Ordering::Greater => {
                        j += 1;
                        b
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        a
                    }
                },
                (Some(a), None) => {
                    i += 1;
                    a
                }
                (None, Some(b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            out.push(next.clone());
        }
        Ok(out)
    }

    /// Evaluates at a sorted list of points inside the domain in one sweep.
    pub fn eval_sorted(&self, xs: &[Rational]) -> Vec<Rational> {
        let mut seg = 0;
        xs.iter()
            .map(|x| {
                while seg + 1 < self.segments() && &self.breakpoints[seg + 1] <= x {
                    seg += 1;
                }
                if x == &self.breakpoints[seg] {
                    self.values[seg].clone()
                } else if x == &self.breakpoints[seg + 1] {
                    self.values[seg + 1].clone()
                } else {
                    self.interpolate(seg, x)
                }
            })
            .collect()
    }

    fn combine(
        &self,
        other: &PlFunction,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<PlFunction> {
        let mesh = self.merged_mesh(other)?;
        let a = self.eval_sorted(&mesh);
        let b = other.eval_sorted(&mesh);
        let values = a.iter().zip(&b).map(|(u, v)| op(u, v)).collect();
        PlFunction::new(mesh, values)
    }

    pub fn add(&self, other: &PlFunction) -> Result<PlFunction> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PlFunction) -> Result<PlFunction> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> PlFunction {
        PlFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn neg(&self) -> PlFunction {
        PlFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `x ↦ f(-x)` on the mirrored domain.
    pub fn reflect_x(&self) -> PlFunction {
        PlFunction {
            breakpoints: self.breakpoints.iter().rev().map(|b| -b).collect(),
            values: self.values.iter().rev().cloned().collect(),
        }
    }

    /// Exact `sup |f - g|`, attained on the merged mesh.
    pub fn sup_diff(&self, other: &PlFunction) -> Result<Rational> {
        let mesh = self.merged_mesh(other)?;
        let a = self.eval_sorted(&mesh);
        let b = other.eval_sorted(&mesh);
        Ok(a.iter()
            .zip(&b)
            .map(|(u, v)| (u - v).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    pub fn total_variation(&self) -> Rational {
        self.values
            .windows(2)
            .map(|w| (&w[1] - &w[0]).abs())
            .fold(Rational::zero(), |acc, d| acc + d)
    }

    pub fn max_value(&self) -> &Rational {
        self.values.iter().max().unwrap()
    }

    pub fn min_value(&self) -> &Rational {
        self.values.iter().min().unwrap()
    }

    /// Sorted components of `{x : f(x) = v}`. Maximal flat runs at level `v`
    /// are reported as a single [`Crossing::Interval`].
    pub fn level_crossings(&self, v: &Rational) -> Vec<Crossing> {
        let mut out: Vec<Crossing> = Vec::new();
        let push_point = |out: &mut Vec<Crossing>, x: Rational| {
            if let Some(last) = out.last() {
                if last.end() == &x {
                    return;
                }
            }
            out.push(Crossing::Point(x));
        };
        for i in 0..self.segments() {
            let (y0, y1) = (&self.values[i], &self.values[i + 1]);
            let (x0, x1) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
            if y0 == v && y1 == v {
                match out.last_mut() {
                    Some(Crossing::Interval(_, e)) if e == x0 => *e = x1.clone(),
                    Some(Crossing::Point(p)) if p == x0 => {
                        let s = p.clone();
                        *out.last_mut().unwrap() = Crossing::Interval(s, x1.clone());
                    }
                    _ => out.push(Crossing::Interval(x0.clone(), x1.clone())),
                }
                continue;
            }
            if y0 == v {
                push_point(&mut out, x0.clone());
            }
            let lo = rational::min(y0, y1);
            let hi = rational::max(y0, y1);
            if &lo < v && v < &hi {
                push_point(&mut out, x0 + (x1 - x0) * (v - y0) / (y1 - y0));
            }
            if y1 == v {
                push_point(&mut out, x1.clone());
            }
        }
        out
    }

    /// Minimal Jordan pair `(g, h)`: both nondecreasing, `f = g - h`,
    /// `g(first) = f(first)`, `h(first) = 0`.
    pub fn jordan_decompose(&self) -> (PlFunction, PlFunction) {
        let mut g = Vec::with_capacity(self.len());
        let mut h = Vec::with_capacity(self.len());
        g.push(self.values[0].clone());
        h.push(Rational::zero());
        for w in self.values.windows(2) {
            let d = &w[1] - &w[0];
            let (gl, hl) = (g.last().unwrap().clone(), h.last().unwrap().clone());
            if d.is_positive() {
                g.push(gl + d);
                h.push(hl);
            } else {
                g.push(gl);
                h.push(hl - d);
            }
        }
        (
            PlFunction::new(self.breakpoints.clone(), g).unwrap(),
            PlFunction::new(self.breakpoints.clone(), h).unwrap(),
        )
    }

    /// Drops interior breakpoints where the two adjacent slopes agree.
    pub fn normalized(&self) -> PlFunction {
        let n = self.len();
        let mut xs = vec![self.breakpoints[0].clone()];
        let mut ys = vec![self.values[0].clone()];
        for i in 1..n - 1 {
            let (xp, yp) = (xs.last().unwrap(), ys.last().unwrap());
            let (xi, yi) = (&self.breakpoints[i], &self.values[i]);
            let (xn, yn) = (&self.breakpoints[i + 1], &self.values[i + 1]);
            // collinear iff (yi - yp)(xn - xi) == (yn - yi)(xi - xp)
            if (yi - yp) * (xn - xi) != (yn - yi) * (xi - xp) {
                xs.push(xi.clone());
                ys.push(yi.clone());
            }
        }
        xs.push(self.breakpoints[n - 1].clone());
        ys.push(self.values[n - 1].clone());
        PlFunction {
            breakpoints: xs,
            values: ys,
        }
    }

    /// Whether the function is nondecreasing.
    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<PlFunction> {
        Ok(serde_json::from_str(s)?)
    }

    /// Float samples `(x, y)` of the breakpoints, for plotting and estimators.
    pub fn to_f64_points(&self) -> Vec<(f64, f64)> {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .map(|(x, y)| (rational::to_f64(x), rational::to_f64(y)))
            .collect()
    }
}
