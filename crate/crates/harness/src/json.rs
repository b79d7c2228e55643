//! JSON forms of exact geometric objects; every number is a rational
//! string such as `"3/7"`.

use serde::{Deserialize, Serialize};

use quantsel::ellipsoid::Ellipsoid;
use quantsel::geom::{ConvexBody, Point};
use quantsel::num::{fmt_rational, parse_rational};
use quantsel::tverberg::Segment;
use quantsel::{Rational, Result};

pub fn rat(s: &str) -> Result<Rational> {
    parse_rational(s)
}

pub fn rat_str(r: &Rational) -> String {
    fmt_rational(r)
}

pub fn coords(v: &[Rational]) -> Vec<String> {
    v.iter().map(rat_str).collect()
}

pub fn parse_coords(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rat(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyJson {
    pub vertices: Vec<Vec<String>>,
}

impl BodyJson {
    pub fn from_body(b: &ConvexBody) -> Self {
        BodyJson { vertices: b.vertices().iter().map(|p| coords(&p.0)).collect() }
    }

    pub fn from_segment(s: &Segment) -> Self {
        BodyJson { vertices: vec![coords(&s.a.0), coords(&s.b.0)] }
    }

    pub fn points(&self) -> Result<Vec<Point>> {
        self.vertices.iter().map(|v| parse_coords(v).map(Point)).collect()
    }

    pub fn to_body(&self) -> Result<ConvexBody> {
        ConvexBody::new(self.points()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidJson {
    pub center: Vec<String>,
    /// Rows of the symmetric positive-definite matrix `A` in `A(B) + c`.
    pub shape: Vec<Vec<String>>,
}

impl EllipsoidJson {
    pub fn from_ellipsoid(e: &Ellipsoid) -> Self {
        EllipsoidJson { center: coords(e.center()), shape: e.shape().iter().map(|row| coords(row)).collect() }
    }

    pub fn to_ellipsoid(&self) -> Result<Ellipsoid> {
        let shape = self.shape.iter().map(|row| parse_coords(row)).collect::<Result<Vec<_>>>()?;
        Ellipsoid::new(shape, parse_coords(&self.center)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentJson {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

impl SegmentJson {
    pub fn from_segment(s: &Segment) -> Self {
        SegmentJson { a: coords(&s.a.0), b: coords(&s.b.0) }
    }

    pub fn to_segment(&self) -> Result<Segment> {
        Segment::new(Point(parse_coords(&self.a)?), Point(parse_coords(&self.b)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum WitnessJson {
    Ellipsoid { center: Vec<String>, shape: Vec<Vec<String>> },
    Segment { a: Vec<String>, b: Vec<String> },
}

impl WitnessJson {
    pub fn from_witness(w: &quantsel::selection::Witness) -> Self {
        match w {
            quantsel::selection::Witness::Ellipsoid(e) => {
                let j = EllipsoidJson::from_ellipsoid(e);
                WitnessJson::Ellipsoid { center: j.center, shape: j.shape }
            }
            quantsel::selection::Witness::Segment(s) => {
                let j = SegmentJson::from_segment(s);
                WitnessJson::Segment { a: j.a, b: j.b }
            }
        }
    }

    pub fn to_witness(&self) -> Result<quantsel::selection::Witness> {
        Ok(match self {
            WitnessJson::Ellipsoid { center, shape } => quantsel::selection::Witness::Ellipsoid(
                EllipsoidJson { center: center.clone(), shape: shape.clone() }.to_ellipsoid()?,
            ),
            WitnessJson::Segment { a, b } => {
                quantsel::selection::Witness::Segment(SegmentJson { a: a.clone(), b: b.clone() }.to_segment()?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantsel::num::{int, rat as q};

    #[test]
    fn round_trips() {
        let e = Ellipsoid::new(vec![vec![int(2), q(1, 3)], vec![q(1, 3), int(1)]], vec![q(-1, 2), int(4)]).unwrap();
        let j = EllipsoidJson::from_ellipsoid(&e);
        assert_eq!(j.center, vec!["-1/2", "4"]);
        assert_eq!(j.to_ellipsoid().unwrap(), e);
        let w = WitnessJson::from_witness(&quantsel::selection::Witness::Ellipsoid(e));
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"type\":\"ellipsoid\""));
        assert_eq!(serde_json::from_str::<WitnessJson>(&text).unwrap(), w);
    }
}
