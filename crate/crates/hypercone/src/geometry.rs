//! Exact convex polygons in the rational plane, their Minkowski sums, and the
//! two-dimensional Brunn-Minkowski inequality
//! `area(A + B) >= (sqrt(area A) + sqrt(area B))^2`.
//!
//! The inequality is checked without square roots: with
//! `s = area(A + B) - area A - area B` it is equivalent to `s >= 0` and
//! `s^2 >= 4 area A area B`.

use std::collections::BTreeSet;
use std::fmt;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::{rat, rational_serde, Rational};

/// A point of `Q^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x, 1), rat(y, 1))
    }

    pub fn origin() -> Self {
        Point::int(0, 0)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Rational) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn cross(&self, o: &Point) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    /// Lowest point first, ties broken by the smaller `x`.
    fn bottom_key(&self) -> (Rational, Rational) {
        (self.y.clone(), self.x.clone())
    }

    /// `0` for directions in `[0, pi)`, `1` for `[pi, 2 pi)`.
    fn half(&self) -> u8 {
        if self.y.is_positive() || (self.y.is_zero() && self.x.is_positive()) {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn turn(o: &Point, a: &Point, b: &Point) -> Rational {
    a.sub(o).cross(&b.sub(o))
}

/// Counter-clockwise strictly convex vertex list, starting at the lowest
/// (then leftmost) vertex. One vertex is a point and two are a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VertexList", into = "VertexList")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct VertexList(#[serde(with = "rational_serde::matrix")] Vec<Vec<Rational>>);

impl TryFrom<VertexList> for ConvexPolygon {
    type Error = Error;

    fn try_from(list: VertexList) -> Result<Self> {
        let pts = list
            .0
            .into_iter()
            .map(|row| match <[Rational; 2]>::try_from(row) {
                Ok([x, y]) => Ok(Point::new(x, y)),
                Err(row) => Err(Error::Dimension {
                    expected: 2,
                    found: row.len(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        ConvexPolygon::hull(pts)
    }
}

impl From<ConvexPolygon> for VertexList {
    fn from(p: ConvexPolygon) -> Self {
        VertexList(p.vertices.into_iter().map(|v| vec![v.x, v.y]).collect())
    }
}

impl ConvexPolygon {
    /// Accept a vertex list that is already counter-clockwise and strictly
    /// convex. It is rotated to start at the lowest vertex.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::Input("a polygon needs at least one vertex".into()));
        }
        if n == 2 && vertices[0] == vertices[1] {
            return Err(Error::Input("repeated vertex".into()));
        }
        if n >= 3 {
            for i in 0..n {
                if !turn(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]).is_positive()
                {
                    return Err(Error::Input(format!(
                        "vertices are not strictly convex and counter-clockwise at {}",
                        vertices[(i + 1) % n]
                    )));
                }
            }
        }
        Ok(Self::rotated(vertices))
    }

    fn rotated(mut vertices: Vec<Point>) -> Self {
        let start = (0..vertices.len())
            .min_by_key(|&i| vertices[i].bottom_key())
            .expect("nonempty");
        vertices.rotate_left(start);
        ConvexPolygon { vertices }
    }

    /// Convex hull of a finite point set (monotone chain).
    pub fn hull(points: Vec<Point>) -> Result<Self> {
        let pts: Vec<Point> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if pts.is_empty() {
            return Err(Error::Input("empty point set".into()));
        }
        if pts.len() <= 2 {
            return Ok(Self::rotated(pts));
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(Self::rotated(lower))
    }

    pub fn point(p: Point) -> Self {
        ConvexPolygon { vertices: vec![p] }
    }

    /// Axis-parallel rectangle `[x0, x1] x [y0, y1]` with integer corners.
    pub fn rect(x0: i64, y0: i64, x1: i64, y1: i64) -> Result<Self> {
        Self::hull(vec![
            Point::int(x0, y0),
            Point::int(x1, y0),
            Point::int(x1, y1),
            Point::int(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Shoelace area.
    pub fn area(&self) -> Rational {
        let n = self.vertices.len();
        let twice: Rational = (0..n)
            .map(|i| self.vertices[i].cross(&self.vertices[(i + 1) % n]))
            .sum();
        twice / rat(2, 1)
    }

    pub fn scale(&self, k: &Rational) -> Result<Self> {
        if k.is_negative() {
            return Err(Error::Input("negative dilation".into()));
        }
        if k.is_zero() {
            return Ok(Self::point(Point::origin()));
        }
        Ok(ConvexPolygon {
            vertices: self.vertices.iter().map(|v| v.scale(k)).collect(),
        })
    }

    pub fn translate(&self, t: &Point) -> Self {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| v.add(t)).collect(),
        }
    }

    fn edges(&self) -> Vec<Point> {
        let n = self.vertices.len();
        if n == 1 {
            return Vec::new();
        }
        (0..n)
            .map(|i| self.vertices[(i + 1) % n].sub(&self.vertices[i]))
            .collect()
    }
}

/// `true` when direction `a` comes no later than `b` in counter-clockwise
/// order starting from the positive `x` axis.
fn angle_le(a: &Point, b: &Point) -> bool {
    match a.half().cmp(&b.half()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => !a.cross(b).is_negative(),
    }
}

/// `A + B = {a + b}` by merging the two edge sequences by polar angle.
pub fn minkowski_sum(a: &ConvexPolygon, b: &ConvexPolygon) -> ConvexPolygon {
    let (ea, eb) = (a.edges(), b.edges());
    let mut merged: Vec<Point> = Vec::with_capacity(ea.len() + eb.len());
    let (mut i, mut j) = (0, 0);
    while i < ea.len() || j < eb.len() {
        let take_a = j == eb.len() || (i < ea.len() && angle_le(&ea[i], &eb[j]));
        let e = if take_a {
            i += 1;
            &ea[i - 1]
        } else {
            j += 1;
            &eb[j - 1]
        };
        match merged.last_mut() {
            Some(last) if last.cross(e).is_zero() && last.half() == e.half() => *last = last.add(e),
            _ => merged.push(e.clone()),
        }
    }
    let mut vertices = vec![a.vertices[0].add(&b.vertices[0])];
    for e in merged.iter().take(merged.len().saturating_sub(1)) {
        let next = vertices.last().expect("nonempty").add(e);
        vertices.push(next);
    }
    ConvexPolygon::rotated(vertices)
}

/// Verdict of the square-root-free Brunn-Minkowski check for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BmVerdict {
    #[serde(with = "rational_serde")]
    pub area_a: Rational,
    #[serde(with = "rational_serde")]
    pub area_b: Rational,
    #[serde(with = "rational_serde")]
    pub area_sum: Rational,
    /// `area(A + B) - area A - area B`.
    #[serde(with = "rational_serde")]
    pub excess: Rational,
    pub holds: bool,
    pub equality: bool,
}

pub fn bm_audit(a: &ConvexPolygon, b: &ConvexPolygon) -> BmVerdict {
    let area_a = a.area();
    let area_b = b.area();
    let area_sum = minkowski_sum(a, b).area();
    let excess = &area_sum - &area_a - &area_b;
    let bound = rat(4, 1) * &area_a * &area_b;
    let square = &excess * &excess;
    let holds = !excess.is_negative() && square >= bound;
    let equality = !excess.is_negative() && square == bound;
    BmVerdict {
        area_a,
        area_b,
        area_sum,
        excess,
        holds,
        equality,
    }
}

/// `{a + b}` for finite point sets.
pub fn point_set_sum(a: &[Point], b: &[Point]) -> BTreeSet<Point> {
    a.iter()
        .flat_map(|p| b.iter().map(move |q| p.add(q)))
        .collect()
}

pub fn point_set_scale(a: &[Point], k: &Rational) -> BTreeSet<Point> {
    a.iter().map(|p| p.scale(k)).collect()
}

/// `(1 + 1)A` against `1A + 1A` for the two-point set `A = {0, e1}`.
#[derive(Clone, Debug, Serialize)]
pub struct DistributivityWitness {
    pub set: Vec<String>,
    pub doubled: Vec<String>,
    pub sum: Vec<String>,
    pub doubled_in_sum: bool,
    pub strict: bool,
}

pub fn distributivity_failure_witness() -> DistributivityWitness {
    let a = vec![Point::origin(), Point::int(1, 0)];
    let doubled = point_set_scale(&a, &rat(2, 1));
    let sum = point_set_sum(&a, &a);
    let show = |s: &BTreeSet<Point>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    DistributivityWitness {
        set: a.iter().map(|p| p.to_string()).collect(),
        doubled_in_sum: doubled.is_subset(&sum),
        strict: doubled.len() < sum.len(),
        doubled: show(&doubled),
        sum: show(&sum),
    }
}

/// `(s + t)A = sA + tA`, which holds for every convex `A`.
pub fn convex_distributes(a: &ConvexPolygon, s: &Rational, t: &Rational) -> Result<bool> {
    Ok(a.scale(&(s + t))? == minkowski_sum(&a.scale(s)?, &a.scale(t)?))
}

/// A random polygon: hull of a few integer points, possibly degenerate.
pub fn random_polygon(rng: &mut impl Rng, max_points: usize, span: i64) -> ConvexPolygon {
    let k = rng.gen_range(1..=max_points);
    let pts = (0..k)
        .map(|_| {
            Point::new(
                rat(rng.gen_range(-span..=span), 1),
                rat(rng.gen_range(-span..=span), rng.gen_range(1..3)),
            )
        })
        .collect();
    ConvexPolygon::hull(pts).expect("nonempty")
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BmAuditReport {
    pub pairs: usize,
    pub equalities: usize,
    pub homothets: usize,
    pub homothet_equalities: usize,
    pub failures: Vec<String>,
    pub commutative: bool,
    pub associative: bool,
    pub distributive: bool,
}

impl BmAuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.commutative
            && self.associative
            && self.distributive
            && self.homothet_equalities == self.homothets
    }
}

/// Random pairs, plus one homothetic copy per pair, plus sum laws on triples.
pub fn bm_random_audit(pairs: usize, seed: u64) -> BmAuditReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BmAuditReport {
        pairs,
        commutative: true,
        associative: true,
        distributive: true,
        ..Default::default()
    };
    for k in 0..pairs {
        let a = random_polygon(&mut rng, 7, 6);
        let b = random_polygon(&mut rng, 7, 6);
        let c = random_polygon(&mut rng, 5, 4);
        let v = bm_audit(&a, &b);
        if !v.holds {
            report
                .failures
                .push(format!("pair {k}: {:?} {:?}", a.vertices(), b.vertices()));
        }
        report.equalities += usize::from(v.equality);

        let lambda = Rational::new(rng.gen_range(1..7).into(), rng.gen_range(1..4).into());
        let shift = Point::new(rat(rng.gen_range(-5..6), 1), rat(rng.gen_range(-5..6), 2));
        let h = bm_audit(&a, &a.scale(&lambda).expect("positive").translate(&shift));
        report.homothets += 1;
        report.homothet_equalities += usize::from(h.equality);

        report.commutative &= minkowski_sum(&a, &b) == minkowski_sum(&b, &a);
        report.associative &=
            minkowski_sum(&minkowski_sum(&a, &b), &c) == minkowski_sum(&a, &minkowski_sum(&b, &c));
        let t = Rational::new(rng.gen_range(0..5).into(), rng.gen_range(1..4).into());
        report.distributive &= convex_distributes(&a, &lambda, &t).expect("nonnegative");
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sum(a: &ConvexPolygon, b: &ConvexPolygon) -> ConvexPolygon {
        ConvexPolygon::hull(
            point_set_sum(a.vertices(), b.vertices())
                .into_iter()
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn squares() {
        let sq = ConvexPolygon::rect(0, 0, 1, 1).unwrap();
        assert_eq!(
            minkowski_sum(&sq, &sq),
            ConvexPolygon::rect(0, 0, 2, 2).unwrap()
        );
        let v = bm_audit(&sq, &sq);
        assert!(v.holds && v.equality);
        assert_eq!(v.area_sum, rat(4, 1));
    }

    #[test]
    fn square_plus_segment() {
        let sq = ConvexPolygon::rect(0, 0, 1, 1).unwrap();
        let seg = ConvexPolygon::hull(vec![Point::origin(), Point::int(3, 0)]).unwrap();
        let sum = minkowski_sum(&sq, &seg);
        assert_eq!(sum, ConvexPolygon::rect(0, 0, 4, 1).unwrap());
        assert_eq!(sum.vertices().len(), 4);
        let v = bm_audit(&sq, &seg);
        assert!(v.holds && !v.equality);
        assert_eq!(v.excess, rat(3, 1));
    }

    #[test]
    fn point_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_polygon(&mut rng, 6, 5);
        assert_eq!(minkowski_sum(&p, &ConvexPolygon::point(Point::origin())), p);
        let v = bm_audit(&ConvexPolygon::point(Point::int(2, 3)), &p);
        assert!(v.equality);
    }

    #[test]
    fn edge_merge_matches_hull_of_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let a = random_polygon(&mut rng, 8, 5);
            let b = random_polygon(&mut rng, 8, 5);
            let s = minkowski_sum(&a, &b);
            assert_eq!(
                s,
                brute_sum(&a, &b),
                "{:?} + {:?}",
                a.vertices(),
                b.vertices()
            );
            assert!(s.vertices().len() <= a.vertices().len() + b.vertices().len());
        }
    }

    #[test]
    fn crossing_segments_are_strict() {
        let h = ConvexPolygon::hull(vec![Point::origin(), Point::int(2, 0)]).unwrap();
        let v = ConvexPolygon::hull(vec![Point::origin(), Point::int(0, 3)]).unwrap();
        let r = bm_audit(&h, &v);
        assert_eq!(r.area_sum, rat(6, 1));
        assert!(r.holds && !r.equality);
    }

    #[test]
    fn rejects_clockwise() {
        assert!(
            ConvexPolygon::new(vec![Point::int(0, 0), Point::int(0, 1), Point::int(1, 0)]).is_err()
        );
        let ok =
            ConvexPolygon::new(vec![Point::int(1, 0), Point::int(0, 1), Point::int(0, 0)]).unwrap();
        assert_eq!(ok.vertices()[0], Point::origin());
    }

    #[test]
    fn two_point_set() {
        let w = distributivity_failure_witness();
        assert_eq!(w.doubled.len(), 2);
        assert_eq!(w.sum.len(), 3);
        assert!(w.doubled_in_sum && w.strict);
        let single = [Point::int(4, 1)];
        assert_eq!(
            point_set_scale(&single, &rat(2, 1)),
            point_set_sum(&single, &single)
        );
    }

    #[test]
    fn random_audit() {
        let r = bm_random_audit(200, 9);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn json_round_trip() {
        let p: ConvexPolygon = serde_json::from_str(r#"[[0,0],[2,0],["1/2",3],[1,1]]"#).unwrap();
        assert_eq!(p.vertices().len(), 3);
        let back: ConvexPolygon =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
