//! Compact planar domains and the quadrature rules that discretize them.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss;

/// Relative tolerance on `Σ weights = area`.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// Smallest accepted quadrature order.
pub const MIN_ORDER: usize = 4;

/// A point of the plane, read as `z = x + iy` (time-frequency `(x, ξ)`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist_sqr(self, other: Point2) -> f64 {
        (self - other).norm_sqr()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

fn cross(a: Point2, b: Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Shape description. Polygons are stored counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Disk { center: Point2, radius: f64 },
    Rectangle { corner: Point2, width: f64, height: f64 },
    Polygon { vertices: Vec<Point2> },
}

impl Shape {
    pub fn disk(radius: f64) -> Shape {
        Shape::Disk { center: Point2::ORIGIN, radius }
    }

    /// Disk centered at the origin with the given area.
    pub fn disk_with_area(area: f64) -> Shape {
        Shape::disk((area / PI).sqrt())
    }

    /// Rectangle centered at the origin.
    pub fn centered_rectangle(width: f64, height: f64) -> Shape {
        Shape::Rectangle { corner: Point2::new(-0.5 * width, -0.5 * height), width, height }
    }

    pub fn polygon(vertices: Vec<Point2>) -> Shape {
        Shape::Polygon { vertices }
    }
}

/// A compact planar region with exact area and perimeter.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    shape: Shape,
    dilation: f64,
    area: f64,
    perimeter: f64,
    centroid: Point2,
}

/// Validates a shape and builds the domain.
pub fn make_domain(shape: Shape) -> Result<Domain> {
    Domain::new(shape)
}

impl Domain {
    pub fn new(shape: Shape) -> Result<Domain> {
        let shape = match shape {
            Shape::Disk { center, radius } => {
                if !center.is_finite() || !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::InvalidDomain(format!("disk radius must be positive, got {radius}")));
                }
                Shape::Disk { center, radius }
            }
            Shape::Rectangle { corner, width, height } => {
                if !corner.is_finite() || !(width.is_finite() && width > 0.0) || !(height.is_finite() && height > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "rectangle sides must be positive, got {width} x {height}"
                    )));
                }
                Shape::Rectangle { corner, width, height }
            }
            Shape::Polygon { vertices } => Shape::Polygon { vertices: validate_polygon(vertices)? },
        };
        let (area, perimeter, centroid) = measures(&shape);
        Ok(Domain { shape, dilation: 1.0, area, perimeter, centroid })
    }

    /// Parses a descriptor `disk:<R>`, `rect:<W>x<H>` or `poly:<path>`.
    pub fn from_descriptor(desc: &str) -> Result<Domain> {
        let desc = desc.trim();
        let (kind, arg) = desc
            .split_once(':')
            .ok_or_else(|| Error::InvalidDomain(format!("expected kind:argument, got '{desc}'")))?;
        let bad = |what: &str| Error::InvalidDomain(format!("malformed {what} descriptor '{desc}'"));
        match kind.trim() {
            "disk" => {
                let r: f64 = arg.trim().parse().map_err(|_| bad("disk"))?;
                Domain::new(Shape::disk(r))
            }
            "rect" => {
                let (w, h) = arg.trim().split_once(['x', 'X']).ok_or_else(|| bad("rect"))?;
                let w: f64 = w.trim().parse().map_err(|_| bad("rect"))?;
                let h: f64 = h.trim().parse().map_err(|_| bad("rect"))?;
                Domain::new(Shape::centered_rectangle(w, h))
            }
            "poly" => Domain::new(Shape::polygon(read_polygon_file(arg.trim())?)),
            other => Err(Error::InvalidDomain(format!("unknown domain kind '{other}'"))),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Accumulated dilation factor relative to the domain as constructed.
    pub fn dilation(&self) -> f64 {
        self.dilation
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn centroid(&self) -> Point2 {
        self.centroid
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Point2, Point2) {
        match &self.shape {
            Shape::Disk { center, radius } => {
                (Point2::new(center.x - radius, center.y - radius), Point2::new(center.x + radius, center.y + radius))
            }
            Shape::Rectangle { corner, width, height } => (*corner, Point2::new(corner.x + width, corner.y + height)),
            Shape::Polygon { vertices } => {
                let mut lo = vertices[0];
                let mut hi = vertices[0];
                for v in vertices {
                    lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
        }
    }

    /// Largest side of the bounding box.
    pub fn extent(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi.x - lo.x).max(hi.y - lo.y)
    }

    /// Bounding box dilated by `factor` about its center, as a rectangle domain.
    pub fn enclosing_box(&self, factor: f64) -> Result<Domain> {
        if !(factor.is_finite() && factor >= 1.0) {
            return Err(Error::InvalidArgument(format!("box factor must be >= 1, got {factor}")));
        }
        let (lo, hi) = self.bounding_box();
        let (w, h) = ((hi.x - lo.x) * factor, (hi.y - lo.y) * factor);
        let c = (lo + hi) * 0.5;
        Domain::new(Shape::Rectangle { corner: Point2::new(c.x - 0.5 * w, c.y - 0.5 * h), width: w, height: h })
    }

    /// Dilation by `factor` about the centroid.
    pub fn dilate(&self, factor: f64) -> Result<Domain> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {factor}")));
        }
        let c = self.centroid;
        let map = |p: Point2| c + (p - c) * factor;
        let shape = match &self.shape {
            Shape::Disk { center, radius } => Shape::Disk { center: *center, radius: radius * factor },
            Shape::Rectangle { corner, width, height } => {
                Shape::Rectangle { corner: map(*corner), width: width * factor, height: height * factor }
            }
            Shape::Polygon { vertices } => Shape::Polygon { vertices: vertices.iter().copied().map(map).collect() },
        };
        let (area, perimeter, centroid) = measures(&shape);
        Ok(Domain { shape, dilation: self.dilation * factor, area, perimeter, centroid })
    }

    /// Membership; boundary points count as inside.
    pub fn contains(&self, p: Point2) -> bool {
        match &self.shape {
            Shape::Disk { center, radius } => p.dist_sqr(*center) <= radius * radius * (1.0 + 1e-14),
            Shape::Rectangle { corner, width, height } => {
                p.x >= corner.x && p.x <= corner.x + width && p.y >= corner.y && p.y <= corner.y + height
            }
            Shape::Polygon { vertices } => polygon_contains(vertices, p),
        }
    }

    /// Quadrature rule of the given order; see [`quadrature`].
    pub fn quadrature(&self, order: usize) -> Result<QuadratureRule> {
        quadrature(self, order)
    }
}

/// Membership test, free-function form.
pub fn contains(d: &Domain, p: Point2) -> bool {
    d.contains(p)
}

/// Dilation, free-function form.
pub fn dilate(d: &Domain, factor: f64) -> Result<Domain> {
    d.dilate(factor)
}

fn measures(shape: &Shape) -> (f64, f64, Point2) {
    match shape {
        Shape::Disk { center, radius } => (PI * radius * radius, 2.0 * PI * radius, *center),
        Shape::Rectangle { corner, width, height } => {
            (width * height, 2.0 * (width + height), Point2::new(corner.x + 0.5 * width, corner.y + 0.5 * height))
        }
        Shape::Polygon { vertices } => {
            let n = vertices.len();
            let mut area2 = 0.0;
            let mut cx = 0.0;
            let mut cy = 0.0;
            let mut perimeter = 0.0;
            for i in 0..n {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = cross(a, b);
                area2 += c;
                cx += (a.x + b.x) * c;
                cy += (a.y + b.y) * c;
                perimeter += a.dist_sqr(b).sqrt();
            }
            let area = 0.5 * area2;
            (area, perimeter, Point2::new(cx / (6.0 * area), cy / (6.0 * area)))
        }
    }
}

fn signed_area2(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum()
}

fn validate_polygon(mut vertices: Vec<Point2>) -> Result<Vec<Point2>> {
    // A closing vertex equal to the first one is tolerated.
    if vertices.len() > 3 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    if vertices.len() < 3 {
        return Err(Error::InvalidDomain(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
    }
    if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidDomain(format!("non-finite polygon vertex {p:?}")));
    }
    let n = vertices.len();
    for i in 0..n {
        if vertices[i] == vertices[(i + 1) % n] {
            return Err(Error::InvalidDomain(format!("repeated polygon vertex at index {i}")));
        }
    }
    let a2 = signed_area2(&vertices);
    let (mut lo, mut hi) = (vertices[0], vertices[0]);
    for v in &vertices {
        lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                return Err(Error::InvalidDomain(format!("polygon is self-intersecting (edges {i} and {j})")));
            }
        }
    }
    let scale = (hi.x - lo.x).max(hi.y - lo.y);
    if a2.abs() <= 1e-12 * scale * scale {
        return Err(Error::InvalidDomain("polygon has zero area".into()));
    }
    if a2 < 0.0 {
        vertices.reverse();
    }
    Ok(vertices)
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    cross(b - a, c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn polygon_contains(v: &[Point2], p: Point2) -> bool {
    let n = v.len();
    let scale = v.iter().fold(0.0f64, |m, q| m.max(q.x.abs()).max(q.y.abs())).max(1.0);
    let eps = 1e-12 * scale;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let len = a.dist_sqr(b).sqrt();
        if orient(a, b, p).abs() <= eps * len && on_segment(a, b, p) {
            return true;
        }
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Parses the polygon file format: one `x y` pair per line.
pub fn parse_polygon(text: &str) -> Result<Vec<Point2>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |s: Option<&str>| s.and_then(|s| s.parse::<f64>().ok());
        match (parse(it.next()), parse(it.next()), it.next()) {
            (Some(x), Some(y), None) => out.push(Point2::new(x, y)),
            _ => {
                return Err(Error::InvalidDomain(format!("polygon line {}: expected 'x y', got '{line}'", lineno + 1)))
            }
        }
    }
    Ok(out)
}

pub fn read_polygon_file(path: impl AsRef<Path>) -> Result<Vec<Point2>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_polygon(&text)
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Disk { radius, .. } => write!(f, "disk(R={radius})"),
            Shape::Rectangle { width, height, .. } => write!(f, "rect({width}x{height})"),
            Shape::Polygon { vertices } => write!(f, "polygon({} vertices)", vertices.len()),
        }
    }
}

/// Nodes and positive weights discretizing Lebesgue measure on a domain.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<Point2>,
    weights: Vec<f64>,
    order: usize,
    target: Domain,
}

impl QuadratureRule {
    /// Rule from explicit parts, checked for positive weights and interior
    /// nodes but not for the weight-sum invariant (useful for degenerate
    /// one-node rules).
    pub fn from_parts(nodes: Vec<Point2>, weights: Vec<f64>, target: Domain) -> Result<QuadratureRule> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidArgument("nodes and weights must be non-empty and of equal length".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidArgument("quadrature weights must be positive".into()));
        }
        if let Some(p) = nodes.iter().find(|p| !target.contains(**p)) {
            return Err(Error::InvalidArgument(format!("node {p:?} lies outside {target}")));
        }
        Ok(QuadratureRule { nodes, weights, order: 0, target })
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn target(&self) -> &Domain {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Point2) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }
}

/// Builds a quadrature rule for `d`.
///
/// * disk: `order` radial Gauss–Legendre points times `2·order` uniform angles;
/// * rectangle: `order × order` tensor Gauss–Legendre;
/// * polygon: ear-clipping triangulation with a collapsed `order × order`
///   Gauss–Legendre rule per triangle.
pub fn quadrature(d: &Domain, order: usize) -> Result<QuadratureRule> {
    if order < MIN_ORDER {
        return Err(Error::QuadratureOrder { order, hint: format!("use an order of at least {MIN_ORDER}") });
    }
    let (nodes, weights) = match d.shape() {
        Shape::Disk { center, radius } => disk_rule(*center, *radius, order),
        Shape::Rectangle { corner, width, height } => {
            let (xs, wx) = gauss::legendre_on(order, corner.x, corner.x + width);
            let (ys, wy) = gauss::legendre_on(order, corner.y, corner.y + height);
            let mut nodes = Vec::with_capacity(order * order);
            let mut weights = Vec::with_capacity(order * order);
            for (x, a) in xs.iter().zip(&wx) {
                for (y, b) in ys.iter().zip(&wy) {
                    nodes.push(Point2::new(*x, *y));
                    weights.push(a * b);
                }
            }
            (nodes, weights)
        }
        Shape::Polygon { vertices } => {
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for [a, b, c] in triangulate(vertices) {
                triangle_rule(a, b, c, order, &mut nodes, &mut weights);
            }
            (nodes, weights)
        }
    };
    let rule = QuadratureRule { nodes, weights, order, target: d.clone() };
    let rel = (rule.weight_sum() - d.area()).abs() / d.area();
    if rel > WEIGHT_SUM_TOL {
        return Err(Error::QuadratureOrder {
            order,
            hint: format!("weight sum misses the area by {rel:e}; increase the order"),
        });
    }
    Ok(rule)
}

fn disk_rule(center: Point2, radius: f64, order: usize) -> (Vec<Point2>, Vec<f64>) {
    let (rs, wr) = gauss::legendre_on(order, 0.0, radius);
    let n_theta = 2 * order;
    let dtheta = 2.0 * PI / n_theta as f64;
    let mut nodes = Vec::with_capacity(order * n_theta);
    let mut weights = Vec::with_capacity(order * n_theta);
    for (r, w) in rs.iter().zip(&wr) {
        for k in 0..n_theta {
            let (s, c) = (k as f64 * dtheta).sin_cos();
            nodes.push(Point2::new(center.x + r * c, center.y + r * s));
            weights.push(w * r * dtheta);
        }
    }
    (nodes, weights)
}

fn triangle_rule(a: Point2, b: Point2, c: Point2, order: usize, nodes: &mut Vec<Point2>, weights: &mut Vec<f64>) {
    let area2 = orient(a, b, c).abs();
    if area2 == 0.0 {
        return;
    }
    let (us, ws) = gauss::legendre_on(order, 0.0, 1.0);
    for (u, wu) in us.iter().zip(&ws) {
        for (v, wv) in us.iter().zip(&ws) {
            // Collapsed square: (u, v) -> a + u[(1-v)(b-a) + v(c-a)], Jacobian area2·u.
            let p = a + ((b - a) * (1.0 - v) + (c - a) * *v) * *u;
            nodes.push(p);
            weights.push(wu * wv * area2 * u);
        }
    }
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
fn triangulate(vertices: &[Point2]) -> Vec<[Point2; 3]> {
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    let mut out = Vec::with_capacity(vertices.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 && guard < 10 * vertices.len() * vertices.len() {
        guard += 1;
        let n = idx.len();
        let mut clipped = false;
        for k in 0..n {
            let (ip, i, inx) = (idx[(k + n - 1) % n], idx[k], idx[(k + 1) % n]);
            let (a, b, c) = (vertices[ip], vertices[i], vertices[inx]);
            let o = orient(a, b, c);
            if o < 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ip || j == i || j == inx {
                    return false;
                }
                let p = vertices[j];
                orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
            });
            if blocked && o > 0.0 {
                continue;
            }
            if o > 0.0 {
                out.push([a, b, c]);
            }
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 {
        out.push([vertices[idx[0]], vertices[idx[1]], vertices[idx[2]]]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Domain {
        Domain::new(Shape::Rectangle { corner: Point2::ORIGIN, width: 1.0, height: 1.0 }).unwrap()
    }

    #[test]
    fn disk_area_and_perimeter() {
        let d = Domain::new(Shape::disk(1.0)).unwrap();
        assert_eq!(d.area(), PI);
        assert_eq!(d.perimeter(), 2.0 * PI);
    }

    #[test]
    fn square_area_and_perimeter() {
        let d = unit_square();
        assert_eq!(d.area(), 1.0);
        assert_eq!(d.perimeter(), 4.0);
    }

    #[test]
    fn triangle_area_and_perimeter() {
        let d = Domain::new(Shape::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]))
            .unwrap();
        assert!((d.area() - 0.5).abs() < 1e-15);
        assert!((d.perimeter() - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn clockwise_polygon_is_reoriented() {
        let d = Domain::new(Shape::polygon(vec![Point2::new(0.0, 0.0), Point2::new(0.0, 1.0), Point2::new(1.0, 0.0)]))
            .unwrap();
        assert!(d.area() > 0.0);
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert!(Domain::new(Shape::disk(0.0)).is_err());
        assert!(Domain::new(Shape::centered_rectangle(1.0, -1.0)).is_err());
        assert!(Domain::new(Shape::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)])).is_err());
        // collinear
        let line = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(2.0, 0.0)];
        assert!(Domain::new(Shape::polygon(line)).is_err());
        // bow tie
        let bowtie = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        let err = Domain::new(Shape::polygon(bowtie)).unwrap_err();
        assert!(err.to_string().contains("self-intersecting"));
    }

    #[test]
    fn dilation_examples() {
        let d = Domain::new(Shape::disk(1.0)).unwrap();
        let d3 = d.dilate(3.0).unwrap();
        assert_eq!(d3.shape(), &Shape::disk(3.0));
        let twice = d.dilate(2.0).unwrap().dilate(1.5).unwrap();
        assert!((twice.area() - d3.area()).abs() < 1e-12);
        assert!((twice.perimeter() - d3.perimeter()).abs() < 1e-12);
        assert_eq!(d.dilate(1.0).unwrap().shape(), d.shape());
        assert!(d.dilate(0.0).is_err());
        assert!(d.dilate(-2.0).is_err());
    }

    #[test]
    fn membership_examples() {
        let d = Domain::new(Shape::disk(1.0)).unwrap();
        assert!(d.contains(Point2::new(0.0, 0.0)));
        assert!(!d.contains(Point2::new(2.0, 0.0)));
        assert!(d.contains(Point2::new(1.0, 0.0)));
        assert!(unit_square().contains(Point2::new(0.5, 1.0)));
        let l_shape = Domain::new(Shape::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ]))
        .unwrap();
        assert!(l_shape.contains(Point2::new(0.5, 1.5)));
        assert!(!l_shape.contains(Point2::new(1.5, 1.5)));
        assert!(l_shape.contains(Point2::new(1.5, 1.0)));
    }

    #[test]
    fn quadrature_weight_sums() {
        let disk = Domain::new(Shape::disk(1.0)).unwrap();
        let rule = quadrature(&disk, 20).unwrap();
        assert!((rule.weight_sum() - PI).abs() < 1e-10 * PI);
        assert_eq!(rule.len(), 20 * 40);
        let sq = quadrature(&unit_square(), 10).unwrap();
        assert!((sq.weight_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_second_moment() {
        // ∫_{D_1} x² dA = ∫_0^1 ∫_0^{2π} r³ cos²θ dθ dr = π/4
        let disk = Domain::new(Shape::disk(1.0)).unwrap();
        let rule = quadrature(&disk, 20).unwrap();
        let q = rule.integrate(|p| p.x * p.x);
        assert!((q - PI / 4.0).abs() < 1e-8);
    }

    #[test]
    fn low_order_is_rejected_with_hint() {
        let err = quadrature(&unit_square(), 3).unwrap_err();
        assert!(matches!(err, Error::QuadratureOrder { .. }));
        assert!(err.to_string().contains("at least"));
    }

    #[test]
    fn nonconvex_polygon_rule() {
        let l_shape = Domain::new(Shape::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ]))
        .unwrap();
        let rule = quadrature(&l_shape, 6).unwrap();
        assert!((rule.weight_sum() - 3.0).abs() < 1e-12);
        assert!(rule.nodes().iter().all(|p| l_shape.contains(*p)));
        // ∫ x dA over the L-shape = 1·0.5·... computed by parts: [0,2]x[0,1] gives 2, [0,1]x[1,2] gives 0.5
        let q = rule.integrate(|p| p.x);
        assert!((q - 2.5).abs() < 1e-12);
    }

    #[test]
    fn descriptors() {
        let d = Domain::from_descriptor("disk:2").unwrap();
        assert!((d.area() - 4.0 * PI).abs() < 1e-12);
        let r = Domain::from_descriptor("rect:2x3").unwrap();
        assert_eq!(r.area(), 6.0);
        assert_eq!(r.centroid(), Point2::ORIGIN);
        assert!(Domain::from_descriptor("blob:1").is_err());
        assert!(Domain::from_descriptor("disk:x").is_err());
    }

    #[test]
    fn polygon_file_parsing() {
        let pts = parse_polygon("0 0\n1 0\n\n0.5 1.5\n").unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2], Point2::new(0.5, 1.5));
        assert!(parse_polygon("0 0 0\n").is_err());
        assert!(parse_polygon("a b\n").is_err());
    }
}
