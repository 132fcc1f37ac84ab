//! Level curves of `Re phi`: the branch cut `B`, the lens `Gamma_+-`, the
//! post-critical zero curve, and point classification against them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::geometry::{Geometry, PostGeometry};
use crate::quad::gl8;
use crate::{c, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    BranchCut,
    LensPlus,
    LensMinus,
    SteepestToB,
    ZeroCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// Polyline with arclength parametrization and the values of `phi` and `y`
/// carried along it.
#[derive(Debug, Clone, Serialize)]
pub struct TracedCurve {
    pub kind: CurveKind,
    pub points: Vec<C64>,
    pub arclength: Vec<f64>,
    pub closed: bool,
    pub orientation: Orientation,
    /// `|Re phi - level|` at each node.
    pub residual: Vec<f64>,
    #[serde(skip)]
    pub(crate) phi: Vec<C64>,
    #[serde(skip)]
    pub(crate) y: Vec<C64>,
}

impl TracedCurve {
    fn from_nodes(kind: CurveKind, nodes: &[Node], level: f64, closed: bool) -> Self {
        let points: Vec<C64> = nodes.iter().map(|n| n.z).collect();
        let mut arclength = Vec::with_capacity(points.len());
        let mut s = 0.0;
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                s += (p - points[i - 1]).norm();
            }
            arclength.push(s);
        }
        let orientation = if signed_area(&points) >= 0.0 {
            Orientation::Counterclockwise
        } else {
            Orientation::Clockwise
        };
        TracedCurve {
            kind,
            residual: nodes.iter().map(|n| (n.val.re - level).abs()).collect(),
            phi: nodes.iter().map(|n| n.val).collect(),
            y: nodes.iter().map(|n| n.d).collect(),
            points,
            arclength,
            closed,
            orientation,
        }
    }

    pub fn length(&self) -> f64 {
        *self.arclength.last().unwrap_or(&0.0)
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest spacing between consecutive nodes.
    pub fn max_spacing(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max)
    }

    /// Real coordinates where the curve crosses the negative real axis.
    pub fn negative_axis_crossings(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.points.windows(2) {
            let (p, q) = (w[0], w[1]);
            if (p.im > 0.0) != (q.im > 0.0) {
                let x = p.re + (q.re - p.re) * p.im / (p.im - q.im);
                if x < 0.0 {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Winding number of the closed polyline around `z`.
    pub fn winding(&self, z: C64) -> i32 {
        winding_number(&self.points, z)
    }

    fn reversed(mut self) -> Self {
        self.points.reverse();
        self.phi.reverse();
        self.y.reverse();
        self.residual.reverse();
        let total = self.length();
        self.arclength = self.arclength.iter().rev().map(|s| total - s).collect();
        self.orientation = match self.orientation {
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::Counterclockwise,
        };
        self
    }
}

pub(crate) fn signed_area(pts: &[C64]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|k| {
            let (p, q) = (pts[k], pts[(k + 1) % n]);
            0.5 * (p.re * q.im - q.re * p.im)
        })
        .sum()
}

fn winding_number(pts: &[C64], z: C64) -> i32 {
    let n = pts.len();
    let mut total = 0.0;
    for k in 0..n {
        let (p, q) = (pts[k] - z, pts[(k + 1) % n] - z);
        total += (q / p).arg();
    }
    (total / (2.0 * PI)).round() as i32
}

/// Uniform-grid index over a set of segments.
#[derive(Debug, Clone)]
pub(crate) struct SegIndex {
    segs: Vec<(C64, C64)>,
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl SegIndex {
    pub(crate) fn new(segs: Vec<(C64, C64)>, cell: f64) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (p, q) in &segs {
            for w in [p, q] {
                xmin = xmin.min(w.re);
                xmax = xmax.max(w.re);
                ymin = ymin.min(w.im);
                ymax = ymax.max(w.im);
            }
        }
        let cell = cell.max(1e-12).max((xmax - xmin).max(ymax - ymin) / 2000.0);
        let nx = ((xmax - xmin) / cell).floor() as usize + 1;
        let ny = ((ymax - ymin) / cell).floor() as usize + 1;
        let mut cells = vec![Vec::new(); nx * ny];
        let mut idx = SegIndex { segs, x0: xmin, y0: ymin, cell, nx, ny, cells: Vec::new() };
        for (k, (p, q)) in idx.segs.iter().enumerate() {
            let (i0, j0) = idx.cell_of(c(p.re.min(q.re), p.im.min(q.im)));
            let (i1, j1) = idx.cell_of(c(p.re.max(q.re), p.im.max(q.im)));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    cells[j * nx + i].push(k as u32);
                }
            }
        }
        idx.cells = cells;
        idx
    }

    fn cell_of(&self, z: C64) -> (usize, usize) {
        let i = ((z.re - self.x0) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = ((z.im - self.y0) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }

    pub(crate) fn seg(&self, k: usize) -> (C64, C64) {
        self.segs[k]
    }

    /// Nearest segment: `(distance, segment, parameter in [0,1])`.
    pub(crate) fn nearest(&self, z: C64) -> (f64, usize, f64) {
        let (ci, cj) = self.cell_of(z);
        let mut best = (f64::INFINITY, 0usize, 0.0);
        let outside = {
            let dx = (self.x0 - z.re).max(z.re - (self.x0 + self.nx as f64 * self.cell)).max(0.0);
            let dy = (self.y0 - z.im).max(z.im - (self.y0 + self.ny as f64 * self.cell)).max(0.0);
            dx.hypot(dy)
        };
        let max_ring = self.nx.max(self.ny);
        for ring in 0..=max_ring {
            let i_lo = ci.saturating_sub(ring);
            let j_lo = cj.saturating_sub(ring);
            let i_hi = (ci + ring).min(self.nx - 1);
            let j_hi = (cj + ring).min(self.ny - 1);
            for j in j_lo..=j_hi {
                for i in i_lo..=i_hi {
                    if i.abs_diff(ci).max(j.abs_diff(cj)) != ring {
                        continue;
                    }
                    for &k in &self.cells[j * self.nx + i] {
                        let (p, q) = self.segs[k as usize];
                        let (d, s) = point_segment(z, p, q);
                        if d < best.0 {
                            best = (d, k as usize, s);
                        }
                    }
                }
            }
            let reach = outside + ring as f64 * self.cell;
            if best.0 <= reach {
                break;
            }
        }
        best
    }

    /// Number of segments crossed by the ray from `z` in the `+x` direction.
    pub(crate) fn ray_crossings(&self, z: C64) -> usize {
        if z.im < self.y0 || z.im > self.y0 + self.ny as f64 * self.cell || z.re > self.x0 + self.nx as f64 * self.cell {
            return 0;
        }
        let (ci, cj) = self.cell_of(z);
        let mut count = 0;
        for i in ci..self.nx {
            for &k in &self.cells[cj * self.nx + i] {
                let (p, q) = self.segs[k as usize];
                if (p.im <= z.im) != (q.im <= z.im) {
                    let x = p.re + (z.im - p.im) * (q.re - p.re) / (q.im - p.im);
                    if x > z.re {
                        let col = ((x - self.x0) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
                        if col.max(ci) == i {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    /// Whether the closed segment `[p, q]` meets any indexed segment.
    pub(crate) fn crosses(&self, p: C64, q: C64) -> bool {
        let (i0, j0) = self.cell_of(c(p.re.min(q.re), p.im.min(q.im)));
        let (i1, j1) = self.cell_of(c(p.re.max(q.re), p.im.max(q.im)));
        if (i1 - i0 + 1) * (j1 - j0 + 1) > 4 * self.segs.len() {
            return self.segs.iter().any(|&(a, b)| segments_intersect(p, q, a, b));
        }
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &k in &self.cells[j * self.nx + i] {
                    let (a, b) = self.segs[k as usize];
                    if segments_intersect(p, q, a, b) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn point_segment(z: C64, p: C64, q: C64) -> (f64, f64) {
    let d = q - p;
    let l2 = d.norm_sqr();
    let s = if l2 == 0.0 { 0.0 } else { ((z - p) * d.conj()).re / l2 };
    let s = s.clamp(0.0, 1.0);
    ((z - (p + s * d)).norm(), s)
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

pub(crate) fn segments_intersect(p1: C64, p2: C64, q1: C64, q2: C64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: C64, b: C64, z: C64, d: f64| {
        d == 0.0 && z.re >= a.re.min(b.re) && z.re <= a.re.max(b.re) && z.im >= a.im.min(b.im) && z.im <= a.im.max(b.im)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// The branch cut together with a spatial index and the sheet rule for `y`.
///
/// Pre-critically the sheet flips inside the closed polygon formed by `B`
/// and the vertical chord `[conj beta, beta]` (the cut of the reference
/// square root); otherwise inside the Jordan curve `B`.
#[derive(Debug, Clone)]
pub struct Cut {
    pub curve: TracedCurve,
    ring: SegIndex,
    arc: SegIndex,
    pub tol: f64,
}

impl Cut {
    pub fn new(curve: TracedCurve, tol: f64) -> Self {
        let pts = &curve.points;
        let segs: Vec<(C64, C64)> = pts.windows(2).map(|w| (w[0], w[1])).collect();
        let spacing = curve.max_spacing().max(1e-9);
        let arc = SegIndex::new(segs.clone(), 4.0 * spacing);
        let mut ring_segs = segs;
        if !curve.closed {
            ring_segs.push((*pts.last().unwrap(), pts[0]));
        }
        let ring = SegIndex::new(ring_segs, 4.0 * spacing);
        Cut { curve, ring, arc, tol }
    }

    /// Whether `z` lies in the region where `y = -y_reference`.
    pub fn inside(&self, z: C64) -> bool {
        self.ring.ray_crossings(z) % 2 == 1
    }

    /// `-1` where `y = -y_reference`, otherwise `+1`.
    pub fn sheet(&self, z: C64) -> f64 {
        if self.inside(z) {
            -1.0
        } else {
            1.0
        }
    }

    pub fn distance(&self, z: C64) -> f64 {
        self.arc.nearest(z).0
    }

    /// `(distance, index of the nearest node segment, parameter)`.
    pub fn nearest(&self, z: C64) -> (f64, usize, f64) {
        self.arc.nearest(z)
    }

    pub fn ensure_off(&self, z: C64) -> Result<()> {
        if self.distance(z) < self.tol {
            Err(Error::OnCut(z))
        } else {
            Ok(())
        }
    }

    /// Whether the segment `[p, q]` meets `B`.
    pub fn blocks(&self, p: C64, q: C64) -> bool {
        self.arc.crosses(p, q)
    }

    /// Whether `z` is on the left of `B` near its nearest point.
    pub fn left_of(&self, z: C64) -> bool {
        let (_, k, s) = self.arc.nearest(z);
        let (p, q) = self.arc.seg(k);
        let foot = p + s * (q - p);
        let mut tan = q - p;
        if (s == 0.0 || s == 1.0) && (z - foot).norm() > 0.0 {
            // At a vertex use the bisector of the adjacent tangents.
            let pts = &self.curve.points;
            let i = if s == 0.0 { k } else { k + 1 };
            let prev = if i > 0 { Some(pts[i] - pts[i - 1]) } else { None };
            let next = if i + 1 < pts.len() { Some(pts[i + 1] - pts[i]) } else { None };
            tan = match (prev, next) {
                (Some(a), Some(b)) => a / a.norm() + b / b.norm(),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                _ => tan,
            };
        }
        cross(tan, z - foot) > 0.0
    }
}

/// State carried along a traced curve: point, accumulated potential and its
/// derivative on a continuously tracked branch.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub z: C64,
    pub val: C64,
    pub d: C64,
}

pub(crate) trait LevelField {
    fn advance(&self, from: &Node, to: C64) -> Node;
    /// Node at `bp`, a zero of the derivative, reached from `from`.
    fn advance_to_zero(&self, from: &Node, bp: C64) -> Node;
}

/// Sign of `y_new` that keeps it closest to `y_prev`.
pub(crate) fn track(y_prev: C64, y_new: C64) -> C64 {
    if (y_new - y_prev).norm_sqr() <= (y_new + y_prev).norm_sqr() {
        y_new
    } else {
        -y_new
    }
}

/// `phi` with `y` continued along the path, starting from a known branch.
pub(crate) struct PhiField<'a> {
    pub geo: &'a Geometry,
}

impl PhiField<'_> {
    /// `int_{bp}^{z0} y`, with `y` on the branch equal to `y0` at `z0`;
    /// `bp` is a zero of `y`.
    pub(crate) fn integral_from_zero(&self, bp: C64, z0: C64, y0: C64) -> C64 {
        let d = z0 - bp;
        let mut prev = y0;
        let mut sum = C64::new(0.0, 0.0);
        for &(u, w) in gl8().iter().rev() {
            let y = track(prev, self.geo.y_reference(bp + u * u * d));
            sum += w * y * 2.0 * u;
            prev = y;
        }
        sum * d
    }

    pub(crate) fn seed(&self, bp: C64, z0: C64) -> Node {
        let y0 = self.geo.y_reference(z0);
        Node { z: z0, val: self.integral_from_zero(bp, z0, y0), d: y0 }
    }
}

impl LevelField for PhiField<'_> {
    fn advance(&self, from: &Node, to: C64) -> Node {
        let d = to - from.z;
        let mut prev = from.d;
        let mut sum = C64::new(0.0, 0.0);
        for (u, w) in gl8() {
            let y = track(prev, self.geo.y_reference(from.z + u * d));
            sum += w * y;
            prev = y;
        }
        let y1 = track(prev, self.geo.y_reference(to));
        Node { z: to, val: from.val + sum * d, d: y1 }
    }

    fn advance_to_zero(&self, from: &Node, bp: C64) -> Node {
        let i = self.integral_from_zero(bp, from.z, from.d);
        Node { z: bp, val: from.val - i, d: C64::new(0.0, 0.0) }
    }
}

/// Post-critical field whose zero level is the limiting zero locus.
pub(crate) struct ZeroCurveField<'a> {
    pub post: &'a PostGeometry,
    pub big_n: f64,
    pub r: f64,
    shift: f64,
    re_phi_beta: f64,
}

impl<'a> ZeroCurveField<'a> {
    pub(crate) fn new(post: &'a PostGeometry, big_n: f64, r: f64) -> Self {
        let g1 = post.gamma_1();
        let shift = big_n.ln() / (2.0 * big_n)
            - ((g1 * post.beta.powf(r)).norm() / (2.0 * PI).sqrt()).ln() / big_n;
        ZeroCurveField { post, big_n, r, shift, re_phi_beta: post.phi_primitive(post.beta).re }
    }

    pub(crate) fn value(&self, z: C64) -> f64 {
        let re_phi_int = -(self.post.phi_primitive(z).re - self.re_phi_beta);
        re_phi_int + self.shift + (self.r * z.norm().ln() + (z - self.post.beta).norm().ln()) / self.big_n
    }

    fn node(&self, z: C64) -> Node {
        let d = -self.post.y_ext(z) + (self.r / z + 1.0 / (z - self.post.beta)) / self.big_n;
        Node { z, val: C64::new(self.value(z), 0.0), d }
    }
}

impl LevelField for ZeroCurveField<'_> {
    fn advance(&self, _from: &Node, to: C64) -> Node {
        self.node(to)
    }
    fn advance_to_zero(&self, _from: &Node, bp: C64) -> Node {
        self.node(bp)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Maximal node spacing.
    pub h_max: f64,
    /// Seed offset from the branch point.
    pub seed_offset: f64,
    pub max_length: f64,
    pub escape_radius: f64,
}

impl TraceOptions {
    pub fn for_geometry(geo: &Geometry) -> Self {
        let s = geo.scale();
        let far = s + geo.a() + geo.b().norm();
        TraceOptions { h_max: 1e-3 * s, seed_offset: 1e-4 * s, max_length: 40.0 * far, escape_radius: 3.0 * far }
    }
}

enum Outcome {
    Target(Vec<Node>),
    Closed(Vec<Node>),
    Failed(String),
}

struct Tracer<'a, F: LevelField> {
    field: &'a F,
    level: f64,
    opts: TraceOptions,
    /// Points where the step must shrink (poles and zeros of the derivative).
    singular: Vec<C64>,
    /// Simple saddles to step straight through.
    pass_through: Vec<C64>,
}

impl<F: LevelField> Tracer<'_, F> {
    fn step_limit(&self, z: C64) -> f64 {
        let mut h = self.opts.h_max;
        for &s in self.singular.iter().chain(self.pass_through.iter()) {
            h = h.min(0.25 * (z - s).norm());
        }
        h.max(1e-4 * self.opts.h_max)
    }

    fn correct(&self, mut n: Node, h: f64) -> Node {
        for _ in 0..6 {
            let e = n.val.re - self.level;
            let d2 = n.d.norm_sqr();
            if d2 == 0.0 {
                break;
            }
            let mut dz = -e * n.d.conj() / d2;
            if dz.norm() > 0.5 * h {
                dz *= 0.5 * h / dz.norm();
            }
            n = self.field.advance(&n, n.z + dz);
            if dz.norm() < 1e-15 * (1.0 + n.z.norm()) {
                break;
            }
        }
        n
    }

    fn tangent(d: C64, prev: C64) -> C64 {
        let t = C64::i() * d.conj() / d.norm();
        if (t * prev.conj()).re >= 0.0 {
            t
        } else {
            -t
        }
    }

    /// Follows the level line from `start` in direction `dir`. `target` ends
    /// the curve when approached; `origin` closes it.
    fn run(&self, start: Node, dir: C64, origin: C64, target: Option<C64>) -> Outcome {
        let mut nodes = vec![start];
        let mut n = self.correct(start, self.opts.h_max);
        nodes[0] = n;
        let mut tan = dir / dir.norm();
        let mut length = 0.0;
        let mut min_origin_dist = 0.0f64;
        loop {
            if length > self.opts.max_length {
                return Outcome::Failed("maximal length exceeded".into());
            }
            if n.z.norm() > self.opts.escape_radius {
                return Outcome::Failed("escaped".into());
            }
            let h_lim = self.step_limit(n.z);
            if let Some(tg) = target {
                if (n.z - tg).norm() < 1.5 * self.opts.h_max.min(h_lim.max(0.5 * self.opts.h_max)) {
                    nodes.push(self.field.advance_to_zero(&n, tg));
                    return Outcome::Target(nodes);
                }
            }
            let dorig = (n.z - origin).norm();
            min_origin_dist = min_origin_dist.max(dorig);
            if length > 20.0 * self.opts.h_max && min_origin_dist > 10.0 * self.opts.h_max && dorig < 1.5 * self.opts.h_max {
                nodes.push(self.field.advance_to_zero(&n, origin));
                return Outcome::Closed(nodes);
            }
            if let Some(&s) = self.pass_through.iter().find(|&&s| (n.z - s).norm() < 1.5 * self.opts.h_max) {
                let mid = self.field.advance(&n, s);
                let mid = Node { d: n.d, ..mid };
                let out = self.field.advance(&mid, 2.0 * s - n.z);
                let out = self.correct(out, self.opts.h_max);
                length += (out.z - n.z).norm();
                tan = (out.z - s) / (out.z - s).norm();
                nodes.push(out);
                n = out;
                continue;
            }
            if n.d.norm() == 0.0 {
                return Outcome::Failed("stationary point".into());
            }
            let mut h = h_lim;
            let next = loop {
                let t0 = Self::tangent(n.d, tan);
                let mid = self.field.advance(&n, n.z + 0.5 * h * t0);
                let tm = Self::tangent(mid.d, t0);
                if (tm * t0.conj()).arg().abs() > 0.3 && h > 1e-6 * self.opts.h_max {
                    h *= 0.5;
                    continue;
                }
                let cand = self.field.advance(&n, n.z + h * tm);
                let cand = self.correct(cand, h);
                let moved = (cand.z - n.z).norm();
                if (moved > 1.5 * h || moved < 0.25 * h) && h > 1e-6 * self.opts.h_max {
                    h *= 0.5;
                    continue;
                }
                tan = tm;
                break cand;
            };
            length += (next.z - n.z).norm();
            nodes.push(next);
            n = next;
        }
    }
}

/// Order of the zero of `y` at `beta` and the constant `K` in `y ~ K (z-beta)^k`.
fn local_model(geo: &Geometry) -> (f64, C64) {
    let beta = geo.beta();
    match geo {
        Geometry::Pre(g) => {
            let u = g.a * (beta - g.b) / ((beta - g.a) * beta);
            (0.5, (u * u * (beta - beta.conj())).sqrt())
        }
        Geometry::Post(p) | Geometry::Critical { post: p, .. } => {
            if (p.b - p.beta).norm() < 1e-7 * geo.scale() {
                (2.0, p.a / (beta * (beta - p.a)))
            } else {
                (1.0, p.a * (beta - p.b) / (beta * (beta - p.a)))
            }
        }
    }
}

/// Directions at `beta` of the level lines `Re phi = 0`.
pub fn level_directions(geo: &Geometry) -> Vec<C64> {
    let (k, kk) = local_model(geo);
    let count = (2.0 * (k + 1.0)).round() as usize;
    (0..count)
        .map(|j| C64::from_polar(1.0, (0.5 * PI - kk.arg() + j as f64 * PI) / (k + 1.0)))
        .collect()
}

fn crosses_negative_axis_once(nodes: &[Node]) -> bool {
    let pts: Vec<C64> = nodes.iter().map(|n| n.z).collect();
    let mut count = 0;
    for w in pts.windows(2) {
        if (w[0].im > 0.0) != (w[1].im > 0.0) {
            let x = w[0].re + (w[1].re - w[0].re) * w[0].im / (w[0].im - w[1].im);
            if x < 0.0 {
                count += 1;
            }
        }
    }
    count == 1
}

/// Traces `B`, the level line `Re phi = 0` through `beta`.
pub fn trace_branch_cut(geo: &Geometry) -> Result<Cut> {
    trace_branch_cut_with(geo, TraceOptions::for_geometry(geo))
}

pub fn trace_branch_cut_with(geo: &Geometry, opts: TraceOptions) -> Result<Cut> {
    let beta = geo.beta();
    let field = PhiField { geo };
    let a = geo.a();
    let mut singular = vec![C64::new(0.0, 0.0), c(a, 0.0), beta];
    let mut pass_through = Vec::new();
    let target = match geo {
        Geometry::Pre(_) => {
            singular.push(beta.conj());
            singular.push(geo.b());
            Some(beta.conj())
        }
        _ => {
            if (geo.b() - beta).norm() > 1e-7 * geo.scale() {
                pass_through.push(geo.b());
            }
            None
        }
    };
    let tracer = Tracer { field: &field, level: 0.0, opts, singular, pass_through };
    let mut failures = Vec::new();
    let mut found: Option<TracedCurve> = None;
    for dir in level_directions(geo) {
        let start = field.seed(beta, beta + opts.seed_offset * dir);
        let head = Node { z: beta, val: C64::new(0.0, 0.0), d: C64::new(0.0, 0.0) };
        match tracer.run(start, dir, beta, target) {
            Outcome::Target(mut nodes) if geo.is_pre() => {
                nodes.insert(0, head);
                if crosses_negative_axis_once(&nodes) {
                    found = Some(TracedCurve::from_nodes(CurveKind::BranchCut, &nodes, 0.0, false));
                    break;
                }
                failures.push("reached conj(beta) without crossing the negative axis once".to_string());
            }
            Outcome::Closed(mut nodes) if !geo.is_pre() => {
                nodes.insert(0, head);
                let curve = TracedCurve::from_nodes(CurveKind::BranchCut, &nodes, 0.0, true);
                let w0 = curve.winding(C64::new(0.0, 0.0));
                let wa = curve.winding(c(a, 0.0));
                if w0 != 0 && wa != 0 {
                    let curve = if curve.orientation == Orientation::Clockwise { curve.reversed() } else { curve };
                    found = Some(curve);
                    break;
                }
                failures.push(format!("closed loop with winding ({w0}, {wa}) about (0, a)"));
            }
            Outcome::Target(_) | Outcome::Closed(_) => failures.push("wrong endpoint".into()),
            Outcome::Failed(msg) => failures.push(msg),
        }
    }
    let curve = found.ok_or_else(|| Error::Trace(failures.join("; ")))?;
    if curve.max_residual() > 1e-7 {
        return Err(Error::Topology(format!("level residual {} too large", curve.max_residual())));
    }
    let tol = 1e-9 * geo.scale();
    Ok(Cut::new(curve, tol))
}

/// `phi` on the side of `B` containing `z`, continued from the nearest node
/// of `B` along a straight segment. Only meaningful close to `B`.
pub(crate) fn phi_near_cut(geo: &Geometry, cut: &Cut, z: C64) -> C64 {
    let (_, k, s) = cut.nearest(z);
    let pts = &cut.curve.points;
    let i = if s < 0.5 { k } else { k + 1 };
    let p = pts[i];
    let field = PhiField { geo };
    let y_side = cut.sheet(z) * geo.y_reference(p);
    let stored = cut.curve.y[i];
    let sign = if (stored - y_side).norm() <= (stored + y_side).norm() { 1.0 } else { -1.0 };
    if stored.norm() == 0.0 {
        // Endpoint: integrate from the branch point itself.
        let y0 = cut.sheet(z) * geo.y_reference(z);
        return field.integral_from_zero(p, z, y0);
    }
    let n0 = Node { z: p, val: sign * cut.curve.phi[i], d: y_side };
    field.advance(&n0, z).val
}

/// Left (`+`) and right (`-`) lens boundaries and the lens profile.
#[derive(Debug, Clone)]
pub struct Lens {
    pub plus: TracedCurve,
    pub minus: TracedCurve,
    /// Maximal distance of the lens boundary from `B`.
    pub width: f64,
}

impl Lens {
    /// Lens half-width at arclength `s` along `B`.
    pub fn profile(&self, s: f64, total: f64) -> f64 {
        self.width * (PI * (s / total).clamp(0.0, 1.0)).sin()
    }
}

/// Builds `Gamma_+-` as offset curves of `B` whose distance vanishes at the
/// ends like a sine profile, halving the width until `Re phi < -margin`
/// holds away from the ends.
pub fn trace_lens(geo: &Geometry, cut: &Cut, width: f64, margin: f64) -> Result<Lens> {
    let curve = &cut.curve;
    let total = curve.length();
    let pts = &curve.points;
    let n = pts.len();
    let field = PhiField { geo };
    let mut w = width;
    for _ in 0..8 {
        let mut sides = Vec::new();
        let mut ok = true;
        for (side, kind) in [(1.0, CurveKind::LensPlus), (-1.0, CurveKind::LensMinus)] {
            let mut nodes = Vec::with_capacity(n);
            for i in 0..n {
                let s = curve.arclength[i];
                let prof = w * (PI * s / total).sin();
                let tan = if i == 0 {
                    pts[1] - pts[0]
                } else if i + 1 == n {
                    pts[n - 1] - pts[n - 2]
                } else {
                    pts[i + 1] - pts[i - 1]
                };
                let normal = C64::i() * tan / tan.norm() * side;
                let q = pts[i] + prof * normal;
                let val = if prof == 0.0 || i == 0 || i + 1 == n {
                    C64::new(0.0, 0.0)
                } else {
                    let probe = pts[i] + 1e-3 * prof * normal;
                    let y_side = cut.sheet(probe) * geo.y_reference(pts[i]);
                    let stored = curve.y[i];
                    let sign = if (stored - y_side).norm() <= (stored + y_side).norm() { 1.0 } else { -1.0 };
                    field.advance(&Node { z: pts[i], val: sign * curve.phi[i], d: y_side }, q).val
                };
                let away = s > 0.05 * total && s < 0.95 * total;
                if away && !(val.re < -margin) {
                    ok = false;
                }
                nodes.push(Node { z: q, val, d: C64::new(0.0, 0.0) });
            }
            let mut tc = TracedCurve::from_nodes(kind, &nodes, 0.0, curve.closed);
            tc.residual = nodes.iter().map(|n| n.val.re).collect();
            sides.push(tc);
        }
        if ok {
            let minus = sides.pop().unwrap();
            let plus = sides.pop().unwrap();
            return Ok(Lens { plus, minus, width: w });
        }
        w *= 0.5;
    }
    Err(Error::Trace("no lens width keeps Re phi negative".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Zone {
    ExtB,
    IntB,
    OmegaPlus,
    OmegaMinus,
    NearBeta,
    NearBetaBar,
}

impl Zone {
    pub fn name(&self) -> &'static str {
        match self {
            Zone::ExtB => "ext",
            Zone::IntB => "int",
            Zone::OmegaPlus => "omega_plus",
            Zone::OmegaMinus => "omega_minus",
            Zone::NearBeta => "near_beta",
            Zone::NearBetaBar => "near_beta_bar",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZoneTag {
    pub zone: Zone,
    /// Distance to `B`, negative on the left (inner) side.
    pub signed_distance_to_b: f64,
}

/// Traced curves and disk radii used to dispatch the asymptotic formulas.
#[derive(Debug, Clone)]
pub struct Contours {
    pub cut: Cut,
    pub lens: Lens,
    pub beta: C64,
    /// Radius of the disk around `beta` (and `conj beta` pre-critically).
    pub disk_radius: f64,
    pub pre: bool,
}

impl Contours {
    pub fn build(geo: &Geometry, disk_radius: f64) -> Result<Self> {
        let cut = trace_branch_cut(geo)?;
        let lens = trace_lens(geo, &cut, 0.05 * geo.scale(), 1e-6)?;
        Ok(Contours { cut, lens, beta: geo.beta(), disk_radius, pre: geo.is_pre() })
    }
}

pub fn classify_zone(z: C64, curves: &Contours) -> Result<ZoneTag> {
    let cut = &curves.cut;
    let dist = cut.distance(z);
    let left = cut.left_of(z);
    let signed = if left { -dist } else { dist };
    let tag = |zone| Ok(ZoneTag { zone, signed_distance_to_b: signed });
    if (z - curves.beta).norm() < curves.disk_radius {
        return tag(Zone::NearBeta);
    }
    if curves.pre && (z - curves.beta.conj()).norm() < curves.disk_radius {
        return tag(Zone::NearBetaBar);
    }
    if dist < cut.tol.max(1e-3 * cut.curve.max_spacing()) {
        return Err(Error::Zone(z));
    }
    // The two-term formulas hold in a full band around B outside the disks,
    // not only between the lens contours.
    if dist < curves.lens.width {
        return tag(if left { Zone::OmegaPlus } else { Zone::OmegaMinus });
    }
    tag(if cut.inside(z) { Zone::IntB } else { Zone::ExtB })
}

/// Traces the post-critical curve on which the zeros of `P_n` accumulate at
/// finite `N`.
pub fn zero_curve(geo: &Geometry, big_n: f64, r: f64, cut: &Cut) -> Result<TracedCurve> {
    let post = match geo {
        Geometry::Post(p) => p,
        _ => return Err(Error::Regime("the zero curve is traced only post-critically".into())),
    };
    let field = ZeroCurveField::new(post, big_n, r);
    let x_b = cut
        .curve
        .negative_axis_crossings()
        .into_iter()
        .fold(f64::NAN, |acc, x| if acc.is_nan() { x } else { acc.max(x) });
    if x_b.is_nan() {
        return Err(Error::Topology("B does not cross the negative axis".into()));
    }
    // Scan from B towards 0 for the sign change of the field.
    let steps = 400;
    let mut prev = (x_b * (1.0 - 1e-9), field.value(c(x_b * (1.0 - 1e-9), 0.0)));
    let mut bracket = None;
    for k in 1..steps {
        let x = x_b * (1.0 - k as f64 / steps as f64);
        let v = field.value(c(x, 0.0));
        if (v > 0.0) != (prev.1 > 0.0) {
            bracket = Some((prev.0, x));
            break;
        }
        prev = (x, v);
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| Error::Trace("no zero-curve point on the negative axis".into()))?;
    let flo = field.value(c(lo, 0.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (field.value(c(mid, 0.0)) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x0 = 0.5 * (lo + hi);
    let opts = TraceOptions::for_geometry(geo);
    let tracer = Tracer {
        field: &field,
        level: 0.0,
        opts,
        singular: vec![C64::new(0.0, 0.0), c(post.a, 0.0), post.beta],
        pass_through: Vec::new(),
    };
    let start = field.node(c(x0, 0.0));
    // Downward at the left crossing is counterclockwise.
    match tracer.run(start, -C64::i(), start.z, None) {
        Outcome::Closed(nodes) => Ok(TracedCurve::from_nodes(CurveKind::ZeroCurve, &nodes, 0.0, true)),
        Outcome::Target(_) => Err(Error::Trace("unexpected target".into())),
        Outcome::Failed(msg) => Err(Error::Trace(msg)),
    }
}
