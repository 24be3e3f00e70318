//! Floating point reference implementations.
//!
//! Everything here is computed directly from the geometric definitions
//! (tangent spheres, tangent planes, cone geometry, an explicit
//! parametrization of the trisector) and never calls the exact predicates.
//! Every classification carries a decisive margin; answers whose margin is
//! below [`MARGIN`] are reported as [`OracleError::MarginTooSmall`] so that
//! callers can discard them.

use thiserror::Error;

use crate::base::{ExistenceCount, InConeResult, ShadowType, TrisectorType};
use crate::edge_conflict::{EdgeConflictKind, EdgeSpec};
use crate::insphere::{Orientation, VertexLabel};
use crate::kernel::{to_f64, Sign};
use crate::sites::Site;

/// Smallest decisive gap accepted by the oracle.
pub const MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("trisector is not hyperbolic")]
    NotHyperbolic,
    #[error("classification margin below the guard")]
    MarginTooSmall,
    #[error("numeric solve failed")]
    NoConvergence,
    #[error("edge endpoints missing or out of order")]
    InvalidEdge,
}

pub type OracleResult<T> = Result<T, OracleError>;

pub type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: V3, k: f64) -> V3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

fn decisive(x: f64) -> OracleResult<Sign> {
    if !x.is_finite() {
        return Err(OracleError::NoConvergence);
    }
    if x.abs() < MARGIN {
        return Err(OracleError::MarginTooSmall);
    }
    Ok(if x > 0.0 { Sign::Pos } else { Sign::Neg })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericSphere {
    pub center: V3,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrisectorPoint {
    pub point: V3,
    pub map_value: f64,
}

#[derive(Clone, Copy, Debug)]
struct Ball {
    c: V3,
    r: f64,
}

impl From<&Site> for Ball {
    fn from(s: &Site) -> Self {
        Ball {
            c: [to_f64(&s.center[0]), to_f64(&s.center[1]), to_f64(&s.center[2])],
            r: to_f64(&s.radius),
        }
    }
}

/// Tangency orientation of the sphere centered at `p` touching `balls`, in
/// order: sign of `Orient3D` of the unit directions from `p` to the centers.
fn tangency_orientation(p: V3, balls: &[Ball; 4]) -> OracleResult<Sign> {
    let e = balls.map(|b| {
        let d = sub(b.c, p);
        scale(d, 1.0 / norm(d))
    });
    let det = dot(sub(e[2], e[1]), cross(sub(e[3], e[1]), sub(e[0], e[1])));
    decisive(det)
}

// ---------------------------------------------------------------------------
// Cone and trisector type
// ---------------------------------------------------------------------------

/// Classifies `c` against the cone tangent to `a` and `b` from the signed
/// distance of `c`'s center to the cone surface.
pub fn incone_numeric(a: &Site, b: &Site, c: &Site) -> OracleResult<InConeResult> {
    let (mut a, mut b, c) = (Ball::from(a), Ball::from(b), Ball::from(c));
    if a.r > b.r {
        std::mem::swap(&mut a, &mut b);
    }
    let ab = sub(b.c, a.c);
    let len = norm(ab);
    let u = scale(ab, 1.0 / len);
    let sin = (b.r - a.r) / len;
    let cos = (1.0 - sin * sin).max(0.0).sqrt();
    let w = sub(c.c, a.c);
    let along = dot(w, u);
    let radial = norm(sub(w, scale(u, along)));
    // Axial coordinate measured from the apex; the cylinder has no apex.
    let s = if sin > 0.0 { along + a.r / sin } else { f64::INFINITY };
    if s.is_finite() && s <= MARGIN {
        return Ok(InConeResult::Outside);
    }
    let margin = if s.is_finite() {
        s * sin - radial * cos - c.r
    } else {
        a.r - radial - c.r
    };
    if margin.abs() < MARGIN {
        return if radial < MARGIN {
            Ok(InConeResult::CircleTouch)
        } else {
            Ok(InConeResult::OnePointTouch)
        };
    }
    Ok(if margin > 0.0 { InConeResult::Inside } else { InConeResult::Outside })
}

/// Trisector type from the number of common tangent planes of three spheres
/// (two: hyperbolic, one: parabolic, none: elliptic).
pub fn trisector_numeric(i: &Site, j: &Site, k: &Site) -> OracleResult<TrisectorType> {
    let (bi, bj, bk) = (Ball::from(i), Ball::from(j), Ball::from(k));
    let pj = sub(bj.c, bi.c);
    let pk = sub(bk.c, bi.c);
    let n = cross(pj, pk);
    if norm(n) < MARGIN * (norm(pj) * norm(pk)).max(1.0) {
        return Ok(TrisectorType::Elliptic);
    }
    let npar = plane_normal_in_plane(pj, pk, bj.r - bi.r, bk.r - bi.r);
    let kappa = 1.0 - dot(npar, npar);
    if kappa.abs() < MARGIN {
        return Ok(TrisectorType::Parabolic);
    }
    Ok(if kappa > 0.0 { TrisectorType::Hyperbolic } else { TrisectorType::Elliptic })
}

/// The in-plane vector `v` with `v . pj = sj` and `v . pk = sk`.
fn plane_normal_in_plane(pj: V3, pk: V3, sj: f64, sk: f64) -> V3 {
    let (g11, g12, g22) = (dot(pj, pj), dot(pj, pk), dot(pk, pk));
    let det = g11 * g22 - g12 * g12;
    let alpha = (sj * g22 - sk * g12) / det;
    let beta = (sk * g11 - sj * g12) / det;
    add(scale(pj, alpha), scale(pk, beta))
}

// ---------------------------------------------------------------------------
// Trisector parametrization
// ---------------------------------------------------------------------------

/// Points equidistant (in the additively weighted sense) from three sites:
/// `p = C_i + q0 + R q1 + h nhat` with `h^2 = f(R)`, where `R` is the radius
/// of the tangent sphere centered at `p`.
#[derive(Clone, Copy, Debug)]
struct Frame {
    ci: V3,
    ri: f64,
    q0: V3,
    q1: V3,
    nhat: V3,
    /// Coefficients of `f(R) = f2 R^2 + f1 R + f0`.
    f2: f64,
    f1: f64,
    f0: f64,
}

impl Frame {
    fn new(i: Ball, j: Ball, k: Ball) -> OracleResult<Frame> {
        let pj = sub(j.c, i.c);
        let pk = sub(k.c, i.c);
        let n = cross(pj, pk);
        let nn = norm(n);
        if nn < 1e-12 * (norm(pj) * norm(pk)).max(1.0) {
            return Err(OracleError::NoConvergence);
        }
        let gj = (dot(pj, pj) - j.r * j.r + i.r * i.r) / 2.0;
        let gk = (dot(pk, pk) - k.r * k.r + i.r * i.r) / 2.0;
        let q0 = plane_normal_in_plane(pj, pk, gj, gk);
        let q1 = plane_normal_in_plane(pj, pk, -(j.r - i.r), -(k.r - i.r));
        Ok(Frame {
            ci: i.c,
            ri: i.r,
            q0,
            q1,
            nhat: scale(n, 1.0 / nn),
            f2: 1.0 - dot(q1, q1),
            f1: 2.0 * (i.r - dot(q0, q1)),
            f0: i.r * i.r - dot(q0, q0),
        })
    }

    fn f(&self, r: f64) -> f64 {
        (self.f2 * r + self.f1) * r + self.f0
    }

    fn point(&self, r: f64, h: f64) -> V3 {
        add(add(self.ci, self.q0), add(scale(self.q1, r), scale(self.nhat, h)))
    }

    /// Radius at the point where a hyperbolic trisector crosses the plane of
    /// the centers; the branch of valid tangent spheres is `R >= r_o`.
    fn r_o(&self) -> f64 {
        let disc = (self.f1 * self.f1 - 4.0 * self.f2 * self.f0).max(0.0);
        (-self.f1 + disc.sqrt()) / (2.0 * self.f2)
    }

    /// Tangent spheres of the three frame sites that also touch `a`
    /// externally, as `(R, h)` pairs. The second value is a margin telling
    /// how far the instance is from a change in the number of solutions.
    fn solve_with(&self, a: Ball) -> (Vec<(f64, f64)>, f64) {
        let pa = sub(a.c, self.ci);
        let ga = (dot(pa, pa) - a.r * a.r + self.ri * self.ri) / 2.0;
        let e = dot(self.nhat, pa);
        let l0 = ga - dot(self.q0, pa);
        let l1 = -(a.r - self.ri) - dot(self.q1, pa);
        let scale_len = norm(pa).max(1.0);
        let mut out = Vec::new();
        let mut margin = f64::INFINITY;
        let accept = |r: f64, h: f64, out: &mut Vec<(f64, f64)>, margin: &mut f64| {
            let ext = (r + a.r).min(r + self.ri);
            *margin = margin.min(ext.abs());
            if ext > 0.0 {
                out.push((r, h));
            }
        };
        if e.abs() < 1e-11 * scale_len {
            // Fourth center in the plane of the others: mirror pairs.
            if l1.abs() < 1e-12 {
                return (out, 0.0);
            }
            let r = -l0 / l1;
            let fr = self.f(r);
            margin = margin.min(fr.abs());
            if fr > 0.0 {
                let h = fr.sqrt();
                accept(r, h, &mut out, &mut margin);
                accept(r, -h, &mut out, &mut margin);
            }
            return (out, margin);
        }
        let e2 = e * e;
        let c2 = l1 * l1 - e2 * self.f2;
        let c1 = 2.0 * l0 * l1 - e2 * self.f1;
        let c0 = l0 * l0 - e2 * self.f0;
        let roots = if c2.abs() < 1e-12 * (c1.abs() + c0.abs()).max(1.0) {
            if c1.abs() < 1e-14 {
                return (out, 0.0);
            }
            margin = margin.min(c2.abs().max(1e-300));
            vec![-c0 / c1]
        } else {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            let rel = disc / (c1 * c1 + 4.0 * (c2 * c0).abs()).max(1e-300);
            margin = margin.min(rel.abs());
            if disc < 0.0 {
                return (out, margin);
            }
            let sq = disc.sqrt();
            // Numerically stable pair of roots.
            let qv = -0.5 * (c1 + c1.signum() * sq);
            if qv == 0.0 {
                vec![0.0, 0.0]
            } else {
                vec![qv / c2, c0 / qv]
            }
        };
        for r in roots {
            let h = (l0 + l1 * r) / e;
            accept(r, h, &mut out, &mut margin);
        }
        (out, margin)
    }
}

/// Newton polish of a tangent sphere `(p, R)` against four balls.
fn polish(mut p: V3, mut r: f64, balls: &[Ball; 4]) -> (V3, f64) {
    for _ in 0..4 {
        let mut jac = [[0.0f64; 4]; 4];
        let mut rhs = [0.0f64; 4];
        for (m, b) in balls.iter().enumerate() {
            let d = sub(p, b.c);
            let len = norm(d);
            if len == 0.0 {
                return (p, r);
            }
            rhs[m] = -(len - r - b.r);
            jac[m] = [d[0] / len, d[1] / len, d[2] / len, -1.0];
        }
        let Some(step) = solve4(jac, rhs) else {
            return (p, r);
        };
        p = add(p, [step[0], step[1], step[2]]);
        r += step[3];
    }
    (p, r)
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// A hyperbolic trisector with its map parametrization: the signed excess
/// radius `t = sign(h) (R - r_o)` over the point in the plane of centers,
/// positive on the side of `(C_j - C_i) x (C_k - C_i)`.
#[derive(Clone, Copy, Debug)]
pub struct Trisector {
    frame: Frame,
    r_o: f64,
}

impl Trisector {
    pub fn new(i: &Site, j: &Site, k: &Site) -> OracleResult<Trisector> {
        if trisector_numeric(i, j, k)? != TrisectorType::Hyperbolic {
            return Err(OracleError::NotHyperbolic);
        }
        let frame = Frame::new(i.into(), j.into(), k.into())?;
        let r_o = frame.r_o();
        Ok(Trisector { frame, r_o })
    }

    pub fn sample(&self, t: f64) -> TrisectorPoint {
        let r = self.r_o + t.abs();
        let h = t.signum() * self.frame.f(r).max(0.0).sqrt();
        TrisectorPoint {
            point: self.frame.point(r, h),
            map_value: t,
        }
    }

    /// Tangent sphere radius at map value `t`.
    pub fn radius(&self, t: f64) -> f64 {
        self.r_o + t.abs()
    }

    pub fn map(&self, p: V3) -> f64 {
        let d = sub(p, self.frame.ci);
        let r = norm(d) - self.frame.ri;
        let h = dot(d, self.frame.nhat);
        h.signum() * (r - self.r_o)
    }

    /// `|p(t) - C_a| - R(t) - r_a`; negative inside the shadow of `a`.
    pub fn shadow_gap(&self, a: &Site, t: f64) -> f64 {
        let b = Ball::from(a);
        let p = self.sample(t).point;
        norm(sub(p, b.c)) - self.radius(t) - b.r
    }

    /// Map values of the trisector points whose tangent sphere also touches
    /// `a`, with their tangency orientation relative to `(i, j, k, a)`.
    pub fn vertices(&self, sites: [&Site; 3], a: &Site) -> OracleResult<Vec<(f64, Sign)>> {
        let (sols, margin) = self.frame.solve_with(a.into());
        if margin < MARGIN {
            return Err(OracleError::MarginTooSmall);
        }
        let balls = [sites[0].into(), sites[1].into(), sites[2].into(), a.into()];
        let mut out = Vec::new();
        for (r, h) in sols {
            if r < self.r_o - MARGIN {
                continue;
            }
            let (p, _) = polish(self.frame.point(r, h), r, &balls);
            out.push((self.map(p), tangency_orientation(p, &balls)?));
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        if out.windows(2).any(|w| w[1].0 - w[0].0 < MARGIN) {
            return Err(OracleError::MarginTooSmall);
        }
        Ok(out)
    }

    /// Signed distances of `a` from the plane at the negative end and the
    /// plane at the positive end.
    pub fn end_distances(&self, sites: [&Site; 3], a: &Site) -> (f64, f64) {
        let [i, j, k] = sites.map(Ball::from);
        let pj = sub(j.c, i.c);
        let pk = sub(k.c, i.c);
        let npar = plane_normal_in_plane(pj, pk, j.r - i.r, k.r - i.r);
        let s = (1.0 - dot(npar, npar)).max(0.0).sqrt();
        let b = Ball::from(a);
        let dist = |n: V3| dot(n, sub(b.c, i.c)) + i.r - b.r;
        // The plane whose inward normal points along nhat bounds the
        // tangent spheres at the negative end.
        (dist(add(npar, scale(self.frame.nhat, s))), dist(sub(npar, scale(self.frame.nhat, s))))
    }
}

pub fn trisector_sample(i: &Site, j: &Site, k: &Site, t: f64) -> OracleResult<TrisectorPoint> {
    Ok(Trisector::new(i, j, k)?.sample(t))
}

// ---------------------------------------------------------------------------
// Tangent planes and tangent spheres
// ---------------------------------------------------------------------------

/// Signs of the distances from `a` to the two common tangent planes of the
/// hyperbolic trisector `i, j, k`, negative end first.
pub fn distance_numeric(i: &Site, j: &Site, k: &Site, a: &Site) -> OracleResult<(Sign, Sign)> {
    let tri = Trisector::new(i, j, k)?;
    let (d1, d2) = tri.end_distances([i, j, k], a);
    Ok((decisive(d1)?, decisive(d2)?))
}

/// All spheres externally tangent to the four sites, each tagged with the
/// orientation of its tangency tetrahedron in argument order.
pub fn tangent_spheres_numeric(s: [&Site; 4]) -> OracleResult<Vec<(NumericSphere, Sign)>> {
    let balls: [Ball; 4] = s.map(Ball::from);
    // Use the three sites whose centers span the largest triangle.
    let triples = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let area = |t: &[usize; 3]| norm(cross(sub(balls[t[1]].c, balls[t[0]].c), sub(balls[t[2]].c, balls[t[0]].c)));
    let best = triples
        .iter()
        .max_by(|x, y| area(x).total_cmp(&area(y)))
        .copied()
        .unwrap_or([0, 1, 2]);
    let rest = (0..4).find(|n| !best.contains(n)).unwrap_or(3);
    let frame = Frame::new(balls[best[0]], balls[best[1]], balls[best[2]])?;
    let (sols, margin) = frame.solve_with(balls[rest]);
    if margin < MARGIN {
        return Err(OracleError::MarginTooSmall);
    }
    let mut out = Vec::new();
    for (r, h) in sols {
        if frame.f(r) < -MARGIN {
            continue;
        }
        let (p, r) = polish(frame.point(r, h), r, &balls);
        let residual = balls
            .iter()
            .map(|b| (norm(sub(p, b.c)) - r - b.r).abs())
            .fold(0.0, f64::max);
        if residual > 1e-7 {
            return Err(OracleError::NoConvergence);
        }
        out.push((NumericSphere { center: p, radius: r }, tangency_orientation(p, &balls)?));
    }
    Ok(out)
}

pub fn existence_numeric(s: [&Site; 4]) -> OracleResult<ExistenceCount> {
    Ok(match tangent_spheres_numeric(s)?.len() {
        0 => ExistenceCount::Zero,
        1 => ExistenceCount::One,
        _ => ExistenceCount::Two,
    })
}

/// Sign of the conflict of `q` with the tangent sphere of `s` whose
/// tangency tetrahedron is positively oriented; `None` when no such sphere
/// exists.
pub fn insphere_numeric(s: [&Site; 4], q: &Site) -> OracleResult<Option<Sign>> {
    let spheres = tangent_spheres_numeric(s)?;
    let Some((sphere, _)) = spheres.iter().find(|(_, o)| *o == Sign::Pos) else {
        return Ok(None);
    };
    let b = Ball::from(q);
    let gap = norm(sub(b.c, sphere.center)) - sphere.radius - b.r;
    Ok(Some(decisive(gap)?))
}

// ---------------------------------------------------------------------------
// Shadows, orders and edge conflicts
// ---------------------------------------------------------------------------

/// Shadow type and finite endpoints (map values) of `a` on the trisector.
pub fn shadow_classify_numeric(i: &Site, j: &Site, k: &Site, a: &Site) -> OracleResult<(ShadowType, Vec<f64>)> {
    let tri = Trisector::new(i, j, k)?;
    let ends: Vec<f64> = tri.vertices([i, j, k], a)?.into_iter().map(|v| v.0).collect();
    let (d1, d2) = tri.end_distances([i, j, k], a);
    let left_in = decisive(d1)? == Sign::Neg;
    let right_in = decisive(d2)? == Sign::Neg;
    // Membership on each open piece between consecutive endpoints.
    let mut pieces = vec![left_in];
    for w in ends.windows(2) {
        let gap = tri.shadow_gap(a, 0.5 * (w[0] + w[1]));
        pieces.push(decisive(gap)? == Sign::Neg);
    }
    if !ends.is_empty() {
        pieces.push(right_in);
    }
    if pieces.windows(2).any(|w| w[0] == w[1]) || (ends.is_empty() && left_in != right_in) {
        // Every endpoint must switch membership.
        return Err(OracleError::MarginTooSmall);
    }
    use ShadowType::*;
    let ty = match (ends.len(), left_in) {
        (0, true) => Full,
        (0, false) => Empty,
        (1, true) => LeftRay,
        (1, false) => RightRay,
        (2, false) => Interval,
        (2, true) => TwoRays,
        _ => return Err(OracleError::NoConvergence),
    };
    Ok((ty, ends))
}

/// Map values of every existing vertex of `a` and `b` on the trisector,
/// sorted, with their labels. Pairs closer than `gap` are rejected.
pub fn order_numeric(i: &Site, j: &Site, k: &Site, a: &Site, b: &Site, gap: f64) -> OracleResult<Vec<VertexLabel>> {
    let tri = Trisector::new(i, j, k)?;
    let mut all: Vec<(f64, VertexLabel)> = Vec::new();
    for (site, name) in [(a, 'a'), (b, 'b')] {
        for (t, o) in tri.vertices([i, j, k], site)? {
            let orientation = if o == Sign::Pos { Orientation::Ijk } else { Orientation::Ikj };
            all.push((t, VertexLabel::new(orientation, name)));
        }
    }
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    if all.windows(2).any(|w| w[1].0 - w[0].0 < gap) {
        return Err(OracleError::MarginTooSmall);
    }
    Ok(all.into_iter().map(|x| x.1).collect())
}

/// Map values of the edge endpoints `v_ijkl` and `v_ikjm`, checked to exist
/// and to be in increasing order.
pub fn edge_interval_numeric(edge: &EdgeSpec) -> OracleResult<(f64, f64)> {
    let tri = Trisector::new(&edge.i, &edge.j, &edge.k)?;
    let sites = [&edge.i, &edge.j, &edge.k];
    let find = |site: &Site, want: Sign| -> OracleResult<Option<f64>> {
        Ok(tri.vertices(sites, site)?.into_iter().find(|v| v.1 == want).map(|v| v.0))
    };
    let lambda = find(&edge.l, Sign::Pos)?;
    let mu = find(&edge.m, Sign::Neg)?;
    match (lambda, mu) {
        (Some(l), Some(m)) if m - l > MARGIN => Ok((l, m)),
        (Some(l), Some(m)) if (m - l).abs() <= MARGIN => Err(OracleError::MarginTooSmall),
        _ => Err(OracleError::InvalidEdge),
    }
}

/// Type of the intersection of the edge with the shadow of `q`, computed on
/// the map line.
pub fn edge_conflict_numeric(edge: &EdgeSpec, q: &Site) -> OracleResult<EdgeConflictKind> {
    let (lo, hi) = edge_interval_numeric(edge)?;
    let (_, ends) = shadow_classify_numeric(&edge.i, &edge.j, &edge.k, q)?;
    if ends.iter().any(|&e| (e - lo).abs() < MARGIN || (e - hi).abs() < MARGIN) {
        return Err(OracleError::MarginTooSmall);
    }
    let tri = Trisector::new(&edge.i, &edge.j, &edge.k)?;
    // Cut the edge at the shadow endpoints inside it and test each piece.
    let mut cuts = vec![lo];
    cuts.extend(ends.iter().copied().filter(|&e| e > lo && e < hi));
    cuts.push(hi);
    let mut inside = Vec::new();
    for w in cuts.windows(2) {
        let gap = tri.shadow_gap(q, 0.5 * (w[0] + w[1]));
        inside.push(decisive(gap)? == Sign::Neg);
    }
    Ok(EdgeConflictKind::from_pieces(&inside))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn s(x: i64, y: i64, z: i64, r: i64) -> Site {
        Site::from_ints(x, y, z, r)
    }

    fn fix_h() -> [Site; 3] {
        [s(0, 0, 0, 1), s(4, 0, 0, 1), s(2, 4, 0, 1)]
    }

    /// Map value of the FIX-H trisector point at height `z`.
    fn fix_h_map(z: f64) -> f64 {
        z.signum() * ((6.25 + z * z).sqrt() - 2.5)
    }

    #[test]
    fn fix_h_sampling() {
        let [i, j, k] = fix_h();
        let p = trisector_sample(&i, &j, &k, 0.0).unwrap().point;
        assert!((p[0] - 2.0).abs() < 1e-12 && (p[1] - 1.5).abs() < 1e-12 && p[2].abs() < 1e-12);
        let tri = Trisector::new(&i, &j, &k).unwrap();
        for t in [-7.5, -1.0, 0.25, 3.0, 40.0] {
            let p = tri.sample(t);
            assert_eq!(p.point[2] > 0.0, t > 0.0);
            assert!((tri.map(p.point) - t).abs() < 1e-9);
            let d: Vec<f64> = [&i, &j, &k].iter().map(|s| norm(sub(p.point, Ball::from(*s).c)) - 1.0).collect();
            assert!((d[0] - d[1]).abs() < 1e-9 && (d[0] - d[2]).abs() < 1e-9);
            assert!((fix_h_map(p.point[2]) - t).abs() < 1e-9);
        }
    }

    #[test]
    fn fix_h_shadows() {
        let [i, j, k] = fix_h();
        let (ty, ends) = shadow_classify_numeric(&i, &j, &k, &s(2, 1, 5, 1)).unwrap();
        assert_eq!(ty, ShadowType::RightRay);
        assert!((ends[0] - fix_h_map(1.9)).abs() < 1e-9);
        let a = Site::new([int(2), int(1), int(0)], rat(1, 2));
        let (ty, ends) = shadow_classify_numeric(&i, &j, &k, &a).unwrap();
        assert_eq!(ty, ShadowType::Interval);
        let z = (525.0f64 / 16.0).sqrt();
        assert!((ends[0] - fix_h_map(-z)).abs() < 1e-9 && (ends[1] - fix_h_map(z)).abs() < 1e-9);
        // Touches both limiting planes, so the guard rejects it.
        assert_eq!(
            shadow_classify_numeric(&i, &j, &k, &s(100, 100, 0, 1)),
            Err(OracleError::MarginTooSmall)
        );
        let far = Site::new([int(100), int(100), int(0)], rat(1, 2));
        assert_eq!(shadow_classify_numeric(&i, &j, &k, &far).unwrap(), (ShadowType::Empty, vec![]));
    }

    #[test]
    fn fix_t_tangent_sphere() {
        // i, j, k, a with i = (2,0,0), j = (0,2,0), k = (-2,0,0).
        let q = [s(2, 0, 0, 1), s(0, 2, 0, 1), s(-2, 0, 0, 1), s(0, 0, 2, 1)];
        let found = tangent_spheres_numeric([&q[0], &q[1], &q[2], &q[3]]).unwrap();
        assert_eq!(found.len(), 1);
        let (sp, o) = found[0];
        assert!(norm(sp.center) < 1e-9 && (sp.radius - 1.0).abs() < 1e-9);
        assert_eq!(o, Sign::Neg);
        let swapped = tangent_spheres_numeric([&q[0], &q[2], &q[1], &q[3]]).unwrap();
        assert_eq!(swapped[0].1, Sign::Pos);
    }

    #[test]
    fn fix_h_two_spheres_opposite_orientation() {
        let [i, j, k] = fix_h();
        let a = Site::new([int(2), int(1), int(0)], rat(1, 2));
        let found = tangent_spheres_numeric([&i, &j, &k, &a]).unwrap();
        let mut o: Vec<Sign> = found.iter().map(|f| f.1).collect();
        o.sort();
        assert_eq!(o, vec![Sign::Neg, Sign::Pos]);
        assert!(tangent_spheres_numeric([&i, &j, &k, &s(100, 100, 0, 1)]).map_or(true, |v| v.is_empty()));
    }

    #[test]
    fn incone_and_trisector_references() {
        let [a, b, _] = fix_h();
        let half = |x: i64, y: i64, r: (i64, i64)| Site::new([int(x), rat(y, 2), int(0)], rat(r.0, r.1));
        assert_eq!(incone_numeric(&a, &b, &half(2, 0, (1, 2))), Ok(InConeResult::Inside));
        assert_eq!(incone_numeric(&a, &b, &s(2, 3, 0, 1)), Ok(InConeResult::Outside));
        assert_eq!(trisector_numeric(&a, &b, &half(2, 1, (1, 4))), Ok(TrisectorType::Elliptic));
        let [i, j, k] = fix_h();
        assert_eq!(trisector_numeric(&i, &j, &k), Ok(TrisectorType::Hyperbolic));
    }
}
