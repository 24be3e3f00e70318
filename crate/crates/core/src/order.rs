//! Order of the Apollonius vertices of two sites `a`, `b` along a hyperbolic
//! trisector.
//!
//! A site whose shadow is an interval `(chi, phi)` or a right ray
//! `(chi, +inf)` is classic; its vertices are `v_ikjn` at `chi` and
//! `v_ijkn` at `phi`. A left ray or a pair of rays is the complement of a
//! classic shadow and is handled through its equivalent sphere: the same
//! vertices with the orientation part of their names exchanged and every
//! conflict sign involving that site negated. Once both sites are classic
//! the order follows from InSphere signs, with a few orientation tests to
//! separate two disjoint intervals.

use std::fmt;

use crate::base::{shadow, trisector_type, ShadowType, TrisectorType};
use crate::error::{GeomError, GeomResult};
use crate::insphere::{insphere, Orientation, VertexLabel};
use crate::kernel::{audit, det3, det4, DegreeTagged, Sign};
use crate::sites::{reduce, Site};

use Orientation::{Ijk, Ikj};

/// Existing vertices in increasing trisector order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordering(pub Vec<VertexLabel>);

impl Ordering {
    pub fn labels(&self) -> &[VertexLabel] {
        &self.0
    }

    pub fn position(&self, label: VertexLabel) -> Option<usize> {
        self.0.iter().position(|l| *l == label)
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&names.join(","))
    }
}

/// Which table produced an ordering, with the 1-based row number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderCase {
    /// Both sites bounded by two vertices.
    A(u8),
    /// Both sites with a single vertex.
    B(u8),
    /// First site bounded by two vertices, second by one.
    C(u8),
    /// First site with one vertex, second bounded by two.
    D(u8),
    /// At most one of the sites has vertices on the trisector.
    Trivial,
}

impl fmt::Display for OrderCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderCase::A(n) => write!(f, "A{n}"),
            OrderCase::B(n) => write!(f, "B{n}"),
            OrderCase::C(n) => write!(f, "C{n}"),
            OrderCase::D(n) => write!(f, "D{n}"),
            OrderCase::Trivial => f.write_str("T"),
        }
    }
}

/// How an ordering was decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTrace {
    pub case: OrderCase,
    /// Set when the orientation tie-break separated two disjoint intervals.
    pub tie_break: bool,
    /// Whether each of `a`, `b` was replaced by its equivalent sphere.
    pub flipped: [bool; 2],
    /// The InSphere signs looked up in the table, in table column order.
    pub q: Vec<Sign>,
}

/// A vertex in a table: orientation part and slot (0 for the first site of
/// the table, 1 for the second).
type Entry = (Orientation, usize);

const P: Sign = Sign::Pos;
const N: Sign = Sign::Neg;

/// Signs `(IS(ikj,b;a), IS(ijk,b;a), IS(ikj,a;b), IS(ijk,a;b))`, where
/// `IS(o,x;y)` is the conflict of `y` with `v_{o x}`.
const CASE_A: [([Sign; 4], [Entry; 4]); 6] = [
    ([P, P, P, P], [(Ikj, 0), (Ijk, 0), (Ikj, 1), (Ijk, 1)]),
    ([N, P, P, N], [(Ikj, 0), (Ikj, 1), (Ijk, 0), (Ijk, 1)]),
    ([P, P, N, N], [(Ikj, 1), (Ikj, 0), (Ijk, 0), (Ijk, 1)]),
    ([P, N, N, P], [(Ikj, 1), (Ikj, 0), (Ijk, 1), (Ijk, 0)]),
    ([P, P, P, P], [(Ikj, 1), (Ijk, 1), (Ikj, 0), (Ijk, 0)]),
    ([N, N, P, P], [(Ikj, 0), (Ikj, 1), (Ijk, 1), (Ijk, 0)]),
];

/// Sign `IS(ikj,a;b)`.
const CASE_B: [(Sign, [Entry; 2]); 2] = [(P, [(Ikj, 0), (Ikj, 1)]), (N, [(Ikj, 1), (Ikj, 0)])];

/// Signs `(IS(ikj,b;a), IS(ikj,a;b), IS(ijk,a;b))` with `a` bounded by two
/// vertices and `b` by one.
const CASE_C: [([Sign; 3], [Entry; 3]); 3] = [
    ([P, P, P], [(Ikj, 0), (Ijk, 0), (Ikj, 1)]),
    ([N, P, N], [(Ikj, 0), (Ikj, 1), (Ijk, 0)]),
    ([P, N, N], [(Ikj, 1), (Ikj, 0), (Ijk, 0)]),
];

/// A site seen through its equivalent sphere when `flipped`.
#[derive(Clone, Copy)]
struct Virtual<'a> {
    site: &'a Site,
    name: char,
    flipped: bool,
    /// Number of vertices on the trisector (after flipping: 2 for an
    /// interval, 1 for a right ray).
    count: usize,
}

struct Context<'a> {
    i: &'a Site,
    j: &'a Site,
    k: &'a Site,
}

impl<'a> Context<'a> {
    /// `IS(o, v; q)`: conflict sign of `q` with the vertex `v_{o v}`.
    fn is(&self, o: Orientation, v: &Virtual, q: &Virtual) -> GeomResult<Sign> {
        let o = if v.flipped { o.flip() } else { o };
        let s = match o {
            Ijk => insphere(self.i, self.j, self.k, v.site, q.site)?,
            Ikj => insphere(self.i, self.k, self.j, v.site, q.site)?,
        };
        let s = if q.flipped { -s } else { s };
        if s.is_zero() {
            return Err(GeomError::DegenerateOrder);
        }
        Ok(s)
    }

    /// Separates two disjoint intervals: `true` when the first one comes
    /// first. Works with coordinates barred at `k`, the site of minimum
    /// radius among `i, j, k`.
    fn first_interval_first(&self, x: &Virtual, y: &Virtual) -> GeomResult<bool> {
        let reduce_at_k = |s: &Site, flipped: bool| -> GeomResult<([DegreeTagged; 3], DegreeTagged)> {
            let r = reduce(s, self.k, 0).map_err(|_| GeomError::DegenerateOrder)?;
            Ok(if flipped { (r.cbar.map(|c| -&c), -&r.pbar) } else { (r.cbar, r.pbar) })
        };
        let (ci, pi) = reduce_at_k(self.i, false)?;
        let (cj, pj) = reduce_at_k(self.j, false)?;
        let (cx, px) = reduce_at_k(x.site, x.flipped)?;
        let (cy, py) = reduce_at_k(y.site, y.flipped)?;
        // Side of each site with respect to the plane of the centers.
        let o1 = det3(&[cx.clone(), ci.clone(), cj.clone()]).sign_tagged(audit::ORDER_ORIENT);
        let o2 = det3(&[cy.clone(), ci.clone(), cj.clone()]).sign_tagged(audit::ORDER_ORIENT);
        if o1.is_zero() && o2.is_zero() {
            return Err(GeomError::DegenerateOrder);
        }
        if (o1 * o2).is_pos() {
            let row = |c: &[DegreeTagged; 3], p: &DegreeTagged| [c[0].clone(), c[1].clone(), c[2].clone(), p.clone()];
            let o3 = det4(&[row(&cy, &py), row(&ci, &pi), row(&cj, &pj), row(&cx, &px)]).sign_tagged(audit::ORDER_ORIENT);
            if o3.is_zero() {
                return Err(GeomError::DegenerateOrder);
            }
            return Ok(o3.is_neg());
        }
        Ok(o1 < o2)
    }
}

fn classify(site: &Site, name: char, t: ShadowType) -> Virtual<'_> {
    let (flipped, count) = match t {
        ShadowType::Interval => (false, 2),
        ShadowType::RightRay => (false, 1),
        ShadowType::TwoRays => (true, 2),
        ShadowType::LeftRay => (true, 1),
        ShadowType::Empty | ShadowType::Full => (false, 0),
    };
    Virtual { site, name, flipped, count }
}

/// Vertices of a single site in increasing order.
fn single(v: &Virtual) -> Vec<VertexLabel> {
    let entries: &[Orientation] = match v.count {
        2 => &[Ikj, Ijk],
        1 => &[Ikj],
        _ => &[],
    };
    entries.iter().map(|&o| label(o, v)).collect()
}

fn label(o: Orientation, v: &Virtual) -> VertexLabel {
    VertexLabel::new(if v.flipped { o.flip() } else { o }, v.name)
}

/// Order of all existing vertices of `a` and `b` on the trisector of
/// `i, j, k`. Labels use the names `a` and `b`.
pub fn order(i: &Site, j: &Site, k: &Site, a: &Site, b: &Site) -> GeomResult<Ordering> {
    order_traced(i, j, k, a, b).map(|r| r.0)
}

pub fn order_traced(i: &Site, j: &Site, k: &Site, a: &Site, b: &Site) -> GeomResult<(Ordering, OrderTrace)> {
    order_named(i, j, k, (a, 'a'), (b, 'b'))
}

/// Same as [`order_traced`] with caller-chosen names for the two sites.
pub fn order_named(i: &Site, j: &Site, k: &Site, a: (&Site, char), b: (&Site, char)) -> GeomResult<(Ordering, OrderTrace)> {
    if trisector_type(i, j, k)? != TrisectorType::Hyperbolic {
        return Err(GeomError::NotHyperbolic);
    }
    // A cyclic shift keeps the trisector and every vertex name; put the
    // smallest site last so it can serve as the inversion pole.
    let ring = [i, j, k];
    let smallest = (0..3).min_by(|&x, &y| ring[x].radius.cmp(&ring[y].radius).then(x.cmp(&y))).unwrap_or(2);
    let shift = (smallest + 1) % 3;
    let ctx = Context {
        i: ring[shift],
        j: ring[(shift + 1) % 3],
        k: ring[(shift + 2) % 3],
    };

    let va = classify(a.0, a.1, shadow(ctx.i, ctx.j, ctx.k, a.0)?);
    let vb = classify(b.0, b.1, shadow(ctx.i, ctx.j, ctx.k, b.0)?);
    let mut trace = OrderTrace {
        case: OrderCase::Trivial,
        tie_break: false,
        flipped: [va.flipped, vb.flipped],
        q: Vec::new(),
    };
    let sites = [va, vb];
    let emit = |entries: &[Entry], slots: [usize; 2]| -> Ordering {
        Ordering(entries.iter().map(|&(o, s)| label(o, &sites[slots[s]])).collect())
    };

    let labels = match (va.count, vb.count) {
        (0, _) => Ordering(single(&vb)),
        (_, 0) => Ordering(single(&va)),
        (2, 2) => {
            let q = [
                ctx.is(Ikj, &vb, &va)?,
                ctx.is(Ijk, &vb, &va)?,
                ctx.is(Ikj, &va, &vb)?,
                ctx.is(Ijk, &va, &vb)?,
            ];
            trace.q = q.to_vec();
            let row = if q == [P, P, P, P] {
                trace.tie_break = true;
                if ctx.first_interval_first(&va, &vb)? {
                    0
                } else {
                    4
                }
            } else {
                CASE_A.iter().position(|r| r.0 == q).ok_or(GeomError::DegenerateOrder)?
            };
            trace.case = OrderCase::A(row as u8 + 1);
            emit(&CASE_A[row].1, [0, 1])
        }
        (1, 1) => {
            let q = ctx.is(Ikj, &va, &vb)?;
            trace.q = vec![q];
            let row = CASE_B.iter().position(|r| r.0 == q).ok_or(GeomError::DegenerateOrder)?;
            trace.case = OrderCase::B(row as u8 + 1);
            emit(&CASE_B[row].1, [0, 1])
        }
        (2, 1) | (1, 2) => {
            let (x, y, slots) = if va.count == 2 { (&va, &vb, [0, 1]) } else { (&vb, &va, [1, 0]) };
            let q = [ctx.is(Ikj, y, x)?, ctx.is(Ikj, x, y)?, ctx.is(Ijk, x, y)?];
            trace.q = q.to_vec();
            let row = CASE_C.iter().position(|r| r.0 == q).ok_or(GeomError::DegenerateOrder)?;
            trace.case = if va.count == 2 {
                OrderCase::C(row as u8 + 1)
            } else {
                OrderCase::D(row as u8 + 1)
            };
            emit(&CASE_C[row].1, slots)
        }
        _ => return Err(GeomError::DegenerateOrder),
    };
    Ok((labels, trace))
}
