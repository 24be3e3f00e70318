//! Conflict of a query sphere with a designated Apollonius vertex.
//!
//! The four defining sites are reduced against the one of minimum radius and
//! inverted, which turns the tangent spheres into the planes
//! `n . cbar_m + d pbar_m = rbar_m` with `|n| = 1` and `d > 0`. The two
//! candidate planes live in the quadratic extension by `sqrt(Delta)`; the
//! orientation of the tangency tetrahedron picks one of them, and the query
//! is tested against it with one more sign in the same extension.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{GeomError, GeomResult};
use crate::kernel::{dot, norm2, vsub, DegreeTagged, QuadExtScalar, Rational, Sign, Vec3};
use crate::sites::{check_sites, reduce_and_invert, select_pole, BarredTriple, InvertedSite, Site};

token_enum! {
    /// Orientation part of a vertex name: `Ijk` when the tangency
    /// tetrahedron `T_i T_j T_k T_n` is positively oriented.
    pub enum Orientation {
        Ijk => "IJK",
        Ikj => "IKJ",
    }
}

impl Orientation {
    pub fn from_sign(s: Sign) -> Orientation {
        if s.is_neg() {
            Orientation::Ikj
        } else {
            Orientation::Ijk
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            Orientation::Ijk => Sign::Pos,
            Orientation::Ikj => Sign::Neg,
        }
    }

    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Ijk => Orientation::Ikj,
            Orientation::Ikj => Orientation::Ijk,
        }
    }
}

/// Name of an Apollonius vertex on the trisector of `i, j, k`: its
/// orientation and the name of its fourth site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub orientation: Orientation,
    pub site: char,
}

impl VertexLabel {
    pub fn new(orientation: Orientation, site: char) -> Self {
        VertexLabel { orientation, site }
    }

    /// Parses names such as `ikja`.
    pub fn parse(s: &str) -> Option<VertexLabel> {
        let mut chars = s.chars();
        let orientation = match chars.by_ref().take(3).collect::<String>().as_str() {
            "ijk" => Orientation::Ijk,
            "ikj" => Orientation::Ikj,
            _ => return None,
        };
        let site = chars.next()?;
        chars.next().is_none().then_some(VertexLabel { orientation, site })
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Ijk => "ijk",
            Orientation::Ikj => "ikj",
        };
        write!(f, "{o}{}", self.site)
    }
}

/// A tangent plane `a u + b v + c w + d = 0` of three inverted sites, with
/// coordinates in the quadratic extension of the instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentPlaneW {
    pub a: QuadExtScalar,
    pub b: QuadExtScalar,
    pub c: QuadExtScalar,
    pub d: QuadExtScalar,
}

impl TangentPlaneW {
    pub fn normal(&self) -> [&QuadExtScalar; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `n . cbar + d pbar - rbar` for a reduced site, zero exactly when the
    /// inverted site touches the plane from its positive side.
    pub fn residual(&self, site: &InvertedSite) -> QuadExtScalar {
        let disc = self.d.disc.clone();
        let lift = |x: &DegreeTagged| QuadExtScalar::rational(x.clone(), disc.clone());
        let mut acc = &self.d * &lift(&site.pbar);
        for (n, c) in self.normal().into_iter().zip(&site.cbar) {
            acc = &acc + &(n * &lift(c));
        }
        &acc - &lift(&site.rbar)
    }
}

/// The two candidate planes of a quadruple in one of two normal forms.
enum System {
    /// Barred centers independent: `n = (A - d B) / E` and
    /// `d = (A.B + tau |E| sqrt(Delta)) / |B|^2`.
    General {
        e: DegreeTagged,
        a: Vec3,
        b: Vec3,
        b2: DegreeTagged,
        ab: DegreeTagged,
        m0: DegreeTagged,
    },
    /// Barred centers coplanar, axes permuted so that `B_z != 0`:
    /// `d = A_z / B_z` and `n = (W + sigma B) / B_z` with
    /// `sigma = (-W.B + tau |B_z| sqrt(Delta)) / |B|^2`.
    Coplanar {
        perm: [usize; 3],
        a: Vec3,
        b: Vec3,
        w: Vec3,
        b2: DegreeTagged,
        wb: DegreeTagged,
    },
}

/// Four defining sites prepared against their pole.
struct Quadruple<'a> {
    sites: [&'a Site; 4],
    pole: usize,
    delta: DegreeTagged,
    system: System,
}

impl<'a> Quadruple<'a> {
    fn new(sites: [&'a Site; 4]) -> GeomResult<Self> {
        check_sites(&sites)?;
        let pole = select_pole(&sites);
        let rows = reduce_and_invert(&sites, pole)?;
        let t = BarredTriple::new(&rows);
        let e = t.e();
        if !e.sign().is_zero() {
            let (a, b) = (t.a(), t.b());
            let b2 = norm2(&b);
            let delta = &b2 - &norm2(&t.c());
            let m0 = &norm2(&a) - &e.square();
            return Ok(Quadruple {
                sites,
                pole,
                delta,
                system: System::General {
                    ab: dot(&a, &b),
                    e,
                    a,
                    b,
                    b2,
                    m0,
                },
            });
        }
        let b = t.b();
        let Some(axis) = (0..3).find(|&k| !b[k].sign().is_zero()) else {
            let a = t.a();
            let c = t.c();
            let flat = a.iter().chain(c.iter()).all(|v| v.sign().is_zero());
            return Err(if flat { GeomError::InfinitelyMany } else { GeomError::VertexNotFound });
        };
        let perm = [(axis + 1) % 3, (axis + 2) % 3, axis];
        let t = t.rotate_axis_last(axis);
        let (a, b, c) = (t.a(), t.b(), t.c());
        let w = [-&c[1], c[0].clone(), DegreeTagged::zero()];
        let b2 = norm2(&b);
        let delta = &b2 - &norm2(&c);
        Ok(Quadruple {
            sites,
            pole,
            delta,
            system: System::Coplanar {
                perm,
                wb: dot(&w, &b),
                a,
                b,
                w,
                b2,
            },
        })
    }

    /// Root selector giving the tangency orientation `want` in argument
    /// order, or `None` when that plane does not exist.
    ///
    /// With the pole at 1-based position `pi`, the reduced tangency
    /// points satisfy `Orient3D(T_1..T_4) = (-1)^(pi+1) sign(n . B)`, and
    /// `n . B` is `-tau sign(E) sqrt(Delta)` in the general form and
    /// `tau sign(B_z) sqrt(Delta)` in the coplanar one.
    fn root(&self, want: Sign) -> GeomResult<Option<Sign>> {
        match self.delta.sign() {
            Sign::Neg => return Ok(None),
            Sign::Zero => {
                return if self.d_sign_double().is_pos() {
                    Err(GeomError::DegenerateDouble)
                } else {
                    Ok(None)
                };
            }
            Sign::Pos => {}
        }
        let parity = Sign::parity(self.pole + 1);
        let tau = match &self.system {
            System::General { e, .. } => parity * e.sign() * want,
            System::Coplanar { b, .. } => -parity * b[2].sign() * want,
        };
        Ok(self.d_sign(tau).is_pos().then_some(tau))
    }

    /// Sign of `d` for the root `tau`, with `Delta > 0`.
    fn d_sign(&self, tau: Sign) -> Sign {
        match &self.system {
            System::General { ab, m0, .. } => {
                let sa = ab.sign();
                let sb = tau;
                // (A.B)^2 - E^2 Delta = |B|^2 M0
                crate::kernel::combine_signs(sa, sb, || m0.sign())
            }
            System::Coplanar { a, b, .. } => a[2].sign() * b[2].sign(),
        }
    }

    /// Sign of `d` at a double root.
    fn d_sign_double(&self) -> Sign {
        match &self.system {
            System::General { ab, .. } => ab.sign(),
            System::Coplanar { a, b, .. } => a[2].sign() * b[2].sign(),
        }
    }

    /// Sign of the conflict of `q` with the sphere of root `tau`.
    fn conflict(&self, tau: Sign, q: &Site) -> Sign {
        let pole = self.sites[self.pole];
        let cbar = vsub(&q.c(), &pole.c());
        let rq = &(&q.r() - &pole.r());
        let pq = &(&dot(&cbar, &cbar) - &rq.square());
        let cq = match &self.system {
            System::General { .. } => cbar,
            System::Coplanar { perm, .. } => perm.map(|k| cbar[k].clone()),
        };
        let delta = &self.delta;
        if rq.sign().is_neg() && self.reach_sign(tau, rq).is_neg() {
            // The query is smaller than the tangent sphere is negative.
            return Sign::Pos;
        }
        match &self.system {
            System::General { e, a, b, b2, ab, m0 } => {
                let f0 = &dot(a, &cq) - &(e * rq);
                let f1 = &(e * pq) - &dot(b, &cq);
                let alpha = &(b2 * &f0) + &(ab * &f1);
                let beta = (e.signed(e.sign()) * &f1).signed(tau);
                let x = QuadExtScalar::new(alpha, beta, delta.clone());
                let s = x.sign_given_norm(|| {
                    let two = DegreeTagged::from_int(2);
                    crate::kernel::sum(&[&(b2 * &f0) * &f0, &(&(&two * ab) * &f0) * &f1, &(m0 * &f1) * &f1]).sign()
                });
                e.sign() * s
            }
            System::Coplanar { a, b, w, b2, wb, .. } => {
                let h0 = crate::kernel::sum(&[dot(w, &cq), &a[2] * pq, -&(&b[2] * rq)]);
                let h1 = dot(b, &cq);
                let alpha = &(b2 * &h0) - &(wb * &h1);
                let bz_abs = b[2].signed(b[2].sign());
                let beta = (&bz_abs * &h1).signed(tau);
                let x = QuadExtScalar::new(alpha, beta, delta.clone());
                let s = x.sign_given_norm(|| {
                    let two = DegreeTagged::from_int(2);
                    let w_coef = &norm2(w) - &b[2].square();
                    crate::kernel::sum(&[
                        &(b2 * &h0) * &h0,
                        -&(&(&(&two * wb) * &h0) * &h1),
                        &(&w_coef * &h1) * &h1,
                    ])
                    .sign()
                });
                b[2].sign() * s
            }
        }
    }

    /// Sign of `R' + rq`, where `R' = 1 / (2 d)` is the reduced radius of the
    /// tangent sphere of root `tau`.
    fn reach_sign(&self, tau: Sign, rq: &DegreeTagged) -> Sign {
        let two = DegreeTagged::from_int(2);
        match &self.system {
            System::General { e, b2, ab, m0, .. } => {
                // |B|^2 (1 + 2 d rq) = |B|^2 + 2 rq A.B + 2 tau rq |E| sqrt(Delta)
                let alpha = b2 + &(&(&two * rq) * ab);
                let beta = (&(&two * rq) * &e.signed(e.sign())).signed(tau);
                let x = QuadExtScalar::new(alpha, beta, self.delta.clone());
                x.sign_given_norm(|| {
                    let four = DegreeTagged::from_int(4);
                    crate::kernel::sum(&[b2.clone(), &(&four * rq) * ab, &(&(&four * rq) * rq) * m0]).sign()
                })
            }
            System::Coplanar { a, b, .. } => b[2].sign() * (&b[2] + &(&(&two * &a[2]) * rq)).sign(),
        }
    }

    /// The plane of root `tau` written out in the extension.
    fn plane(&self, tau: Sign) -> TangentPlaneW {
        let disc = self.delta.clone();
        let q = |a: &Rational, b: &Rational| {
            QuadExtScalar::new(DegreeTagged::new(a.clone(), 0), DegreeTagged::new(b.clone(), 0), disc.clone())
        };
        let t = Rational::from_integer(tau.as_i32().into());
        match &self.system {
            System::General { e, a, b, b2, ab, .. } => {
                let (e, b2, ab) = (e.value(), b2.value(), ab.value());
                let d0 = ab / b2;
                let d1 = &t * num_traits::Signed::abs(e) / b2;
                let n = |k: usize| {
                    let (ak, bk) = (a[k].value(), b[k].value());
                    q(&((ak - &d0 * bk) / e), &(-(&d1 * bk) / e))
                };
                TangentPlaneW {
                    a: n(0),
                    b: n(1),
                    c: n(2),
                    d: q(&d0, &d1),
                }
            }
            System::Coplanar { perm, a, b, w, b2, wb } => {
                let (bz, b2, wb) = (b[2].value(), b2.value(), wb.value());
                let s0 = -wb / b2;
                let s1 = &t * num_traits::Signed::abs(bz) / b2;
                let mut n: [Option<QuadExtScalar>; 3] = [None, None, None];
                for k in 0..3 {
                    let (wk, bk) = (w[k].value(), b[k].value());
                    n[perm[k]] = Some(q(&((wk + &s0 * bk) / bz), &(&s1 * bk / bz)));
                }
                let [na, nb, nc] = n.map(|x| x.expect("axis permutation covers every axis"));
                TangentPlaneW {
                    a: na,
                    b: nb,
                    c: nc,
                    d: q(&(a[2].value() / bz), &Rational::from_integer(0.into())),
                }
            }
        }
    }
}

/// Sign of the conflict of `q` with the Apollonius vertex of `s1..s4` whose
/// tangency tetrahedron `(T_1, T_2, T_3, T_4)` is positively oriented:
/// negative when `q` intersects the tangent sphere, zero when it touches it.
pub fn insphere(s1: &Site, s2: &Site, s3: &Site, s4: &Site, q: &Site) -> GeomResult<Sign> {
    let quad = Quadruple::new([s1, s2, s3, s4])?;
    let pole = quad.sites[quad.pole];
    if reduce_query_power(q, pole).sign().is_zero() {
        return Err(GeomError::PoleDegeneracy);
    }
    let tau = quad.root(Sign::Pos)?.ok_or(GeomError::VertexNotFound)?;
    Ok(quad.conflict(tau, q))
}

fn reduce_query_power(q: &Site, pole: &Site) -> DegreeTagged {
    let cbar = vsub(&q.c(), &pole.c());
    let rbar = &q.r() - &pole.r();
    &dot(&cbar, &cbar) - &rbar.square()
}

/// The admissible tangent planes of `s1..s4` keyed by the orientation of
/// their tangency tetrahedron in argument order, with `s4` as the fourth
/// site of the label.
pub fn classify_tangent_planes(s1: &Site, s2: &Site, s3: &Site, s4: &Site) -> GeomResult<BTreeMap<Orientation, TangentPlaneW>> {
    let quad = Quadruple::new([s1, s2, s3, s4])?;
    let mut out = BTreeMap::new();
    for o in Orientation::ALL {
        if let Some(tau) = quad.root(o.sign())? {
            out.insert(*o, quad.plane(tau));
        }
    }
    Ok(out)
}

/// The inverted non-pole sites of a quadruple, for residual checks.
pub fn inverted_rows(s1: &Site, s2: &Site, s3: &Site, s4: &Site) -> GeomResult<Vec<InvertedSite>> {
    let sites = [s1, s2, s3, s4];
    reduce_and_invert(&sites, select_pole(&sites))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{audit, int, rat};

    fn s(x: i64, y: i64, z: i64, r: i64) -> Site {
        Site::from_ints(x, y, z, r)
    }

    fn fix_t() -> [Site; 4] {
        // i, k, j, a
        [s(2, 0, 0, 1), s(-2, 0, 0, 1), s(0, 2, 0, 1), s(0, 0, 2, 1)]
    }

    fn fix_h() -> [Site; 3] {
        [s(0, 0, 0, 1), s(4, 0, 0, 1), s(2, 4, 0, 1)]
    }

    #[test]
    fn fix_t_queries() {
        let [i, k, j, a] = fix_t();
        let half = Site::new([int(0), int(0), int(0)], rat(1, 2));
        assert_eq!(insphere(&i, &k, &j, &a, &half), Ok(Sign::Neg));
        assert_eq!(insphere(&i, &k, &j, &a, &s(0, 0, 10, 1)), Ok(Sign::Pos));
        assert_eq!(insphere(&i, &k, &j, &a, &s(0, 0, -2, 1)), Ok(Sign::Zero));
        assert_eq!(insphere(&i, &j, &k, &a, &s(0, 0, 10, 1)), Err(GeomError::VertexNotFound));
    }

    #[test]
    fn fix_t_classification() {
        let [i, k, j, a] = fix_t();
        let planes = classify_tangent_planes(&i, &j, &k, &a).unwrap();
        assert_eq!(planes.keys().copied().collect::<Vec<_>>(), vec![Orientation::Ikj]);
        let planes = classify_tangent_planes(&i, &k, &j, &a).unwrap();
        assert_eq!(planes.keys().copied().collect::<Vec<_>>(), vec![Orientation::Ijk]);
    }

    #[test]
    fn fix_h_classification() {
        let [i, j, k] = fix_h();
        let a = Site::new([int(2), int(1), int(0)], rat(1, 2));
        let planes = classify_tangent_planes(&i, &j, &k, &a).unwrap();
        assert_eq!(planes.len(), 2);
        assert!(classify_tangent_planes(&i, &j, &k, &s(100, 100, 0, 1)).unwrap().is_empty());
    }

    #[test]
    fn planes_touch_every_inverted_site() {
        let [i, j, k] = fix_h();
        let cases = [
            [i.clone(), j.clone(), k.clone(), Site::new([int(2), int(1), int(0)], rat(1, 2))],
            [i.clone(), j.clone(), k.clone(), s(2, 1, 5, 1)],
            [s(0, 0, 0, 2), s(5, 1, 0, 1), s(1, 6, 2, 3), s(2, 2, 7, 1)],
            fix_t(),
        ];
        for quad in &cases {
            let [a, b, c, d] = quad.each_ref();
            let rows = inverted_rows(a, b, c, d).unwrap();
            for plane in classify_tangent_planes(a, b, c, d).unwrap().values() {
                let unit = &(&(&plane.a * &plane.a) + &(&plane.b * &plane.b)) + &(&plane.c * &plane.c);
                assert_eq!(unit.a.value(), &int(1));
                assert_eq!(unit.b.value(), &int(0));
                assert_eq!(plane.d.sign(), Ok(Sign::Pos));
                for row in &rows {
                    let r = plane.residual(row);
                    assert!(r.a.value() == &int(0) && r.b.value() == &int(0), "residual {r:?}");
                }
            }
        }
    }

    #[test]
    fn even_permutations_query_the_same_vertex() {
        let [i, j, k] = fix_h();
        let a = Site::new([int(2), int(1), int(0)], rat(1, 2));
        let q = s(3, 1, 2, 1);
        let base = insphere(&i, &j, &k, &a, &q).unwrap();
        let other = insphere(&i, &k, &j, &a, &q).unwrap();
        assert_ne!(base, other);
        // Three-cycles keep the orientation of the tangency tetrahedron.
        assert_eq!(insphere(&j, &k, &i, &a, &q), Ok(base));
        assert_eq!(insphere(&a, &j, &i, &k, &q), Ok(base));
        assert_eq!(insphere(&k, &j, &a, &i, &q), Ok(base));
        // A four-cycle is odd and selects the other vertex.
        assert_eq!(insphere(&j, &k, &a, &i, &q), Ok(other));
    }

    #[test]
    fn small_query_far_below_a_negative_sphere() {
        // Large equal sites with a tiny query: the reach check decides.
        let [i, j, k] = fix_h();
        let tiny = Site::new([int(2), rat(3, 2), int(0)], rat(1, 100));
        let a = Site::new([int(2), int(1), int(0)], rat(1, 2));
        for o in [insphere(&i, &j, &k, &a, &tiny), insphere(&i, &k, &j, &a, &tiny)] {
            assert!(o.is_ok());
        }
    }

    #[test]
    fn degree_is_reported() {
        let [i, k, j, a] = fix_t();
        let (_, log) = audit::with_audit(|| insphere(&i, &k, &j, &a, &s(0, 0, 10, 1)));
        assert!(log.max_degree <= 18);
    }

    #[test]
    fn labels_round_trip() {
        for l in ["ikja", "ijkb", "ikjq"] {
            assert_eq!(VertexLabel::parse(l).unwrap().to_string(), l);
        }
        assert!(VertexLabel::parse("ijka2").is_none());
    }
}
