//! Sites, reduction to a pole, inversion and the determinant forms built on
//! top of them.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{GeomError, GeomResult};
use crate::kernel::{
    cross, det3, det4, dot, int, vsub, DegreeTagged, Rational, Sign, Vec3,
};

/// A sphere with rational center and non-negative rational radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    pub center: [Rational; 3],
    pub radius: Rational,
}

impl Site {
    pub fn new(center: [Rational; 3], radius: Rational) -> Self {
        Site { center, radius }
    }

    /// Convenience constructor from integers.
    pub fn from_ints(x: i64, y: i64, z: i64, r: i64) -> Self {
        Site::new([int(x), int(y), int(z)], int(r))
    }

    pub fn coord(&self, axis: usize) -> DegreeTagged {
        DegreeTagged::input(self.center[axis].clone())
    }

    pub fn r(&self) -> DegreeTagged {
        DegreeTagged::input(self.radius.clone())
    }

    pub fn c(&self) -> Vec3 {
        [self.coord(0), self.coord(1), self.coord(2)]
    }

    /// True when one of the two spheres lies inside the other (internal
    /// tangency and coincidence included).
    pub fn contains_or_inside(&self, other: &Site) -> bool {
        let d2: Rational = (0..3)
            .map(|k| {
                let t = &self.center[k] - &other.center[k];
                &t * &t
            })
            .sum();
        let dr = &self.radius - &other.radius;
        d2 <= &dr * &dr
    }

    /// Applies `f` to the center and `g` to the radius.
    pub fn map(&self, f: impl Fn(&[Rational; 3]) -> [Rational; 3], g: impl Fn(&Rational) -> Rational) -> Site {
        Site::new(f(&self.center), g(&self.radius))
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}, {}, {}), {})",
            self.center[0], self.center[1], self.center[2], self.radius
        )
    }
}

/// Rejects negative radii and pairs where one site contains the other.
pub fn check_sites(sites: &[&Site]) -> GeomResult<()> {
    for (n, a) in sites.iter().enumerate() {
        if a.radius.is_negative() {
            return Err(GeomError::ContainedSites);
        }
        for b in &sites[n + 1..] {
            if a.contains_or_inside(b) {
                return Err(GeomError::ContainedSites);
            }
        }
    }
    Ok(())
}

/// Index of the site with the smallest radius; ties go to the earliest
/// position.
pub fn select_pole(sites: &[&Site]) -> usize {
    let mut best = 0;
    for (n, s) in sites.iter().enumerate().skip(1) {
        if s.radius < sites[best].radius {
            best = n;
        }
    }
    best
}

/// A site expressed relative to a pole: barred coordinates and radius, the
/// power `pbar = |C - C_pole|^2 - (r - r_pole)^2`, and the inverted sphere
/// `(u, v, w, rho) = (xbar, ybar, zbar, rbar) / pbar`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertedSite {
    /// Position of the source site in the input slice.
    pub index: usize,
    pub cbar: Vec3,
    pub rbar: DegreeTagged,
    pub pbar: DegreeTagged,
}

impl InvertedSite {
    pub fn u(&self) -> Rational {
        self.cbar[0].value() / self.pbar.value()
    }

    pub fn v(&self) -> Rational {
        self.cbar[1].value() / self.pbar.value()
    }

    pub fn w(&self) -> Rational {
        self.cbar[2].value() / self.pbar.value()
    }

    pub fn rho(&self) -> Rational {
        self.rbar.value() / self.pbar.value()
    }

    pub fn inverted_center(&self) -> [Rational; 3] {
        [self.u(), self.v(), self.w()]
    }
}

/// Reduces `site` against `pole` and checks that the power is positive.
pub fn reduce(site: &Site, pole: &Site, index: usize) -> GeomResult<InvertedSite> {
    let cbar = vsub(&site.c(), &pole.c());
    let rbar = &site.r() - &pole.r();
    let pbar = &dot(&cbar, &cbar) - &rbar.square();
    match pbar.sign() {
        Sign::Pos => Ok(InvertedSite { index, cbar, rbar, pbar }),
        Sign::Zero => Err(GeomError::PoleDegeneracy),
        Sign::Neg => Err(GeomError::ContainedSites),
    }
}

/// Reduces and inverts every non-pole site of `sites` about `sites[pole]`,
/// keeping the input order.
pub fn reduce_and_invert(sites: &[&Site], pole: usize) -> GeomResult<Vec<InvertedSite>> {
    if pole >= sites.len() {
        return Err(GeomError::ShapeMismatch);
    }
    sites
        .iter()
        .enumerate()
        .filter(|&(n, _)| n != pole)
        .map(|(n, s)| reduce(s, sites[pole], n))
        .collect()
}

/// Inversion of a point about the origin, `z -> z / |z|^2`. Returns `None`
/// for the origin itself.
pub fn invert_point(z: &[Rational; 3]) -> Option<[Rational; 3]> {
    let n2: Rational = z.iter().map(|c| c * c).sum();
    if n2.is_zero() {
        return None;
    }
    Some([&z[0] / &n2, &z[1] / &n2, &z[2] / &n2])
}

/// Exact tagged orientation determinant `det[B - A; C - A; P - A]`.
pub fn orient3d_det(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> DegreeTagged {
    det3(&[vsub(b, a), vsub(c, a), vsub(p, a)])
}

/// Orientation of `P` with respect to the oriented plane through `A, B, C`.
/// POS means `P` lies on the side of `(B - A) x (C - A)`.
pub fn orient3d(p: &[Rational; 3], a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Sign {
    let t = |v: &[Rational; 3]| v.clone().map(DegreeTagged::input);
    orient3d_det(&t(p), &t(a), &t(b), &t(c)).sign()
}

/// Coordinate selectors for [`det`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
    Z,
    R,
    U,
    V,
    W,
    Rho,
    Xbar,
    Ybar,
    Zbar,
    Rbar,
    Pbar,
}

impl Coord {
    fn family(self) -> Family {
        match self {
            Coord::X | Coord::Y | Coord::Z | Coord::R => Family::Raw,
            Coord::U | Coord::V | Coord::W | Coord::Rho => Family::Inverted,
            _ => Family::Barred,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Raw,
    Inverted,
    Barred,
}

/// Shapes of determinant understood by [`det`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetKind {
    /// Two coordinate columns plus a ones column over three sites.
    D2,
    /// Three coordinate columns over three sites.
    D3,
    /// Three coordinate columns plus a ones column over four sites.
    D3Ones,
    /// Four coordinate columns over four sites.
    D4,
    /// Three barred columns over the three non-pole sites.
    E3,
    /// Four barred columns over the four non-pole sites.
    E4,
}

#[derive(Clone, Debug)]
pub struct DetQuery {
    pub kind: DetKind,
    pub coords: Vec<Coord>,
    pub sites: Vec<Site>,
    /// Index of the pole in `sites`; required for barred and inverted
    /// coordinates. The pole row is excluded from the matrix.
    pub pole: Option<usize>,
}

/// Evaluates a determinant query.
///
/// Determinants over inverted coordinates are rational functions of the
/// input; the returned degree is that of the numerator over the common
/// denominator `prod pbar`, which is a barred determinant of the same sign.
pub fn det(q: &DetQuery) -> GeomResult<DegreeTagged> {
    let (cols, rows, ones) = match q.kind {
        DetKind::D2 => (2, 3, true),
        DetKind::D3 => (3, 3, false),
        DetKind::D3Ones => (3, 4, true),
        DetKind::D4 => (4, 4, false),
        DetKind::E3 => (3, 3, false),
        DetKind::E4 => (4, 4, false),
    };
    if q.coords.len() != cols {
        return Err(GeomError::ShapeMismatch);
    }
    let family = q.coords[0].family();
    if q.coords.iter().any(|c| c.family() != family) {
        return Err(GeomError::ShapeMismatch);
    }
    let e_kind = matches!(q.kind, DetKind::E3 | DetKind::E4);
    if e_kind != (family == Family::Barred) {
        return Err(GeomError::ShapeMismatch);
    }
    let refs: Vec<&Site> = q.sites.iter().collect();
    let matrix: Vec<Vec<DegreeTagged>> = match (family, q.pole) {
        (Family::Raw, None) => {
            if refs.len() != rows {
                return Err(GeomError::ShapeMismatch);
            }
            refs.iter()
                .map(|s| {
                    let mut row: Vec<DegreeTagged> = q.coords.iter().map(|&c| raw_entry(s, c)).collect();
                    if ones {
                        row.push(DegreeTagged::one());
                    }
                    row
                })
                .collect()
        }
        (Family::Raw, Some(_)) => return Err(GeomError::ShapeMismatch),
        (_, None) => return Err(GeomError::ShapeMismatch),
        (_, Some(pole)) => {
            if pole >= refs.len() || refs.len() - 1 != rows {
                return Err(GeomError::ShapeMismatch);
            }
            let inv = reduce_and_invert(&refs, pole)?;
            // Each inverted row is the barred row divided by its power, so
            // the matrix of numerators multiplies every row by pbar.
            inv.iter()
                .map(|s| {
                    let mut row: Vec<DegreeTagged> = q.coords.iter().map(|&c| barred_entry(s, c)).collect();
                    if ones {
                        row.push(s.pbar.clone());
                    }
                    row
                })
                .collect()
        }
    };
    let value = square_det(&matrix);
    if family == Family::Inverted {
        let scale: Rational = refs
            .iter()
            .enumerate()
            .filter(|&(n, _)| Some(n) != q.pole)
            .map(|(n, s)| {
                let pole = refs[q.pole.unwrap_or(0)];
                reduce(s, pole, n).map(|r| r.pbar.into_value())
            })
            .collect::<GeomResult<Vec<_>>>()?
            .into_iter()
            .product();
        return Ok(DegreeTagged::new(value.value() / scale, value.degree()));
    }
    Ok(value)
}

fn raw_entry(s: &Site, c: Coord) -> DegreeTagged {
    match c {
        Coord::X => s.coord(0),
        Coord::Y => s.coord(1),
        Coord::Z => s.coord(2),
        _ => s.r(),
    }
}

fn barred_entry(s: &InvertedSite, c: Coord) -> DegreeTagged {
    match c {
        Coord::X | Coord::U | Coord::Xbar => s.cbar[0].clone(),
        Coord::Y | Coord::V | Coord::Ybar => s.cbar[1].clone(),
        Coord::Z | Coord::W | Coord::Zbar => s.cbar[2].clone(),
        Coord::R | Coord::Rho | Coord::Rbar => s.rbar.clone(),
        Coord::Pbar => s.pbar.clone(),
    }
}

fn square_det(m: &[Vec<DegreeTagged>]) -> DegreeTagged {
    match m.len() {
        3 => det3(&[row3(&m[0]), row3(&m[1]), row3(&m[2])]),
        _ => det4(&[row4(&m[0]), row4(&m[1]), row4(&m[2]), row4(&m[3])]),
    }
}

fn row3(r: &[DegreeTagged]) -> Vec3 {
    [r[0].clone(), r[1].clone(), r[2].clone()]
}

fn row4(r: &[DegreeTagged]) -> [DegreeTagged; 4] {
    [r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()]
}

/// Three sites reduced against a common pole, with the cofactor vectors
/// used by the tangent plane computations.
///
/// Writing `M` for the matrix whose rows are the barred centers,
/// `k_form(q) = E * M^{-1} q` with `E = det M`, computed without division.
#[derive(Clone, Debug)]
pub struct BarredTriple {
    pub cbar: [Vec3; 3],
    pub rbar: [DegreeTagged; 3],
    pub pbar: [DegreeTagged; 3],
    /// `cofactors[m] = cbar[m + 1] x cbar[m + 2]`.
    pub cofactors: [Vec3; 3],
}

impl BarredTriple {
    pub fn new(rows: &[InvertedSite]) -> Self {
        assert_eq!(rows.len(), 3, "a barred triple needs exactly three rows");
        let cbar = [rows[0].cbar.clone(), rows[1].cbar.clone(), rows[2].cbar.clone()];
        let cofactors = [
            cross(&cbar[1], &cbar[2]),
            cross(&cbar[2], &cbar[0]),
            cross(&cbar[0], &cbar[1]),
        ];
        BarredTriple {
            rbar: [rows[0].rbar.clone(), rows[1].rbar.clone(), rows[2].rbar.clone()],
            pbar: [rows[0].pbar.clone(), rows[1].pbar.clone(), rows[2].pbar.clone()],
            cbar,
            cofactors,
        }
    }

    /// `det` of the barred centers.
    pub fn e(&self) -> DegreeTagged {
        dot(&self.cbar[0], &self.cofactors[0])
    }

    pub fn k_form(&self, q: &[DegreeTagged; 3]) -> Vec3 {
        let mut acc = [DegreeTagged::zero(), DegreeTagged::zero(), DegreeTagged::zero()];
        for m in 0..3 {
            for k in 0..3 {
                acc[k] = &acc[k] + &(&q[m] * &self.cofactors[m][k]);
            }
        }
        acc
    }

    /// `K(rbar)`.
    pub fn a(&self) -> Vec3 {
        self.k_form(&self.rbar)
    }

    /// `K(pbar)`, proportional to the normal of the plane of the inverted
    /// centers.
    pub fn b(&self) -> Vec3 {
        self.k_form(&self.pbar)
    }

    /// The column determinants `([x r p], [y r p], [z r p])`.
    pub fn c(&self) -> Vec3 {
        let col = |k: usize| -> DegreeTagged {
            det3(&[
                [self.cbar[0][k].clone(), self.rbar[0].clone(), self.pbar[0].clone()],
                [self.cbar[1][k].clone(), self.rbar[1].clone(), self.pbar[1].clone()],
                [self.cbar[2][k].clone(), self.rbar[2].clone(), self.pbar[2].clone()],
            ])
        };
        [col(0), col(1), col(2)]
    }

    /// Same triple with coordinates cyclically shifted so that old axis
    /// `axis` becomes the last one. Cyclic shifts preserve orientation.
    pub fn rotate_axis_last(&self, axis: usize) -> BarredTriple {
        let perm = [(axis + 1) % 3, (axis + 2) % 3, axis];
        let cbar = self.cbar.clone().map(|c| [c[perm[0]].clone(), c[perm[1]].clone(), c[perm[2]].clone()]);
        let cofactors = [
            cross(&cbar[1], &cbar[2]),
            cross(&cbar[2], &cbar[0]),
            cross(&cbar[0], &cbar[1]),
        ];
        BarredTriple {
            cbar,
            rbar: self.rbar.clone(),
            pbar: self.pbar.clone(),
            cofactors,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{norm2, rat};
    use proptest::prelude::*;

    fn fix_h() -> [Site; 3] {
        [Site::from_ints(0, 0, 0, 1), Site::from_ints(4, 0, 0, 1), Site::from_ints(2, 4, 0, 1)]
    }

    #[test]
    fn fix_h_inversion_about_k() {
        let [i, j, k] = fix_h();
        let inv = reduce_and_invert(&[&i, &j, &k], 2).unwrap();
        assert_eq!(inv.len(), 2);
        assert_eq!(inv[0].inverted_center(), [rat(-1, 10), rat(-1, 5), int(0)]);
        assert_eq!(inv[0].rho(), int(0));
        assert_eq!(inv[0].pbar.value(), &int(20));
        assert_eq!(inv[0].pbar.degree(), 2);
        assert_eq!(inv[1].inverted_center(), [rat(1, 10), rat(-1, 5), int(0)]);
    }

    #[test]
    fn twin_of_pole_is_rejected() {
        let [i, _, k] = fix_h();
        let twin = k.clone();
        assert_eq!(reduce_and_invert(&[&i, &k, &twin], 1), Err(GeomError::PoleDegeneracy));
    }

    #[test]
    fn small_determinants() {
        let s = |x, y| Site::from_ints(x, y, 0, 0);
        let q = DetQuery {
            kind: DetKind::D2,
            coords: vec![Coord::X, Coord::Y],
            sites: vec![s(0, 0), s(1, 0), s(0, 1)],
            pole: None,
        };
        assert_eq!(det(&q).unwrap().value(), &int(1));
        assert_eq!(det(&q).unwrap().degree(), 2);
        let q = DetQuery { sites: vec![s(0, 0), s(1, 1), s(2, 2)], ..q };
        assert_eq!(det(&q).unwrap().value(), &int(0));
    }

    #[test]
    fn e_form_with_missing_row_is_shape_mismatch() {
        let q = DetQuery {
            kind: DetKind::E3,
            coords: vec![Coord::Xbar, Coord::Ybar, Coord::Zbar],
            sites: fix_h().to_vec(),
            pole: Some(2),
        };
        assert_eq!(det(&q), Err(GeomError::ShapeMismatch));
    }

    #[test]
    fn orient3d_examples() {
        let p = |x, y, z| [int(x), int(y), int(z)];
        let (a, b, c) = (p(0, 0, 0), p(1, 0, 0), p(0, 1, 0));
        assert_eq!(orient3d(&p(0, 0, 1), &a, &b, &c), Sign::Pos);
        assert_eq!(orient3d(&p(1, 1, 0), &a, &b, &c), Sign::Zero);
        assert_eq!(orient3d(&p(0, 0, -1), &a, &b, &c), Sign::Neg);
    }

    #[test]
    fn pole_prefers_smallest_radius_then_position() {
        let a = Site::from_ints(0, 0, 0, 2);
        let b = Site::from_ints(9, 0, 0, 1);
        let c = Site::from_ints(0, 9, 0, 1);
        assert_eq!(select_pole(&[&a, &b, &c]), 1);
    }

    fn coord() -> impl Strategy<Value = i64> {
        -9i64..10
    }

    fn site() -> impl Strategy<Value = Site> {
        (coord(), coord(), coord(), 0i64..4).prop_map(|(x, y, z, r)| Site::from_ints(x, y, z, r))
    }

    fn separated(sites: &[Site]) -> bool {
        let refs: Vec<&Site> = sites.iter().collect();
        check_sites(&refs).is_ok()
    }

    fn triple(sites: &[Site], pole: usize) -> BarredTriple {
        let refs: Vec<&Site> = sites.iter().collect();
        BarredTriple::new(&reduce_and_invert(&refs, pole).unwrap())
    }

    proptest! {
        #[test]
        fn double_inversion_is_identity(x in coord(), y in coord(), z in coord()) {
            let p = [int(x), int(y), int(z)];
            if let Some(q) = invert_point(&p) {
                prop_assert_eq!(invert_point(&q).unwrap(), p);
            }
        }

        #[test]
        fn inverted_orientation_matches_original(s in prop::collection::vec(site(), 4)) {
            prop_assume!(separated(&s));
            // Pole is the fourth site; inverted centers against the origin.
            let refs: Vec<&Site> = s.iter().collect();
            let inv = reduce_and_invert(&refs, 3).unwrap();
            let zero = [int(0), int(0), int(0)];
            let o_w = orient3d(&inv[2].inverted_center(), &inv[0].inverted_center(), &inv[1].inverted_center(), &zero);
            let o = orient3d(&s[2].center, &s[0].center, &s[1].center, &s[3].center);
            prop_assert_eq!(o_w, o);
        }

        #[test]
        fn inverted_and_barred_determinants_share_sign(s in prop::collection::vec(site(), 4)) {
            prop_assume!(separated(&s));
            let pairs = [(Coord::U, Coord::V, Coord::Xbar, Coord::Ybar), (Coord::V, Coord::Rho, Coord::Ybar, Coord::Rbar), (Coord::U, Coord::W, Coord::Xbar, Coord::Zbar)];
            for (a, b, c, d) in pairs {
                let dq = DetQuery { kind: DetKind::D2, coords: vec![a, b], sites: s.clone(), pole: Some(3) };
                let eq = DetQuery { kind: DetKind::E3, coords: vec![c, d, Coord::Pbar], sites: s.clone(), pole: Some(3) };
                prop_assert_eq!(Sign::of(det(&dq).unwrap().value()), Sign::of(det(&eq).unwrap().value()));
            }
        }

        #[test]
        fn cofactor_identity_holds(s in prop::collection::vec(site(), 4)) {
            prop_assume!(separated(&s));
            let t = triple(&s, select_pole(&s.iter().collect::<Vec<_>>()));
            let (a, b, c, e) = (t.a(), t.b(), t.c(), t.e());
            // |A x B|^2 = E^2 |C|^2
            prop_assert_eq!(norm2(&cross(&a, &b)).into_value(), (&e.square() * &norm2(&c)).into_value());
            // K(q) . cbar[m] = q[m] * E
            for m in 0..3 {
                prop_assert_eq!(dot(&a, &t.cbar[m]).into_value(), (&t.rbar[m] * &e).into_value());
            }
        }

        #[test]
        fn coplanar_discriminant_identity(s in prop::collection::vec(site(), 3), h in coord()) {
            // Put the pole in the plane of the first three centers.
            let mut s = s;
            let base = s[0].center.clone();
            let u = [&s[1].center[0] - &base[0], &s[1].center[1] - &base[1], &s[1].center[2] - &base[2]];
            let v = [&s[2].center[0] - &base[0], &s[2].center[1] - &base[1], &s[2].center[2] - &base[2]];
            let pole_center = [&base[0] + &u[0] * int(h) + &v[0], &base[1] + &u[1] * int(h) + &v[1], &base[2] + &u[2] * int(h) + &v[2]];
            s.push(Site::new(pole_center, int(0)));
            prop_assume!(separated(&s));
            let t = triple(&s, 3);
            prop_assert!(t.e().value().is_zero());
            for axis in 0..3 {
                let r = t.rotate_axis_last(axis);
                let b = r.b();
                let c = r.c();
                let w = [-&c[1], c[0].clone(), DegreeTagged::zero()];
                let lhs = norm2(&cross(&w, &b)).into_value();
                let rhs = (&b[2].square() * &norm2(&c)).into_value();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
