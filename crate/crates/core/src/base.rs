//! Predicates on three or four sites that do not need a tangent sphere
//! with a prescribed orientation: cone containment, trisector type,
//! signed distances to the common tangent planes, number of tangent
//! spheres and the shape of a shadow region.

use crate::error::{GeomError, GeomResult};
use crate::kernel::{cross, dot, norm2, sum, vscale, vsub, DegreeTagged, Sign, Vec3};
use crate::sites::{check_sites, orient3d_det, reduce_and_invert, select_pole, BarredTriple, Site};

token_enum! {
    /// Position of a sphere relative to the cone tangent to two others.
    pub enum InConeResult {
        Inside => "INSIDE",
        Outside => "OUTSIDE",
        OnePointTouch => "ONE_POINT_TOUCH",
        CircleTouch => "CIRCLE_TOUCH",
    }
}

token_enum! {
    /// Shape of the locus of centers of spheres tangent to three sites.
    pub enum TrisectorType {
        Hyperbolic => "HYPERBOLIC",
        Parabolic => "PARABOLIC",
        Elliptic => "ELLIPTIC",
    }
}

token_enum! {
    /// Number of spheres externally tangent to four sites.
    pub enum ExistenceCount {
        Zero => "ZERO",
        One => "ONE",
        OneDouble => "ONE_DOUBLE",
        Two => "TWO",
        Infinite => "INFINITE",
    }
}

token_enum! {
    /// Part of a hyperbolic trisector whose tangent spheres intersect a
    /// fourth site, as a subset of the real line oriented from the
    /// negative to the positive end.
    pub enum ShadowType {
        Empty => "EMPTY",
        Full => "FULL",
        LeftRay => "LEFT_RAY",
        RightRay => "RIGHT_RAY",
        Interval => "INTERVAL",
        TwoRays => "TWO_RAYS",
    }
}

fn radius_diff(a: &Site, b: &Site) -> DegreeTagged {
    &b.r() - &a.r()
}

/// Classifies `c` against the cone (or cylinder) tangent to `a` and `b`.
pub fn incone(a: &Site, b: &Site, c: &Site) -> GeomResult<InConeResult> {
    check_sites(&[a, b, c])?;
    let (a, b) = if radius_diff(a, b).sign().is_neg() { (b, a) } else { (a, b) };
    let ab = vsub(&b.c(), &a.c());
    let ac = vsub(&c.c(), &a.c());
    let sb = radius_diff(a, b);
    let sc = radius_diff(a, c);

    // Half-space in front of the apex.
    let m = &(&sb * &dot(&ac, &ab)) + &(&a.r() * &norm2(&ab));
    if !m.sign().is_pos() {
        return Ok(InConeResult::Outside);
    }

    let n = cross(&ab, &ac);
    if n.iter().all(|v| v.sign().is_zero()) {
        return Ok(collinear_incone(&ab, &ac, &sb, &sc));
    }

    // Components of `sc * ab - sb * ac` are the radius determinants.
    let dr = vsub(&vscale(&ab, &sc), &vscale(&ac, &sb));
    let delta = &norm2(&n) - &norm2(&dr);
    let delta1 = dot(&ab, &dr).scale(-2);
    Ok(match delta.sign() {
        Sign::Pos => InConeResult::Outside,
        Sign::Zero => {
            if delta1.sign().is_neg() {
                InConeResult::Outside
            } else {
                InConeResult::OnePointTouch
            }
        }
        Sign::Neg => {
            if delta1.sign().is_pos() {
                InConeResult::Inside
            } else {
                InConeResult::Outside
            }
        }
    })
}

/// Centers on a line: compare the radius of `c` with the cone radius at its
/// center, interpolated along the first axis on which `b` differs from `a`.
fn collinear_incone(ab: &Vec3, ac: &Vec3, sb: &DegreeTagged, sc: &DegreeTagged) -> InConeResult {
    let axis = (0..3).find(|&k| !ab[k].sign().is_zero()).unwrap_or(0);
    let (x, y) = (&ac[axis], &ab[axis]);
    // y * (cone radius at c - r_c), up to the common r_a.
    let margin = &(sb * x) - &(sc * y);
    match margin.sign() * y.sign() {
        Sign::Pos => InConeResult::Inside,
        Sign::Zero => InConeResult::CircleTouch,
        Sign::Neg => InConeResult::Outside,
    }
}

pub fn trisector_type(i: &Site, j: &Site, k: &Site) -> GeomResult<TrisectorType> {
    check_sites(&[i, j, k])?;
    let mut touch = false;
    for (a, b, c) in [(i, j, k), (i, k, j), (j, k, i)] {
        match incone(a, b, c)? {
            InConeResult::Inside | InConeResult::CircleTouch => return Ok(TrisectorType::Elliptic),
            InConeResult::OnePointTouch => touch = true,
            InConeResult::Outside => {}
        }
    }
    Ok(if touch { TrisectorType::Parabolic } else { TrisectorType::Hyperbolic })
}

fn require_hyperbolic(i: &Site, j: &Site, k: &Site) -> GeomResult<()> {
    match trisector_type(i, j, k)? {
        TrisectorType::Hyperbolic => Ok(()),
        _ => Err(GeomError::NotHyperbolic),
    }
}

/// Signs of the distances from `a` to the two planes tangent to `i, j, k`
/// with all three sites on their positive side.
///
/// The first entry belongs to the plane reached by the trisector towards its
/// negative end, the second to the plane at its positive end. The positive
/// direction of the trisector is `(C_j - C_i) x (C_k - C_i)`.
pub fn distance(i: &Site, j: &Site, k: &Site, a: &Site) -> GeomResult<(Sign, Sign)> {
    require_hyperbolic(i, j, k)?;
    let ci = i.c();
    let pj = vsub(&j.c(), &ci);
    let pk = vsub(&k.c(), &ci);
    let pa = vsub(&a.c(), &ci);
    let (sj, sk, sa) = (radius_diff(i, j), radius_diff(i, k), radius_diff(i, a));

    let n1 = cross(&pj, &pk);
    let d = dot(&pa, &n1);
    let sd = d.sign();
    if sd.is_zero() {
        // C_a lies in the plane of the three centers: both planes see it at
        // the same signed distance.
        let axis = (0..3).find(|&l| !n1[l].sign().is_zero()).unwrap_or(0);
        let num = sum(&[
            &sj * &cross(&pa, &pk)[axis],
            &sk * &cross(&pj, &pa)[axis],
            -(&sa * &n1[axis]),
        ]);
        let s = num.sign() * n1[axis].sign();
        return Ok((s, s));
    }

    let n0 = sum3(&[
        vscale(&cross(&pk, &pa), &sj),
        vscale(&cross(&pa, &pj), &sk),
        vscale(&n1, &sa),
    ]);
    // The distances are the roots of l2 e^2 + l1 e + l0 with l2 > 0.
    let l1 = dot(&n0, &n1).scale(2);
    let l0 = &norm2(&n0) - &d.square();
    let (big, small) = match l0.sign() {
        Sign::Neg => (Sign::Pos, Sign::Neg),
        Sign::Pos => {
            let s = -l1.sign();
            (s, s)
        }
        Sign::Zero => match l1.sign() {
            Sign::Pos => (Sign::Zero, Sign::Neg),
            Sign::Neg => (Sign::Pos, Sign::Zero),
            Sign::Zero => (Sign::Zero, Sign::Zero),
        },
    };
    Ok(if sd.is_pos() { (big, small) } else { (small, big) })
}

fn sum3(vs: &[Vec3]) -> Vec3 {
    let mut acc = [DegreeTagged::zero(), DegreeTagged::zero(), DegreeTagged::zero()];
    for v in vs {
        for k in 0..3 {
            acc[k] = &acc[k] + &v[k];
        }
    }
    acc
}

/// Counts the spheres externally tangent to four sites.
pub fn existence(s1: &Site, s2: &Site, s3: &Site, s4: &Site) -> GeomResult<ExistenceCount> {
    let sites = [s1, s2, s3, s4];
    check_sites(&sites)?;
    let pole = select_pole(&sites);
    let rows = reduce_and_invert(&sites, pole)?;

    if rows.iter().all(|r| r.rbar.sign().is_zero()) {
        let c = sites.map(|s| s.c());
        let o = orient3d_det(&c[0], &c[1], &c[2], &c[3]);
        if !o.sign().is_zero() {
            return Ok(ExistenceCount::One);
        }
        let b = BarredTriple::new(&rows).b();
        return Ok(if b.iter().all(|v| v.sign().is_zero()) {
            ExistenceCount::Infinite
        } else {
            ExistenceCount::Zero
        });
    }

    let t = BarredTriple::new(&rows);
    let planes = PlaneSystem::new(&t);
    Ok(planes.count())
}

/// The quadratic system for planes `n . cbar_m + d pbar_m = rbar_m` with
/// `|n| = 1`, whose solutions with `d > 0` are the tangent spheres.
pub(crate) struct PlaneSystem<'a> {
    pub t: &'a BarredTriple,
    pub e: DegreeTagged,
    pub se: Sign,
    pub a: Vec3,
    pub b: Vec3,
    /// Sign of the reduced discriminant `|B|^2 - |C|^2`.
    pub s_delta: Sign,
}

impl<'a> PlaneSystem<'a> {
    pub fn new(t: &'a BarredTriple) -> Self {
        let e = t.e();
        let se = e.sign();
        let b = t.b();
        let delta = &norm2(&b) - &norm2(&t.c());
        PlaneSystem {
            t,
            se,
            e,
            a: t.a(),
            s_delta: delta.sign(),
            b,
        }
    }

    /// Sign of `A . B`, which fixes the sign of the sum of the roots when
    /// the barred centers are independent.
    pub fn s_ab(&self) -> Sign {
        dot(&self.a, &self.b).sign()
    }

    /// Sign of `|A|^2 - E^2`, the constant coefficient of the quadratic.
    pub fn s_m0(&self) -> Sign {
        (&norm2(&self.a) - &self.e.square()).sign()
    }

    pub fn count(&self) -> ExistenceCount {
        use ExistenceCount::*;
        if !self.se.is_zero() {
            return match self.s_delta {
                Sign::Neg => Zero,
                Sign::Zero => {
                    if self.s_ab().is_pos() {
                        OneDouble
                    } else {
                        Zero
                    }
                }
                Sign::Pos => match self.s_m0() {
                    Sign::Neg => One,
                    Sign::Zero => {
                        if self.s_ab().is_pos() {
                            One
                        } else {
                            Zero
                        }
                    }
                    Sign::Pos => {
                        if self.s_ab().is_pos() {
                            Two
                        } else {
                            Zero
                        }
                    }
                },
            };
        }
        let Some(axis) = self.b_axis() else {
            let consistent = self.a.iter().chain(self.t.c().iter()).all(|v| v.sign().is_zero());
            return if consistent { Infinite } else { Zero };
        };
        let sd = self.a[axis].sign() * self.b[axis].sign();
        match (self.s_delta, sd) {
            (Sign::Neg, _) => Zero,
            (Sign::Zero, Sign::Pos) => OneDouble,
            (Sign::Pos, Sign::Pos) => Two,
            _ => Zero,
        }
    }

    /// First axis on which `B` is non-zero.
    pub fn b_axis(&self) -> Option<usize> {
        (0..3).find(|&k| !self.b[k].sign().is_zero())
    }
}

/// Shape of the shadow of `a` on the trisector of `i, j, k`.
///
/// A zero distance sign means `a` touches one of the limiting tangent
/// planes. Membership near that end is then recovered from the other end
/// and the parity of the number of finite boundary points, or, when `a`
/// touches both planes, from the first-order behavior of the tangent
/// spheres as they flatten out.
pub fn shadow(i: &Site, j: &Site, k: &Site, a: &Site) -> GeomResult<ShadowType> {
    let (mut s1, mut s2) = distance(i, j, k, a)?;
    let count = existence(i, j, k, a)?;
    let boundary = match count {
        ExistenceCount::Zero => 0,
        ExistenceCount::One => 1,
        ExistenceCount::Two => 2,
        ExistenceCount::OneDouble | ExistenceCount::Infinite => return Err(GeomError::DegenerateShadow),
    };
    let parity = Sign::parity(boundary);
    match (s1.is_zero(), s2.is_zero()) {
        (true, false) => s1 = s2 * parity,
        (false, true) => s2 = s1 * parity,
        (true, true) => {
            if boundary % 2 == 1 {
                return Err(GeomError::DegenerateShadow);
            }
            // Positive means the flattening spheres reach into `a`.
            let s = -coplanar_end_membership(i, j, k, a)?;
            if s.is_zero() {
                return Err(GeomError::DegenerateShadow);
            }
            s1 = s;
            s2 = s;
        }
        (false, false) => {}
    }
    use ShadowType::*;
    match (boundary, s1, s2) {
        (0, Sign::Neg, Sign::Neg) => Ok(Full),
        (0, Sign::Pos, Sign::Pos) => Ok(Empty),
        (1, Sign::Neg, Sign::Pos) => Ok(LeftRay),
        (1, Sign::Pos, Sign::Neg) => Ok(RightRay),
        (2, Sign::Pos, Sign::Pos) => Ok(Interval),
        (2, Sign::Neg, Sign::Neg) => Ok(TwoRays),
        _ => Err(GeomError::DegenerateShadow),
    }
}

/// For `a` touching both tangent planes of `i, j, k` (so all four centers
/// are coplanar): POS when the tangent spheres near either end of the
/// trisector intersect `a`, NEG when they miss it.
///
/// After inversion about the smallest of `i, j, k`, the trisector becomes a
/// family of planes `n . U + d = rho` tangent to the two other inverted
/// sites, ending at `d = 0`. Writing `U_a = alpha U_1 + beta U_2`, the
/// first-order change of `n . U_a + d - rho_a` at `d = 0` is
/// `1 - alpha - beta`.
fn coplanar_end_membership(i: &Site, j: &Site, k: &Site, a: &Site) -> GeomResult<Sign> {
    let tri = [i, j, k];
    let pole = select_pole(&tri);
    let others: Vec<&Site> = (0..3).filter(|&n| n != pole).map(|n| tri[n]).collect();
    let r1 = crate::sites::reduce(others[0], tri[pole], 0)?;
    let r2 = crate::sites::reduce(others[1], tri[pole], 1)?;
    let ra = crate::sites::reduce(a, tri[pole], 2)?;
    let n12 = cross(&r1.cbar, &r2.cbar);
    let Some(axis) = (0..3).find(|&l| !n12[l].sign().is_zero()) else {
        return Err(GeomError::DegenerateShadow);
    };
    let num = sum(&[
        &r1.pbar * &cross(&ra.cbar, &r2.cbar)[axis],
        &r2.pbar * &cross(&r1.cbar, &ra.cbar)[axis],
        -(&ra.pbar * &n12[axis]),
    ]);
    // sign(alpha + beta - 1)
    Ok(num.sign() * n12[axis].sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn s(x: i64, y: i64, z: i64, r: i64) -> Site {
        Site::from_ints(x, y, z, r)
    }

    fn sr(x: (i64, i64), y: (i64, i64), z: (i64, i64), r: (i64, i64)) -> Site {
        Site::new([rat(x.0, x.1), rat(y.0, y.1), rat(z.0, z.1)], rat(r.0, r.1))
    }

    fn fix_h() -> [Site; 3] {
        [s(0, 0, 0, 1), s(4, 0, 0, 1), s(2, 4, 0, 1)]
    }

    #[test]
    fn incone_examples() {
        let [a, b, _] = fix_h();
        let c = sr((2, 1), (0, 1), (0, 1), (1, 2));
        assert_eq!(incone(&a, &b, &c), Ok(InConeResult::Inside));
        assert_eq!(incone(&a, &b, &s(2, 3, 0, 1)), Ok(InConeResult::Outside));
        let c = sr((2, 1), (1, 2), (0, 1), (1, 2));
        assert_eq!(incone(&a, &b, &c), Ok(InConeResult::OnePointTouch));
        assert_eq!(incone(&s(0, 0, 0, 1), &s(4, 0, 0, 2), &s(8, 0, 0, 3)), Ok(InConeResult::CircleTouch));
        // Argument order of the cone sites does not matter.
        assert_eq!(incone(&s(4, 0, 0, 2), &s(0, 0, 0, 1), &s(8, 0, 0, 3)), Ok(InConeResult::CircleTouch));
        // A sphere on the axis behind the apex is outside.
        assert_eq!(incone(&s(0, 0, 0, 1), &s(4, 0, 0, 2), &sr((-20, 1), (0, 1), (0, 1), (1, 10))), Ok(InConeResult::Outside));
    }

    #[test]
    fn trisector_examples() {
        let [i, j, k] = fix_h();
        assert_eq!(trisector_type(&i, &j, &k), Ok(TrisectorType::Hyperbolic));
        let c = sr((2, 1), (1, 2), (0, 1), (1, 4));
        assert_eq!(trisector_type(&i, &j, &c), Ok(TrisectorType::Elliptic));
        let c = sr((2, 1), (3, 4), (0, 1), (1, 4));
        assert_eq!(trisector_type(&i, &j, &c), Ok(TrisectorType::Parabolic));
    }

    #[test]
    fn distance_examples() {
        let [i, j, k] = fix_h();
        assert_eq!(distance(&i, &j, &k, &s(2, 1, 5, 1)), Ok((Sign::Pos, Sign::Neg)));
        let a = sr((2, 1), (1, 1), (0, 1), (1, 2));
        assert_eq!(distance(&i, &j, &k, &a), Ok((Sign::Pos, Sign::Pos)));
        let a = sr((2, 1), (3, 2), (0, 1), (10, 1));
        assert_eq!(distance(&i, &j, &k, &a), Ok((Sign::Neg, Sign::Neg)));
        let c = sr((2, 1), (1, 2), (0, 1), (1, 4));
        assert_eq!(distance(&i, &j, &c, &s(2, 1, 5, 1)), Err(GeomError::NotHyperbolic));
    }

    #[test]
    fn existence_examples() {
        let [i, j, k] = fix_h();
        assert_eq!(existence(&i, &j, &k, &s(2, 1, 5, 1)), Ok(ExistenceCount::One));
        let a = sr((2, 1), (1, 1), (0, 1), (1, 2));
        assert_eq!(existence(&i, &j, &k, &a), Ok(ExistenceCount::Two));
        assert_eq!(existence(&i, &j, &k, &s(100, 100, 0, 1)), Ok(ExistenceCount::Zero));
        let t = [s(2, 0, 0, 1), s(-2, 0, 0, 1), s(0, 2, 0, 1), s(0, 0, 2, 1)];
        assert_eq!(existence(&t[0], &t[1], &t[2], &t[3]), Ok(ExistenceCount::One));
        // Four equal spheres on a circle.
        let c = [s(2, 0, 0, 1), s(-2, 0, 0, 1), s(0, 2, 0, 1), s(0, -2, 0, 1)];
        assert_eq!(existence(&c[0], &c[1], &c[2], &c[3]), Ok(ExistenceCount::Infinite));
        let c = [s(2, 0, 0, 1), s(-2, 0, 0, 1), s(0, 2, 0, 1), s(0, -3, 0, 1)];
        assert_eq!(existence(&c[0], &c[1], &c[2], &c[3]), Ok(ExistenceCount::Zero));
    }

    #[test]
    fn shadow_examples() {
        let [i, j, k] = fix_h();
        assert_eq!(shadow(&i, &j, &k, &s(2, 1, 5, 1)), Ok(ShadowType::RightRay));
        let a = sr((2, 1), (1, 1), (0, 1), (1, 2));
        assert_eq!(shadow(&i, &j, &k, &a), Ok(ShadowType::Interval));
        assert_eq!(shadow(&i, &j, &k, &s(100, 100, 0, 1)), Ok(ShadowType::Empty));
        // Mirror image of the right ray.
        assert_eq!(shadow(&i, &j, &k, &s(2, 1, -5, 1)), Ok(ShadowType::LeftRay));
        let a = sr((2, 1), (3, 2), (0, 1), (10, 1));
        assert_eq!(shadow(&i, &j, &k, &a), Err(GeomError::ContainedSites));
        // Touches both tangent planes and sits in the middle of the sites.
        let a = sr((2, 1), (3, 2), (0, 1), (1, 1));
        assert_eq!(distance(&i, &j, &k, &a), Ok((Sign::Zero, Sign::Zero)));
        assert_eq!(shadow(&i, &j, &k, &a), Ok(ShadowType::Full));
    }

    #[test]
    fn degrees_stay_within_bounds() {
        use crate::kernel::audit::with_audit;
        let [i, j, k] = fix_h();
        let a = s(2, 1, 5, 1);
        let (_, log) = with_audit(|| incone(&i, &j, &k).unwrap());
        assert!(log.max_degree <= 4, "incone degree {}", log.max_degree);
        let (_, log) = with_audit(|| distance(&i, &j, &k, &a).unwrap());
        assert!(log.max_degree <= 6, "distance degree {}", log.max_degree);
        let (_, log) = with_audit(|| existence(&i, &j, &k, &a).unwrap());
        assert!(log.max_degree <= 8, "existence degree {}", log.max_degree);
    }
}
