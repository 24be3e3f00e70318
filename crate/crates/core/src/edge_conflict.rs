//! Conflict of a query sphere with a finite Apollonius edge.
//!
//! The edge of `i, j, k` bounded by `v_ijkl` on the left and `v_ikjm` on the
//! right is destroyed where it meets the shadow of the query. The shadow's
//! endpoints are placed relative to both edge endpoints with two Order
//! calls, and the intersection is then read off piece by piece.

use crate::base::{shadow, trisector_type, ShadowType, TrisectorType};
use crate::error::{GeomError, GeomResult};
use crate::insphere::{Orientation, VertexLabel};
use crate::order::order_named;
use crate::sites::Site;

token_enum! {
    /// Shape of the part of an edge inside the shadow of a query.
    pub enum EdgeConflictKind {
        NoConflict => "NO_CONFLICT",
        EntireEdge => "ENTIRE_EDGE",
        LeftVertex => "LEFT_VERTEX",
        RightVertex => "RIGHT_VERTEX",
        BothVertices => "BOTH_VERTICES",
        Interior => "INTERIOR",
    }
}

impl EdgeConflictKind {
    /// Kind of an edge cut into consecutive pieces, given which pieces lie
    /// inside the shadow.
    pub fn from_pieces(inside: &[bool]) -> EdgeConflictKind {
        use EdgeConflictKind::*;
        let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
            return NoConflict;
        };
        let runs = inside.windows(2).filter(|w| w[0] != w[1]).count() + 1;
        match (first, last) {
            _ if !inside.iter().any(|&b| b) => NoConflict,
            (true, true) if runs == 1 => EntireEdge,
            (true, true) => BothVertices,
            (true, false) => LeftVertex,
            (false, true) => RightVertex,
            (false, false) => Interior,
        }
    }
}

/// A finite edge on the trisector of `i, j, k`, from `v_ijkl` to `v_ikjm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub i: Site,
    pub j: Site,
    pub k: Site,
    pub l: Site,
    pub m: Site,
}

impl EdgeSpec {
    pub fn new(i: Site, j: Site, k: Site, l: Site, m: Site) -> Self {
        EdgeSpec { i, j, k, l, m }
    }
}

/// Shadow endpoints in increasing order, and whether the shadow contains
/// the negative end of the trisector.
fn shadow_endpoints(t: ShadowType) -> (&'static [Orientation], bool) {
    use Orientation::{Ijk, Ikj};
    match t {
        ShadowType::Empty => (&[], false),
        ShadowType::Full => (&[], true),
        ShadowType::RightRay => (&[Ikj], false),
        ShadowType::LeftRay => (&[Ijk], true),
        ShadowType::Interval => (&[Ikj, Ijk], false),
        ShadowType::TwoRays => (&[Ijk, Ikj], true),
    }
}

fn degenerate(e: GeomError) -> GeomError {
    if e.is_degeneracy() {
        GeomError::DegenerateEdgeConflict
    } else {
        e
    }
}

/// Type of the intersection of `edge` with the shadow of `q`.
pub fn edge_conflict(edge: &EdgeSpec, q: &Site) -> GeomResult<EdgeConflictKind> {
    edge_conflict_inner(edge, q).map_err(degenerate)
}

fn edge_conflict_inner(edge: &EdgeSpec, q: &Site) -> GeomResult<EdgeConflictKind> {
    let EdgeSpec { i, j, k, l, m } = edge;
    if trisector_type(i, j, k)? != TrisectorType::Hyperbolic {
        return Err(GeomError::NotHyperbolic);
    }
    let shape = shadow(i, j, k, q)?;
    match shape {
        ShadowType::Empty => return Ok(EdgeConflictKind::NoConflict),
        ShadowType::Full => return Ok(EdgeConflictKind::EntireEdge),
        _ => {}
    }
    let lambda = VertexLabel::new(Orientation::Ijk, 'l');
    let mu = VertexLabel::new(Orientation::Ikj, 'm');
    let (with_l, _) = order_named(i, j, k, (l, 'l'), (q, 'q'))?;
    let (with_m, _) = order_named(i, j, k, (m, 'm'), (q, 'q'))?;
    let at_lambda = with_l.position(lambda).ok_or(GeomError::InvalidEdge)?;
    let at_mu = with_m.position(mu).ok_or(GeomError::InvalidEdge)?;

    let (ends, mut inside) = shadow_endpoints(shape);
    let mut cuts = 0;
    let mut pieces = Vec::new();
    for &o in ends {
        let v = VertexLabel::new(o, 'q');
        let before_lambda = with_l.position(v).ok_or(GeomError::InvalidEdge)? < at_lambda;
        let before_mu = with_m.position(v).ok_or(GeomError::InvalidEdge)? < at_mu;
        match (before_lambda, before_mu) {
            (true, true) => inside = !inside,
            (false, true) => {
                if cuts == 0 {
                    pieces.push(inside);
                }
                inside = !inside;
                pieces.push(inside);
                cuts += 1;
            }
            (false, false) => {}
            (true, false) => return Err(GeomError::InvalidEdge),
        }
    }
    if cuts == 0 {
        pieces.push(inside);
    }
    Ok(EdgeConflictKind::from_pieces(&pieces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn fix_edge() -> EdgeSpec {
        let s = |x, y, z, r| Site::from_ints(x, y, z, r);
        EdgeSpec::new(
            s(0, 0, 0, 1),
            s(4, 0, 0, 1),
            s(2, 4, 0, 1),
            Site::new([int(2), int(1), int(0)], rat(1, 2)),
            s(2, 1, 20, 1),
        )
    }

    fn q(z: i64, r: (i64, i64)) -> Site {
        Site::new([int(2), int(1), int(z)], rat(r.0, r.1))
    }

    #[test]
    fn fixtures() {
        let e = fix_edge();
        assert_eq!(edge_conflict(&e, &q(12, (1, 1))), Ok(EdgeConflictKind::RightVertex));
        assert_eq!(edge_conflict(&e, &q(0, (1, 4))), Ok(EdgeConflictKind::NoConflict));
        assert_eq!(edge_conflict(&e, &q(7, (1, 2))), Ok(EdgeConflictKind::EntireEdge));
        let far = Site::new([int(100), int(100), int(0)], rat(1, 2));
        assert_eq!(edge_conflict(&e, &far), Ok(EdgeConflictKind::NoConflict));
    }

    #[test]
    fn piece_patterns() {
        use EdgeConflictKind::*;
        assert_eq!(EdgeConflictKind::from_pieces(&[false]), NoConflict);
        assert_eq!(EdgeConflictKind::from_pieces(&[true]), EntireEdge);
        assert_eq!(EdgeConflictKind::from_pieces(&[true, false]), LeftVertex);
        assert_eq!(EdgeConflictKind::from_pieces(&[false, true]), RightVertex);
        assert_eq!(EdgeConflictKind::from_pieces(&[true, false, true]), BothVertices);
        assert_eq!(EdgeConflictKind::from_pieces(&[false, true, false]), Interior);
    }
}
