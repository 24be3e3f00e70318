//! Seeded comparison campaigns between the exact predicates and the
//! floating point oracle.
//!
//! Every instance draws from its own ChaCha8 stream (campaign seed, instance
//! index), so a campaign gives the same report for the same seed whatever
//! the thread count.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::base::{distance, existence, incone, shadow, trisector_type, ShadowType};
use crate::edge_conflict::{edge_conflict, EdgeSpec};
use crate::error::{GeomError, GeomResult};
use crate::insphere::insphere;
use crate::kernel::audit::{self, AuditLog};
use crate::kernel::{rat, Sign};
use crate::oracle::{self, OracleError, OracleResult, Trisector};
use crate::order::order_traced;
use crate::sites::{check_sites, Site};

token_enum! {
    /// Predicates covered by the campaigns, with their CLI names.
    pub enum Predicate {
        Incone => "incone",
        Trisector => "trisector",
        Distance => "distance",
        Existence => "existence",
        Shadow => "shadow",
        Insphere => "insphere",
        Order => "order",
        EdgeConflict => "edge-conflict",
    }
}

impl Predicate {
    /// Number of sites an instance of this predicate takes.
    pub fn arity(self) -> usize {
        match self {
            Predicate::Incone | Predicate::Trisector => 3,
            Predicate::Distance | Predicate::Existence | Predicate::Shadow => 4,
            Predicate::Insphere | Predicate::Order => 5,
            Predicate::EdgeConflict => 6,
        }
    }
}

fn pair(s: (Sign, Sign)) -> String {
    format!("({},{})", s.0, s.1)
}

/// Exact result of `p` on `s` as a display string, with the Order case
/// (table and row, `t` when the tie-break decided) when there is one.
pub fn exact_outcome_traced(p: Predicate, s: &[Site]) -> GeomResult<(String, Option<String>)> {
    if s.len() != p.arity() {
        return Err(GeomError::ShapeMismatch);
    }
    let out = match p {
        Predicate::Incone => incone(&s[0], &s[1], &s[2])?.to_string(),
        Predicate::Trisector => trisector_type(&s[0], &s[1], &s[2])?.to_string(),
        Predicate::Distance => pair(distance(&s[0], &s[1], &s[2], &s[3])?),
        Predicate::Existence => existence(&s[0], &s[1], &s[2], &s[3])?.to_string(),
        Predicate::Shadow => shadow(&s[0], &s[1], &s[2], &s[3])?.to_string(),
        Predicate::Insphere => match insphere(&s[0], &s[1], &s[2], &s[3], &s[4]) {
            Err(GeomError::VertexNotFound) => GeomError::VertexNotFound.token().to_string(),
            r => r?.to_string(),
        },
        Predicate::Order => {
            let (o, trace) = order_traced(&s[0], &s[1], &s[2], &s[3], &s[4])?;
            let tag = format!("{}{}", trace.case, if trace.tie_break { "t" } else { "" });
            return Ok((o.to_string(), Some(tag)));
        }
        Predicate::EdgeConflict => {
            let edge = EdgeSpec::new(s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone(), s[4].clone());
            edge_conflict(&edge, &s[5])?.to_string()
        }
    };
    Ok((out, None))
}

pub fn exact_outcome(p: Predicate, s: &[Site]) -> GeomResult<String> {
    exact_outcome_traced(p, s).map(|r| r.0)
}

/// Oracle result of `p` on `s`, formatted like [`exact_outcome`].
pub fn oracle_outcome(p: Predicate, s: &[Site]) -> OracleResult<String> {
    Ok(match p {
        Predicate::Incone => oracle::incone_numeric(&s[0], &s[1], &s[2])?.to_string(),
        Predicate::Trisector => oracle::trisector_numeric(&s[0], &s[1], &s[2])?.to_string(),
        Predicate::Distance => pair(oracle::distance_numeric(&s[0], &s[1], &s[2], &s[3])?),
        Predicate::Existence => oracle::existence_numeric([&s[0], &s[1], &s[2], &s[3]])?.to_string(),
        Predicate::Shadow => oracle::shadow_classify_numeric(&s[0], &s[1], &s[2], &s[3])?.0.to_string(),
        Predicate::Insphere => match oracle::insphere_numeric([&s[0], &s[1], &s[2], &s[3]], &s[4])? {
            Some(sign) => sign.to_string(),
            None => GeomError::VertexNotFound.token().to_string(),
        },
        Predicate::Order => {
            let labels = oracle::order_numeric(&s[0], &s[1], &s[2], &s[3], &s[4], 1e-5)?;
            labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
        }
        Predicate::EdgeConflict => {
            let edge = EdgeSpec::new(s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone(), s[4].clone());
            oracle::edge_conflict_numeric(&edge, &s[5])?.to_string()
        }
    })
}

/// Random stream of instance `index` in the campaign `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A rational in `[-lim, lim]` with denominator 1 or 2.
fn coord(rng: &mut ChaCha8Rng, lim: i64) -> crate::Rational {
    if rng.gen_bool(0.5) {
        rat(rng.gen_range(-lim..=lim), 1)
    } else {
        rat(rng.gen_range(-2 * lim..=2 * lim), 2)
    }
}

fn radius(rng: &mut ChaCha8Rng, max_halves: i64) -> crate::Rational {
    rat(rng.gen_range(1..=max_halves), 2)
}

fn random_site(rng: &mut ChaCha8Rng, flat: bool) -> Site {
    let z = if flat { rat(0, 1) } else { coord(rng, 8) };
    Site::new([coord(rng, 8), coord(rng, 8), z], radius(rng, 8))
}

/// A site placed near a random point of the region spanned by `near`.
fn nearby_site(rng: &mut ChaCha8Rng, near: &[&Site], flat: bool) -> Site {
    let w: Vec<i64> = near.iter().map(|_| rng.gen_range(0..=4)).collect();
    let total = w.iter().sum::<i64>().max(1);
    let mut c = [rat(0, 1), rat(0, 1), rat(0, 1)];
    for (s, wi) in near.iter().zip(&w) {
        for k in 0..3 {
            c[k] += &s.center[k] * rat(*wi, total);
        }
    }
    let spread = rng.gen_range(1..=6);
    for (k, ck) in c.iter_mut().enumerate() {
        if k == 2 && flat {
            continue;
        }
        *ck += coord(rng, spread);
    }
    Site::new(c, radius(rng, 6))
}

fn disjoint_from(s: &Site, others: &[&Site]) -> bool {
    others.iter().all(|o| check_sites(&[s, o]).is_ok())
}

/// Three pairwise non-contained sites whose trisector the oracle sees as
/// hyperbolic with a clear margin.
fn hyperbolic_triple(rng: &mut ChaCha8Rng, flat: bool) -> [Site; 3] {
    loop {
        let t = [random_site(rng, flat), random_site(rng, flat), random_site(rng, flat)];
        if check_sites(&[&t[0], &t[1], &t[2]]).is_err() {
            continue;
        }
        if Trisector::new(&t[0], &t[1], &t[2]).is_ok() {
            return t;
        }
    }
}

/// A site with a non-trivial shadow on the trisector of `t`, disjoint from
/// the given sites.
fn shadow_site(rng: &mut ChaCha8Rng, t: &[Site; 3], avoid: &[&Site], flat: bool) -> Site {
    let tri = Trisector::new(&t[0], &t[1], &t[2]).expect("hyperbolic triple");
    for _ in 0..200 {
        let s = if rng.gen_bool(0.5) {
            // Centered near a point of the trisector.
            let p = tri.sample(rng.gen_range(-8.0..8.0)).point;
            let c = p.map(|x| rat((x * 2.0).round() as i64 + rng.gen_range(-3..=3), 2));
            Site::new(c, radius(rng, 6))
        } else {
            nearby_site(rng, &[&t[0], &t[1], &t[2]], flat)
        };
        if !disjoint_from(&s, &[&t[0], &t[1], &t[2]]) || !disjoint_from(&s, avoid) {
            continue;
        }
        match oracle::shadow_classify_numeric(&t[0], &t[1], &t[2], &s) {
            Ok((ShadowType::Empty | ShadowType::Full, _)) => continue,
            _ => return s,
        }
    }
    nearby_site(rng, &[&t[0], &t[1], &t[2]], flat)
}

/// A small site overlapping the tangent sphere at the trisector point with
/// parameter `at` from outside, so that its shadow is often a bounded
/// interval around `at`.
fn interval_site(rng: &mut ChaCha8Rng, t: &[Site; 3], avoid: &[&Site], at: f64) -> Site {
    let tri = Trisector::new(&t[0], &t[1], &t[2]).expect("hyperbolic triple");
    let p = tri.sample(at).point;
    let big = tri.radius(at);
    for _ in 0..200 {
        let d: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if !(0.1..=1.0).contains(&len) {
            continue;
        }
        let quarters = rng.gen_range(1..=8);
        let r = quarters as f64 / 4.0;
        let reach = big + r * (1.0 - rng.gen_range(0.1..1.0));
        let c: Vec<_> = (0..3).map(|k| rat(((p[k] + d[k] / len * reach) * 4.0).round() as i64, 4)).collect();
        let s = Site::new([c[0].clone(), c[1].clone(), c[2].clone()], rat(quarters, 4));
        if !disjoint_from(&s, &[&t[0], &t[1], &t[2]]) || !disjoint_from(&s, avoid) {
            continue;
        }
        if let Ok((ShadowType::Interval, _)) = oracle::shadow_classify_numeric(&t[0], &t[1], &t[2], &s) {
            return s;
        }
    }
    shadow_site(rng, t, avoid, false)
}

/// Random instance for `p`. Triples for the trisector-based predicates are
/// drawn until the oracle finds them hyperbolic, and the extra sites are
/// biased towards non-empty shadows.
pub fn generate(p: Predicate, rng: &mut ChaCha8Rng) -> Vec<Site> {
    let flat = rng.gen_bool(0.2);
    match p {
        Predicate::Incone => loop {
            let a = random_site(rng, flat);
            let b = random_site(rng, flat);
            if check_sites(&[&a, &b]).is_err() {
                continue;
            }
            let c = if rng.gen_bool(0.5) {
                nearby_site(rng, &[&a, &b], flat)
            } else {
                random_site(rng, flat)
            };
            return vec![a, b, c];
        },
        Predicate::Trisector => loop {
            let t = [random_site(rng, flat), random_site(rng, flat), nearby_site(rng, &[], flat)];
            let t = if rng.gen_bool(0.5) {
                let c = nearby_site(rng, &[&t[0], &t[1]], flat);
                [t[0].clone(), t[1].clone(), c]
            } else {
                t
            };
            if check_sites(&[&t[0], &t[1], &t[2]]).is_ok() {
                return t.to_vec();
            }
        },
        Predicate::Distance | Predicate::Shadow | Predicate::Existence => {
            let t = hyperbolic_triple(rng, flat);
            let a = shadow_site(rng, &t, &[], flat);
            let mut v = t.to_vec();
            v.push(a);
            if p == Predicate::Existence && rng.gen_bool(0.5) {
                v.rotate_left(rng.gen_range(1..4));
            }
            v
        }
        Predicate::Insphere => {
            let t = hyperbolic_triple(rng, flat);
            let a = shadow_site(rng, &t, &[], flat);
            let q = shadow_site(rng, &t, &[&a], flat);
            let mut v = vec![t[0].clone(), t[1].clone(), t[2].clone(), a];
            if rng.gen_bool(0.5) {
                v.swap(1, 2);
            }
            v.push(q);
            v
        }
        Predicate::Order => {
            let t = hyperbolic_triple(rng, flat);
            let (a, b) = if rng.gen_bool(0.25) {
                let (at, bt) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
                let a = interval_site(rng, &t, &[], at);
                let b = interval_site(rng, &t, &[&a], bt);
                (a, b)
            } else {
                let a = shadow_site(rng, &t, &[], flat);
                let b = shadow_site(rng, &t, &[&a], flat);
                (a, b)
            };
            vec![t[0].clone(), t[1].clone(), t[2].clone(), a, b]
        }
        Predicate::EdgeConflict => loop {
            let t = hyperbolic_triple(rng, flat);
            let l = shadow_site(rng, &t, &[], flat);
            let m = shadow_site(rng, &t, &[&l], flat);
            let edge = EdgeSpec::new(t[0].clone(), t[1].clone(), t[2].clone(), l.clone(), m.clone());
            if oracle::edge_interval_numeric(&edge).is_err() {
                continue;
            }
            let q = shadow_site(rng, &t, &[&l, &m], flat);
            return vec![t[0].clone(), t[1].clone(), t[2].clone(), l, m, q];
        },
    }
}

/// Result of one comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree { tag: Option<String> },
    Disagree { exact: String, oracle: String },
    /// The oracle could not decide with a clear margin.
    Discarded,
    /// The exact predicate reported a degenerate configuration.
    Degenerate,
    /// The instance violates a precondition of the exact predicate.
    Precondition(GeomError),
}

/// Compares the exact predicate with the oracle on one instance, recording
/// the degrees of the exact sign tests in `log`.
pub fn compare(p: Predicate, s: &[Site], log: &mut AuditLog) -> Verdict {
    let (exact, l) = audit::with_audit(|| exact_outcome_traced(p, s));
    log.merge(&l);
    let (exact, tag) = match exact {
        Ok(e) => e,
        Err(e) if e.is_degeneracy() => return Verdict::Degenerate,
        Err(GeomError::NotHyperbolic) => (GeomError::NotHyperbolic.token().to_string(), None),
        Err(e) => return Verdict::Precondition(e),
    };
    let oracle = match oracle_outcome(p, s) {
        Ok(o) => o,
        Err(OracleError::NotHyperbolic) => GeomError::NotHyperbolic.token().to_string(),
        Err(_) => return Verdict::Discarded,
    };
    if exact == oracle {
        Verdict::Agree { tag }
    } else {
        Verdict::Disagree { exact, oracle }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FuzzReport {
    pub predicate: Option<Predicate>,
    pub compared: usize,
    pub agreed: usize,
    pub discarded: usize,
    pub degenerate: usize,
    pub precondition: usize,
    /// Instances per Order case tag.
    pub tags: BTreeMap<String, usize>,
    /// Up to ten disagreeing instances with both answers.
    pub mismatches: Vec<(u64, String, String)>,
    pub audit: AuditLog,
}

impl FuzzReport {
    pub fn all_agree(&self) -> bool {
        self.compared == self.agreed
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.predicate.map_or("?", |p| p.token());
        write!(
            f,
            "{name}: compared {}, agreed {}, discarded {}, degenerate {}, precondition {}, max_degree={}",
            self.compared, self.agreed, self.discarded, self.degenerate, self.precondition, self.audit.max_degree
        )
    }
}

/// Instance `index` of the campaign for `p` with `seed`.
pub fn campaign_instance(p: Predicate, seed: u64, index: u64) -> Vec<Site> {
    generate(p, &mut instance_rng(seed ^ (p as u64) << 56, index))
}

/// Runs `count` instances of `p` for `seed` in parallel.
pub fn run_campaign(p: Predicate, seed: u64, count: u64) -> FuzzReport {
    let results: Vec<(u64, Verdict, AuditLog, String)> = (0..count)
        .into_par_iter()
        .map(|index| {
            let sites = campaign_instance(p, seed, index);
            let mut log = AuditLog::default();
            let v = compare(p, &sites, &mut log);
            let text = match &v {
                Verdict::Disagree { .. } => sites.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
                _ => String::new(),
            };
            (index, v, log, text)
        })
        .collect();
    let mut report = FuzzReport {
        predicate: Some(p),
        ..FuzzReport::default()
    };
    for (index, v, log, text) in results {
        report.audit.merge(&log);
        match v {
            Verdict::Agree { tag } => {
                report.compared += 1;
                report.agreed += 1;
                if let Some(t) = tag {
                    *report.tags.entry(t).or_default() += 1;
                }
            }
            Verdict::Disagree { exact, oracle } => {
                report.compared += 1;
                if report.mismatches.len() < 10 {
                    report.mismatches.push((index, format!("{text}: exact {exact}"), oracle));
                }
            }
            Verdict::Discarded => report.discarded += 1,
            Verdict::Degenerate => report.degenerate += 1,
            Verdict::Precondition(_) => report.precondition += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn campaigns_are_deterministic() {
        let a = run_campaign(Predicate::Shadow, 7, 40);
        let b = run_campaign(Predicate::Shadow, 7, 40);
        assert_eq!((a.compared, a.agreed, a.discarded), (b.compared, b.agreed, b.discarded));
        let x = generate(Predicate::Order, &mut instance_rng(3, 11));
        let y = generate(Predicate::Order, &mut instance_rng(3, 11));
        assert_eq!(x, y);
    }

    #[test]
    fn small_campaigns_agree() {
        for &p in Predicate::ALL {
            let r = run_campaign(p, 1, 60);
            assert!(r.all_agree(), "{r} {:?}", r.mismatches);
            assert!(r.compared > 0, "{r}");
        }
    }
}
