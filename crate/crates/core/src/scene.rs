//! Scene files: named sites with exact rational coordinates.
//!
//! ```text
//! # comment
//! site i 0 0 0 1
//! site a 2 1/2 0.25 1
//! ```
//!
//! Numbers are integers, `p/q` fractions, or finite decimals; decimals are
//! converted to rationals digit by digit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::kernel::Rational;
use crate::sites::Site;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate site id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: site `{id}` has a negative radius")]
    NegativeRadius { line: usize, id: String },
}

/// Sites in file order, addressed by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scene {
    sites: Vec<(String, Site)>,
}

impl Scene {
    pub fn new() -> Self {
        Scene::default()
    }

    pub fn get(&self, id: &str) -> Option<&Site> {
        self.sites.iter().find(|(n, _)| n == id).map(|(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Site)> {
        self.sites.iter().map(|(n, s)| (n.as_str(), s))
    }

    /// Adds a site; returns `false` and leaves the scene unchanged when the
    /// id is taken.
    pub fn insert(&mut self, id: &str, site: Site) -> bool {
        if self.get(id).is_some() {
            return false;
        }
        self.sites.push((id.to_string(), site));
        true
    }
}

impl fmt::Display for Scene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, s) in &self.sites {
            let [x, y, z] = &s.center;
            writeln!(f, "site {id} {x} {y} {z} {}", s.radius)?;
        }
        Ok(())
    }
}

impl FromStr for Scene {
    type Err = SceneError;
    fn from_str(text: &str) -> Result<Scene, SceneError> {
        parse_scene(text)
    }
}

/// Parses an integer, a fraction `p/q` or a finite decimal exactly.
pub fn parse_number(token: &str) -> Option<Rational> {
    if let Some((p, q)) = token.split_once('/') {
        let p = BigInt::from_str(p).ok()?;
        let q = BigInt::from_str(q).ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    let (negative, digits) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let well_formed = !(int_part.is_empty() && frac_part.is_empty())
        && int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit());
    if !well_formed {
        return None;
    }
    let mantissa = BigInt::from_str(&format!("{int_part}{frac_part}")).ok()?;
    let scale = BigInt::from(10).pow(frac_part.len() as u32);
    let value = Rational::new(mantissa, scale);
    Some(if negative { -value } else { value })
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut scene = Scene::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let err = |message: String| SceneError::Parse { line, message };
        if words[0] != "site" {
            return Err(err(format!("expected `site`, found `{}`", words[0])));
        }
        if words.len() != 6 {
            return Err(err(format!("expected `site <id> <x> <y> <z> <r>`, found {} fields", words.len())));
        }
        let id = words[1];
        let mut nums = Vec::with_capacity(4);
        for w in &words[2..] {
            nums.push(parse_number(w).ok_or_else(|| err(format!("invalid number `{w}`")))?);
        }
        let radius = nums.pop().expect("four numbers");
        if radius.is_negative() {
            return Err(SceneError::NegativeRadius { line, id: id.to_string() });
        }
        let center = [nums[0].clone(), nums[1].clone(), nums[2].clone()];
        if !scene.insert(id, Site::new(center, radius)) {
            return Err(SceneError::DuplicateId { line, id: id.to_string() });
        }
    }
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = parse_scene("site a 0 0 0 1").unwrap();
        assert_eq!(s.get("a"), Some(&Site::from_ints(0, 0, 0, 1)));
        let s = parse_scene("# header\n\nsite a 1/3 0 0 0.25  # trailing\n").unwrap();
        assert_eq!(s.get("a"), Some(&Site::new([rat(1, 3), int(0), int(0)], rat(1, 4))));
        assert_eq!(
            parse_scene("site a 0 0 0 -1"),
            Err(SceneError::NegativeRadius { line: 1, id: "a".into() })
        );
        assert_eq!(
            parse_scene("site a 0 0 0 1\nsite a 1 1 1 1"),
            Err(SceneError::DuplicateId { line: 2, id: "a".into() })
        );
        assert!(matches!(parse_scene("site a 0 0 x 1"), Err(SceneError::Parse { line: 1, .. })));
        assert!(matches!(parse_scene("\nsphere a 0 0 0 1"), Err(SceneError::Parse { line: 2, .. })));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("-2.5"), Some(rat(-5, 2)));
        assert_eq!(parse_number(".5"), Some(rat(1, 2)));
        assert_eq!(parse_number("7."), Some(int(7)));
        assert_eq!(parse_number("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_number("0.1"), Some(rat(1, 10)));
        for bad in ["", ".", "1/0", "1e3", "--1", "1.2.3", "inf"] {
            assert_eq!(parse_number(bad), None, "{bad}");
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..50).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn scenes_round_trip(sites in prop::collection::vec((arb_rational(), arb_rational(), arb_rational(), arb_rational()), 0..8)) {
            let mut scene = Scene::new();
            for (n, (x, y, z, r)) in sites.into_iter().enumerate() {
                scene.insert(&format!("s{n}"), Site::new([x, y, z], num_traits::Signed::abs(&r)));
            }
            prop_assert_eq!(parse_scene(&scene.to_string()).unwrap(), scene);
        }
    }
}
