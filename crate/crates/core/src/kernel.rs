//! Exact arithmetic kernel: signs, degree-tagged rationals, quadratic
//! extension scalars and the sign-test audit log.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GeomError, GeomResult};

pub type Rational = BigRational;

/// Builds the rational `num / den`. Panics when `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossy conversion used by the floating point oracle and diagnostics.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators overflow the direct
        // conversion; fall back to a ratio of rescaled parts.
        let n = q.numer();
        let d = q.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Three-valued sign with the total order NEG < ZERO < POS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(q: &Rational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn from_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn is_pos(self) -> bool {
        self == Sign::Pos
    }

    pub fn is_neg(self) -> bool {
        self == Sign::Neg
    }

    /// `(-1)^k` as a sign.
    pub fn parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Sign::Neg => "NEG",
            Sign::Zero => "ZERO",
            Sign::Pos => "POS",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "NEG" => Some(Sign::Neg),
            "ZERO" => Some(Sign::Zero),
            "POS" => Some(Sign::Pos),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i32() * rhs.as_i32() {
            0 => Sign::Zero,
            1 => Sign::Pos,
            _ => Sign::Neg,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Per-invocation log of sign tests and the algebraic degree of each tested
/// quantity.
pub mod audit {
    use std::cell::RefCell;
    use std::collections::BTreeMap;

    /// Tag for ordinary sign tests.
    pub const GENERAL: &str = "general";
    /// Tag for the auxiliary orientation tests used by the vertex order
    /// tie-break.
    pub const ORDER_ORIENT: &str = "order-orient3d";

    #[derive(Clone, Debug, Default, PartialEq, Eq)]
    pub struct AuditLog {
        pub count: usize,
        pub max_degree: u32,
        pub by_tag: BTreeMap<&'static str, u32>,
    }

    impl AuditLog {
        pub fn record(&mut self, tag: &'static str, degree: u32) {
            self.count += 1;
            self.max_degree = self.max_degree.max(degree);
            let slot = self.by_tag.entry(tag).or_insert(0);
            *slot = (*slot).max(degree);
        }

        pub fn merge(&mut self, other: &AuditLog) {
            self.count += other.count;
            self.max_degree = self.max_degree.max(other.max_degree);
            for (tag, &d) in &other.by_tag {
                let slot = self.by_tag.entry(tag).or_insert(0);
                *slot = (*slot).max(d);
            }
        }

        pub fn max_for(&self, tag: &str) -> u32 {
            self.by_tag.get(tag).copied().unwrap_or(0)
        }
    }

    thread_local! {
        static STACK: RefCell<Vec<AuditLog>> = const { RefCell::new(Vec::new()) };
    }

    /// Records one sign test in the innermost active audit scope, if any.
    pub fn record(tag: &'static str, degree: u32) {
        STACK.with(|s| {
            if let Some(top) = s.borrow_mut().last_mut() {
                top.record(tag, degree);
            }
        });
    }

    /// Runs `f` and returns its result together with every sign test it
    /// performed. Scopes nest; an inner scope's tests are also visible to
    /// the enclosing scope.
    pub fn with_audit<T>(f: impl FnOnce() -> T) -> (T, AuditLog) {
        STACK.with(|s| s.borrow_mut().push(AuditLog::default()));
        let out = f();
        let log = STACK.with(|s| {
            let mut stack = s.borrow_mut();
            let log = stack.pop().unwrap_or_default();
            if let Some(parent) = stack.last_mut() {
                parent.merge(&log);
            }
            log
        });
        (out, log)
    }

    /// Maximum degree over all tests in a log.
    pub fn degree_audit_report(log: &AuditLog) -> u32 {
        log.max_degree
    }
}

/// A rational value together with its algebraic degree in the input
/// coordinates and radii.
///
/// Inputs have degree 1 and constants degree 0. Products add degrees, sums
/// and differences take the maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTagged {
    value: Rational,
    degree: u32,
}

impl DegreeTagged {
    pub fn new(value: Rational, degree: u32) -> Self {
        DegreeTagged { value, degree }
    }

    /// A raw input coordinate or radius.
    pub fn input(value: Rational) -> Self {
        DegreeTagged { value, degree: 1 }
    }

    pub fn constant(value: Rational) -> Self {
        DegreeTagged { value, degree: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        DegreeTagged::constant(int(n))
    }

    pub fn zero() -> Self {
        DegreeTagged::constant(Rational::zero())
    }

    pub fn one() -> Self {
        DegreeTagged::constant(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn into_value(self) -> Rational {
        self.value
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Sign test, recorded in the audit log.
    pub fn sign(&self) -> Sign {
        self.sign_tagged(audit::GENERAL)
    }

    pub fn sign_tagged(&self, tag: &'static str) -> Sign {
        audit::record(tag, self.degree);
        Sign::of(&self.value)
    }

    /// Multiplies by a sign without changing the degree.
    pub fn signed(&self, s: Sign) -> Self {
        match s {
            Sign::Pos => self.clone(),
            Sign::Neg => -self,
            Sign::Zero => DegreeTagged::new(Rational::zero(), self.degree),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn scale(&self, k: i64) -> Self {
        DegreeTagged::new(&self.value * int(k), self.degree)
    }
}

impl fmt::Display for DegreeTagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! dt_binop {
    ($trait:ident, $method:ident, $deg:expr) => {
        impl $trait<&DegreeTagged> for &DegreeTagged {
            type Output = DegreeTagged;
            fn $method(self, rhs: &DegreeTagged) -> DegreeTagged {
                let deg: fn(u32, u32) -> u32 = $deg;
                DegreeTagged {
                    value: (&self.value).$method(&rhs.value),
                    degree: deg(self.degree, rhs.degree),
                }
            }
        }
        impl $trait<DegreeTagged> for DegreeTagged {
            type Output = DegreeTagged;
            fn $method(self, rhs: DegreeTagged) -> DegreeTagged {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&DegreeTagged> for DegreeTagged {
            type Output = DegreeTagged;
            fn $method(self, rhs: &DegreeTagged) -> DegreeTagged {
                (&self).$method(rhs)
            }
        }
        impl $trait<DegreeTagged> for &DegreeTagged {
            type Output = DegreeTagged;
            fn $method(self, rhs: DegreeTagged) -> DegreeTagged {
                self.$method(&rhs)
            }
        }
    };
}

dt_binop!(Add, add, |a, b| a.max(b));
dt_binop!(Sub, sub, |a, b| a.max(b));
dt_binop!(Mul, mul, |a, b| a + b);

impl Neg for &DegreeTagged {
    type Output = DegreeTagged;
    fn neg(self) -> DegreeTagged {
        DegreeTagged {
            value: -&self.value,
            degree: self.degree,
        }
    }
}

impl Neg for DegreeTagged {
    type Output = DegreeTagged;
    fn neg(self) -> DegreeTagged {
        DegreeTagged {
            value: -self.value,
            degree: self.degree,
        }
    }
}

/// Sum of a slice of tagged values; the empty sum is the constant zero.
pub fn sum(terms: &[DegreeTagged]) -> DegreeTagged {
    terms
        .iter()
        .fold(DegreeTagged::zero(), |acc, t| &acc + t)
}

pub type Vec3 = [DegreeTagged; 3];

pub fn vsub(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn vadd(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn vscale(a: &Vec3, k: &DegreeTagged) -> Vec3 {
    [&a[0] * k, &a[1] * k, &a[2] * k]
}

pub fn dot(a: &Vec3, b: &Vec3) -> DegreeTagged {
    &(&a[0] * &b[0]) + &(&(&a[1] * &b[1]) + &(&a[2] * &b[2]))
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn norm2(a: &Vec3) -> DegreeTagged {
    dot(a, a)
}

pub fn det2(a: &DegreeTagged, b: &DegreeTagged, c: &DegreeTagged, d: &DegreeTagged) -> DegreeTagged {
    &(a * d) - &(b * c)
}

/// Determinant of a 3x3 matrix given by rows.
pub fn det3(m: &[Vec3; 3]) -> DegreeTagged {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Determinant of a 4x4 matrix given by rows, by cofactor expansion along
/// the last column.
pub fn det4(m: &[[DegreeTagged; 4]; 4]) -> DegreeTagged {
    let minor = |skip: usize| -> DegreeTagged {
        let rows: Vec<Vec3> = (0..4)
            .filter(|&r| r != skip)
            .map(|r| [m[r][0].clone(), m[r][1].clone(), m[r][2].clone()])
            .collect();
        det3(&[rows[0].clone(), rows[1].clone(), rows[2].clone()])
    };
    let mut acc = DegreeTagged::zero();
    for r in 0..4 {
        let term = &m[r][3] * &minor(r);
        // Cofactor sign for entry (r, 3) is (-1)^(r + 3).
        acc = if (r + 3) % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// An element `a + b * sqrt(disc)` of a real quadratic extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtScalar {
    pub a: DegreeTagged,
    pub b: DegreeTagged,
    pub disc: DegreeTagged,
}

impl QuadExtScalar {
    pub fn new(a: DegreeTagged, b: DegreeTagged, disc: DegreeTagged) -> Self {
        QuadExtScalar { a, b, disc }
    }

    /// A rational element embedded in the extension with discriminant `disc`.
    pub fn rational(a: DegreeTagged, disc: DegreeTagged) -> Self {
        QuadExtScalar {
            a,
            b: DegreeTagged::zero(),
            disc,
        }
    }

    /// The norm `a^2 - b^2 * disc`.
    pub fn norm(&self) -> DegreeTagged {
        &self.a.square() - &(&self.b.square() * &self.disc)
    }

    /// Exact sign, using only the signs of `a`, `b` and the norm.
    pub fn sign(&self) -> GeomResult<Sign> {
        let sd = self.disc.sign();
        if sd.is_neg() {
            return Err(GeomError::NegativeDiscriminant);
        }
        let sa = self.a.sign();
        if sd.is_zero() {
            return Ok(sa);
        }
        let sb = self.b.sign();
        Ok(combine_signs(sa, sb, || self.norm().sign()))
    }

    /// Sign when the discriminant is already known to be positive and the
    /// sign of the norm has been obtained from an equivalent lower degree
    /// expression.
    pub fn sign_given_norm(&self, norm_sign: impl FnOnce() -> Sign) -> Sign {
        let sa = self.a.sign();
        let sb = self.b.sign();
        combine_signs(sa, sb, norm_sign)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(self.a.value()) + to_f64(self.b.value()) * to_f64(self.disc.value()).max(0.0).sqrt()
    }

    fn same_field(&self, other: &QuadExtScalar) {
        debug_assert_eq!(self.disc.value(), other.disc.value(), "mixed quadratic fields");
    }
}

/// Sign of `a + b * sqrt(d)` with `d > 0` from `sign(a)`, `sign(b)` and the
/// sign of `a^2 - b^2 d`. The norm is only evaluated when needed.
pub fn combine_signs(sa: Sign, sb: Sign, norm_sign: impl FnOnce() -> Sign) -> Sign {
    if sb.is_zero() {
        return sa;
    }
    if sa.is_zero() || sa == sb {
        return if sa.is_zero() { sb } else { sa };
    }
    sa * norm_sign()
}

impl Add<&QuadExtScalar> for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn add(self, rhs: &QuadExtScalar) -> QuadExtScalar {
        self.same_field(rhs);
        QuadExtScalar::new(&self.a + &rhs.a, &self.b + &rhs.b, self.disc.clone())
    }
}

impl Sub<&QuadExtScalar> for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn sub(self, rhs: &QuadExtScalar) -> QuadExtScalar {
        self.same_field(rhs);
        QuadExtScalar::new(&self.a - &rhs.a, &self.b - &rhs.b, self.disc.clone())
    }
}

impl Mul<&QuadExtScalar> for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn mul(self, rhs: &QuadExtScalar) -> QuadExtScalar {
        self.same_field(rhs);
        let a = &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * &self.disc);
        let b = &(&self.a * &rhs.b) + &(&self.b * &rhs.a);
        QuadExtScalar::new(a, b, self.disc.clone())
    }
}

impl Neg for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn neg(self) -> QuadExtScalar {
        QuadExtScalar::new(-&self.a, -&self.b, self.disc.clone())
    }
}
