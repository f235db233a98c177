//! The mapping class group of the torus, realized as SL(2, Z).
//!
//! Curves on the torus are primitive column vectors `(x, y)` whose slope is
//! `y/x`; `(1, 0)` is slope 0 and `(0, 1)` is slope ∞. The right-handed Dehn
//! twist along `c` acts by `v ↦ v + ⟨c, v⟩·c` with `⟨u, v⟩ = u_x v_y − u_y v_x`,
//! so the twist along slope 0 is `[[1, 1], [0, 1]]` and its inverse is
//! `[[1, −1], [0, 1]]`.
//!
//! Words are read as function composition: the leftmost factor is applied
//! last. Everything lives in SL(2, Z) itself, not PSL, so `(a³b)³ = +I`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::BigIntText;

/// An essential simple closed curve on the torus, up to isotopy and orientation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    x: BigInt,
    y: BigInt,
}

impl Slope {
    /// Canonical slope of a primitive vector. The sign is normalized so that
    /// `x > 0`, or the vector is `(0, 1)`.
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self> {
        let (x, y) = (x.into(), y.into());
        if x.is_zero() && y.is_zero() {
            return Err(Error::Contract("the zero vector is not a slope".into()));
        }
        if !x.gcd(&y).is_one() {
            return Err(Error::Contract(format!("({x}, {y}) is not primitive")));
        }
        Ok(Self::canonical(x, y))
    }

    /// Slope of an arbitrary nonzero vector, dividing out the gcd first.
    pub fn reduced(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self> {
        let (x, y) = (x.into(), y.into());
        if x.is_zero() && y.is_zero() {
            return Err(Error::Contract("the zero vector is not a slope".into()));
        }
        let g = x.gcd(&y);
        Ok(Self::canonical(x / &g, y / &g))
    }

    fn canonical(x: BigInt, y: BigInt) -> Self {
        if x.is_negative() || (x.is_zero() && y.is_negative()) {
            Slope { x: -x, y: -y }
        } else {
            Slope { x, y }
        }
    }

    /// Slope 0, the curve `a`.
    pub fn zero() -> Self {
        Slope {
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    /// Slope ∞, the curve `b`.
    pub fn infinity() -> Self {
        Slope {
            x: BigInt::zero(),
            y: BigInt::one(),
        }
    }

    /// The integral slope `m`, i.e. the vector `(1, m)`.
    pub fn integer(m: impl Into<BigInt>) -> Self {
        Slope {
            x: BigInt::one(),
            y: m.into(),
        }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinite(&self) -> bool {
        self.x.is_zero()
    }

    /// Algebraic intersection number `⟨self, other⟩`.
    pub fn pairing(&self, other: &Slope) -> BigInt {
        &self.x * &other.y - &self.y * &other.x
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_zero() {
            write!(f, "inf")
        } else if self.x.is_one() {
            write!(f, "{}", self.y)
        } else {
            write!(f, "{}/{}", self.y, self.x)
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Slope({})", self)
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `inf`/`∞`, an integer `m`, a fraction `p/q` (value `p/q`), or `x,y`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Input(format!("cannot read slope {s:?}"));
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Slope::infinity());
        }
        let num = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        if let Some((p, q)) = s.split_once('/') {
            return Slope::reduced(num(q)?, num(p)?);
        }
        if let Some((x, y)) = s.split_once(',') {
            return Slope::reduced(num(x)?, num(y)?);
        }
        Ok(Slope::integer(num(s)?))
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([BigIntText; 2]),
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Pair([x, y]) => Slope::new(x.0, y.0).map_err(de::Error::custom),
            Repr::Int(m) => Ok(Slope::integer(m)),
            Repr::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

/// A 2x2 integer matrix of determinant one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sl2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Sl2 {
    /// The matrix `[[a, b], [c, d]]`.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = Sl2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if !(&m.a * &m.d - &m.b * &m.c).is_one() {
            return Err(Error::Contract(format!("{m} does not have determinant 1")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Sl2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Sl2::identity()
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> Sl2 {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Sl2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `M·(x, y)ᵀ`.
    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sl2{}", self)
    }
}

impl Serialize for Sl2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [
            [self.a.to_string(), self.b.to_string()],
            [self.c.to_string(), self.d.to_string()],
        ]
        .serialize(serializer)
    }
}

/// Right-handed Dehn twist along `c = (x, y)`: `[[1 − xy, x²], [−y², 1 + xy]]`.
pub fn twist_matrix(c: &Slope) -> Sl2 {
    let (x, y) = (&c.x, &c.y);
    let xy = x * y;
    Sl2 {
        a: BigInt::one() - &xy,
        b: x * x,
        c: -(y * y),
        d: BigInt::one() + xy,
    }
}

/// Image of a slope under a matrix.
pub fn act_on_slope(m: &Sl2, s: &Slope) -> Slope {
    let (x, y) = m.apply(&s.x, &s.y);
    // SL(2, Z) preserves primitivity
    Slope::canonical(x, y)
}

/// One factor `D_c^k` of a twist word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TwistFactor {
    pub slope: Slope,
    pub exp: i64,
}

impl TwistFactor {
    pub fn new(slope: Slope, exp: i64) -> Self {
        TwistFactor { slope, exp }
    }
}

/// An ordered product of Dehn twist powers, kept in normal form: no zero
/// exponents and no two adjacent factors along the same slope.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TwistWord {
    factors: Vec<TwistFactor>,
}

impl TwistWord {
    pub fn new(factors: impl IntoIterator<Item = TwistFactor>) -> Self {
        let mut out: Vec<TwistFactor> = Vec::new();
        for f in factors {
            if f.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.slope == f.slope => {
                    last.exp += f.exp;
                    if last.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(f),
            }
        }
        TwistWord { factors: out }
    }

    pub fn empty() -> Self {
        TwistWord::default()
    }

    /// `a^k`, the twist along slope 0.
    pub fn a(k: i64) -> Self {
        TwistWord::new([TwistFactor::new(Slope::zero(), k)])
    }

    /// `b^k`, the twist along slope ∞.
    pub fn b(k: i64) -> Self {
        TwistWord::new([TwistFactor::new(Slope::infinity(), k)])
    }

    pub fn factors(&self) -> &[TwistFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The word `self · other`.
    pub fn then(&self, other: &TwistWord) -> TwistWord {
        TwistWord::new(self.factors.iter().chain(other.factors.iter()).cloned())
    }

    pub fn pow(&self, k: u32) -> TwistWord {
        (0..k).fold(TwistWord::empty(), |acc, _| acc.then(self))
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord::new(
            self.factors
                .iter()
                .rev()
                .map(|f| TwistFactor::new(f.slope.clone(), -f.exp)),
        )
    }

    /// True when every exponent is positive (a product of right-handed twists).
    pub fn is_positive(&self) -> bool {
        self.factors.iter().all(|f| f.exp > 0)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|t| {
                let name = if t.slope == Slope::zero() {
                    "a".to_string()
                } else if t.slope == Slope::infinity() {
                    "b".to_string()
                } else {
                    format!("D[{}]", t.slope)
                };
                if t.exp == 1 {
                    name
                } else {
                    format!("{name}^{}", t.exp)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for TwistWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factor<'a> {
            slope: &'a Slope,
            exp: String,
        }
        let v: Vec<Factor> = self
            .factors
            .iter()
            .map(|f| Factor {
                slope: &f.slope,
                exp: f.exp.to_string(),
            })
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TwistWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Factor {
            slope: Slope,
            exp: crate::json::IntText,
        }
        let raw: Vec<Factor> = Vec::deserialize(deserializer)?;
        if raw.iter().any(|f| f.exp.0 == 0) {
            return Err(de::Error::custom("exponent 0 is not allowed"));
        }
        Ok(TwistWord::new(
            raw.into_iter().map(|f| TwistFactor::new(f.slope, f.exp.0)),
        ))
    }
}

/// Product of the factor matrices in word order.
pub fn eval_word(w: &TwistWord) -> Sl2 {
    w.factors.iter().fold(Sl2::identity(), |acc, f| {
        acc.mul(&twist_matrix(&f.slope).pow(f.exp))
    })
}

pub fn is_identity_word(w: &TwistWord) -> bool {
    eval_word(w).is_identity()
}

/// The conjugate `g·w·g⁻¹`, written as twists along the translated slopes.
pub fn conjugate_word(w: &TwistWord, g: &TwistWord) -> TwistWord {
    let m = eval_word(g);
    TwistWord::new(
        w.factors
            .iter()
            .map(|f| TwistFactor::new(act_on_slope(&m, &f.slope), f.exp)),
    )
}

/// Slope of each factor, in order.
pub fn layer_slopes(w: &TwistWord) -> Vec<Slope> {
    w.factors.iter().map(|f| f.slope.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonodromyKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for MonodromyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MonodromyKind::Elliptic => "elliptic",
            MonodromyKind::Parabolic => "parabolic",
            MonodromyKind::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

/// Conjugacy-invariant type of a torus bundle monodromy.
///
/// `kind` is decided by `|trace|` alone, so `−I` reads as parabolic; its
/// finite `order` (2) is what tells it apart from a genuine parabolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyClass {
    pub kind: MonodromyKind,
    pub trace: BigInt,
    /// `None` when no power up to 12 is the identity.
    pub order: Option<u32>,
}

const MAX_FINITE_ORDER: u32 = 12;

pub fn classify_monodromy(m: &Sl2) -> MonodromyClass {
    let trace = m.trace();
    let two = BigInt::from(2);
    let kind = match trace.abs().cmp(&two) {
        std::cmp::Ordering::Less => MonodromyKind::Elliptic,
        std::cmp::Ordering::Equal => MonodromyKind::Parabolic,
        std::cmp::Ordering::Greater => MonodromyKind::Hyperbolic,
    };
    let mut acc = m.clone();
    let mut order = None;
    for k in 1..=MAX_FINITE_ORDER {
        if acc.is_identity() {
            order = Some(k);
            break;
        }
        acc = acc.mul(m);
    }
    MonodromyClass { kind, trace, order }
}
