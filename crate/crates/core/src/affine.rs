//! The metabelian group `Gamma(m,n) = Z[1/mn] x|_{m/n} Z` and the
//! representation `phi: BS(m,n) -> Gamma(m,n)`, `a -> (1,0)`, `b -> (0,1)`.
//!
//! Multiplication is `(u,v)(x,y) = (u + (m/n)^v x, v + y)`. Everything is
//! exact; the ratio `m/n` keeps its sign.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::words::{BsParams, Letter, Word};

/// An element `(u, v)` of `Gamma(m,n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaElement {
    pub u: BigRational,
    pub v: i64,
}

impl GammaElement {
    pub fn new(u: BigRational, v: i64) -> Self {
        GammaElement { u, v }
    }

    pub fn from_ints(u: i64, v: i64) -> Self {
        GammaElement {
            u: BigRational::from_integer(u.into()),
            v,
        }
    }

    pub fn identity() -> Self {
        GammaElement::from_ints(0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_zero() && self.v == 0
    }

    /// The projection `p` onto the second coordinate.
    pub fn project_p(&self) -> i64 {
        self.v
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Serialize, Deserialize)]
struct GammaJson {
    u: String,
    v: i64,
}

impl Serialize for GammaElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GammaJson {
            u: self.u.to_string(),
            v: self.v,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GammaJson::deserialize(d)?;
        let u = parse_rational(&raw.u).map_err(D::Error::custom)?;
        Ok(GammaElement { u, v: raw.v })
    }
}

/// Parses `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

/// The cyclic subgroup `<generator>` of `Gamma(m,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSubgroup {
    pub generator: GammaElement,
}

impl CyclicSubgroup {
    pub fn new(generator: GammaElement) -> Self {
        CyclicSubgroup { generator }
    }
}

/// Group operations of `Gamma(m,n)` for fixed parameters.
#[derive(Debug, Clone)]
pub struct Gamma {
    params: BsParams,
    ratio: BigRational,
}

impl Gamma {
    pub fn new(params: BsParams) -> Self {
        Gamma {
            params,
            ratio: BigRational::new(params.m().into(), params.n().into()),
        }
    }

    pub fn params(&self) -> &BsParams {
        &self.params
    }

    /// `(m/n)^v`, signed.
    pub fn ratio_pow(&self, v: i64) -> BigRational {
        Pow::pow(&self.ratio, v)
    }

    pub fn mul(&self, g: &GammaElement, h: &GammaElement) -> GammaElement {
        GammaElement {
            u: &g.u + self.ratio_pow(g.v) * &h.u,
            v: g.v + h.v,
        }
    }

    pub fn inv(&self, g: &GammaElement) -> GammaElement {
        GammaElement {
            u: -(self.ratio_pow(-g.v) * &g.u),
            v: -g.v,
        }
    }

    /// `g^j` in closed form: `(x (Q^j - 1)/(Q - 1), j y)` with `Q = (m/n)^y`,
    /// or `(j x, j y)` when `Q = 1`. The same expression covers `j < 0`.
    pub fn pow(&self, g: &GammaElement, j: i64) -> GammaElement {
        let q = self.ratio_pow(g.v);
        let factor = if q.is_one() {
            BigRational::from_integer(j.into())
        } else {
            (Pow::pow(&q, j) - BigRational::one()) / (q - BigRational::one())
        };
        GammaElement {
            u: &g.u * factor,
            v: g.v.checked_mul(j).expect("second coordinate overflow"),
        }
    }

    pub fn phi(&self, w: &Word) -> GammaElement {
        let mut u = BigRational::zero();
        let mut v: i64 = 0;
        for syl in w.syllables() {
            match syl.letter {
                Letter::A => u += self.ratio_pow(v) * BigRational::from_integer(syl.exp.clone()),
                Letter::B => {
                    v += syl.exp.to_i64().expect("b exponent exceeds i64");
                }
            }
        }
        GammaElement { u, v }
    }

    /// Closed form for `phi(g a^k g^-1)` given `phi(g) = (u, v)`:
    /// `((m/n)^v k, 0)`.
    pub fn conjugation_formula(&self, g_image: &GammaElement, k: &BigInt) -> GammaElement {
        GammaElement {
            u: self.ratio_pow(g_image.v) * BigRational::from_integer(k.clone()),
            v: 0,
        }
    }

    /// Some `j` with `generator^j = g`, if one exists.
    ///
    /// For the trivial subgroup the answer is `Some(0)` exactly when `g` is
    /// the identity.
    pub fn cyclic_membership(&self, c: &CyclicSubgroup, g: &GammaElement) -> Option<BigInt> {
        let gen = &c.generator;
        if gen.v != 0 {
            if g.v % gen.v != 0 {
                return None;
            }
            let j = g.v / gen.v;
            return (self.pow(gen, j) == *g).then(|| BigInt::from(j));
        }
        if !gen.u.is_zero() {
            if g.v != 0 {
                return None;
            }
            let j = &g.u / &gen.u;
            return j.is_integer().then(|| j.to_integer());
        }
        g.is_identity().then(BigInt::zero)
    }

    /// Whether every prime factor of the denominator of `u` divides `m n`.
    pub fn in_ring(&self, u: &BigRational) -> bool {
        let mn = BigInt::from(self.params.m()) * BigInt::from(self.params.n());
        let mut den = u.denom().abs();
        loop {
            let g = den.gcd(&mn);
            if g.is_one() {
                return den.is_one();
            }
            while den.is_multiple_of(&g) {
                den /= &g;
            }
        }
    }
}
