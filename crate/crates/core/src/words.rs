//! Words over `{a, b}` in `BS(m,n) = <a, b | b^-1 a^m b = a^n>`.
//!
//! Elements are stored as freely reduced syllable sequences with
//! arbitrary-precision exponents. The word problem is solved by Britton
//! reduction: pinches `b^-1 a^(km) b -> a^(kn)` and `b a^(kn) b^-1 -> a^(km)`
//! are removed until none remain, and a pinch-free word is trivial exactly
//! when it has no `b` letters and no `a` exponent.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("Baumslag-Solitar parameters must be nonzero (got m = {m}, n = {n})")]
    ZeroParameter { m: i64, n: i64 },
    #[error("cannot parse word at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// The parameters `(m, n)` of `BS(m,n)`. Both are nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BsParams {
    m: i64,
    n: i64,
}

impl BsParams {
    pub fn new(m: i64, n: i64) -> Result<Self, WordError> {
        if m == 0 || n == 0 {
            return Err(WordError::ZeroParameter { m, n });
        }
        Ok(BsParams { m, n })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Modulus for `a` exponents in front of an outgoing `b`.
    pub fn out_degree(&self) -> u64 {
        self.m.unsigned_abs()
    }

    /// Modulus for `a` exponents in front of an incoming `b^-1`.
    pub fn in_degree(&self) -> u64 {
        self.n.unsigned_abs()
    }

    /// `m > 0` and `m >= |n|`.
    pub fn is_normalized(&self) -> bool {
        self.m > 0 && self.m.unsigned_abs() >= self.n.unsigned_abs()
    }
}

impl fmt::Display for BsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BS({},{})", self.m, self.n)
    }
}

/// Result of [`normalize_params`]: the normalized parameters together with
/// the isomorphisms used to reach them.
///
/// `BS(m,n) -> BS(n,m)` sends `a -> a, b -> b^-1`; `BS(m,n) -> BS(-m,-n)` is
/// the identity on words (the relation is merely inverted). Both maps are
/// involutions, so translating back applies the same substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Normalization {
    pub original: BsParams,
    pub params: BsParams,
    pub swapped: bool,
    pub negated: bool,
}

impl Normalization {
    /// Image of a word of `BS(original)` in `BS(params)`.
    pub fn to_normalized(&self, w: &Word) -> Word {
        self.translate(w)
    }

    /// Image of a word of `BS(params)` in `BS(original)`.
    pub fn from_normalized(&self, w: &Word) -> Word {
        self.translate(w)
    }

    fn translate(&self, w: &Word) -> Word {
        if !self.swapped {
            return w.clone();
        }
        Word {
            syllables: w
                .syllables
                .iter()
                .map(|s| match s.letter {
                    Letter::A => s.clone(),
                    Letter::B => Syllable::new(Letter::B, -&s.exp),
                })
                .collect(),
        }
    }
}

pub fn normalize_params(m: i64, n: i64) -> Result<Normalization, WordError> {
    let original = BsParams::new(m, n)?;
    let (mut m2, mut n2) = (m, n);
    let swapped = m.unsigned_abs() < n.unsigned_abs();
    if swapped {
        std::mem::swap(&mut m2, &mut n2);
    }
    let negated = m2 < 0;
    if negated {
        m2 = -m2;
        n2 = -n2;
    }
    Ok(Normalization {
        original,
        params: BsParams { m: m2, n: n2 },
        swapped,
        negated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

/// `+1` or `-1`, used for `b` letters and for tree orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(value: &BigInt) -> Sign {
        if value.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub letter: Letter,
    pub exp: BigInt,
}

impl Syllable {
    pub fn new(letter: Letter, exp: impl Into<BigInt>) -> Self {
        Syllable {
            letter,
            exp: exp.into(),
        }
    }
}

/// A freely reduced word: adjacent syllables never share a letter and no
/// exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn a(exp: impl Into<BigInt>) -> Self {
        Word::free_reduce([Syllable::new(Letter::A, exp)])
    }

    pub fn b(exp: impl Into<BigInt>) -> Self {
        Word::free_reduce([Syllable::new(Letter::B, exp)])
    }

    /// Merge equal neighbours and drop zero exponents.
    pub fn free_reduce(raw: impl IntoIterator<Item = Syllable>) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for syl in raw {
            if syl.exp.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.letter == syl.letter => {
                    last.exp += syl.exp;
                    if last.exp.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(syl),
            }
        }
        Word { syllables: out }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        Word::free_reduce(self.syllables.iter().chain(&other.syllables).cloned())
    }

    pub fn invert(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.letter, -&s.exp))
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// `self * x * self^-1`.
    pub fn conjugate(&self, x: &Word) -> Word {
        self.multiply(x).multiply(&self.invert())
    }

    /// The homomorphism `f: BS(m,n) -> Z` killing `a`.
    pub fn b_exponent_sum(&self) -> BigInt {
        self.syllables
            .iter()
            .filter(|s| s.letter == Letter::B)
            .map(|s| &s.exp)
            .sum()
    }
}

impl<'a> std::ops::Mul<&'a Word> for &'a Word {
    type Output = Word;
    fn mul(self, rhs: &'a Word) -> Word {
        self.multiply(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, syl) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let ch = match (syl.letter, syl.exp.is_negative()) {
                (Letter::A, false) => 'a',
                (Letter::A, true) => 'A',
                (Letter::B, false) => 'b',
                (Letter::B, true) => 'B',
            };
            let mag = syl.exp.abs();
            if mag.is_one() {
                write!(f, "{ch}")?;
            } else {
                write!(f, "{ch}^{mag}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Letters `a`, `b`, `A = a^-1`, `B = b^-1`, each with an optional
    /// `^<int>` power. Whitespace between tokens is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut raw = Vec::new();
        let err = |position: usize, message: &str| WordError::Parse {
            position,
            message: message.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let (letter, inverted) = match bytes[pos] {
                b'a' => (Letter::A, false),
                b'A' => (Letter::A, true),
                b'b' => (Letter::B, false),
                b'B' => (Letter::B, true),
                _ => return Err(err(pos, "expected one of a, b, A, B")),
            };
            pos += 1;
            let mut exp = BigInt::one();
            let mut look = pos;
            skip_ws(&mut look);
            if look < bytes.len() && bytes[look] == b'^' {
                pos = look + 1;
                skip_ws(&mut pos);
                let start = pos;
                if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                    pos += 1;
                }
                let digits = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == digits {
                    return Err(err(pos, "expected an integer after '^'"));
                }
                exp = s[start..pos]
                    .trim_start_matches('+')
                    .parse()
                    .map_err(|_| err(start, "invalid exponent"))?;
            }
            if inverted {
                exp = -exp;
            }
            raw.push(Syllable { letter, exp });
        }
        Ok(Word::free_reduce(raw))
    }
}

/// A pinch-free word `a^s0 b^e1 a^s1 ... b^ek a^sk`.
///
/// Pinch-free forms are not unique; compare elements with [`words_equal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrittonForm {
    a_exponents: Vec<BigInt>,
    b_signs: Vec<Sign>,
}

impl BrittonForm {
    pub fn a_exponents(&self) -> &[BigInt] {
        &self.a_exponents
    }

    pub fn b_signs(&self) -> &[Sign] {
        &self.b_signs
    }

    /// Number of `b` letters, `k`.
    pub fn b_length(&self) -> usize {
        self.b_signs.len()
    }

    pub fn is_identity(&self) -> bool {
        self.b_signs.is_empty() && self.a_exponents[0].is_zero()
    }

    pub fn to_word(&self) -> Word {
        let mut raw = Vec::with_capacity(2 * self.b_signs.len() + 1);
        raw.push(Syllable::new(Letter::A, self.a_exponents[0].clone()));
        for (sign, s) in self.b_signs.iter().zip(&self.a_exponents[1..]) {
            raw.push(Syllable::new(Letter::B, sign.value()));
            raw.push(Syllable::new(Letter::A, s.clone()));
        }
        Word::free_reduce(raw)
    }

    /// Whether some `b^-1 a^s b` with `m | s` or `b a^s b^-1` with `n | s`
    /// remains.
    pub fn has_pinch(&self, p: &BsParams) -> bool {
        self.b_signs.windows(2).enumerate().any(|(i, w)| {
            let s = &self.a_exponents[i + 1];
            match (w[0], w[1]) {
                (Sign::Minus, Sign::Plus) => s.is_multiple_of(&BigInt::from(p.m())),
                (Sign::Plus, Sign::Minus) => s.is_multiple_of(&BigInt::from(p.n())),
                _ => false,
            }
        })
    }
}

impl fmt::Display for BrittonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

/// Remove pinches until the word is pinch-free.
///
/// The word is scanned left to right onto a stack whose contents are always
/// pinch-free; a pinch can only appear when a `b` letter is pushed, and it
/// is resolved immediately, so the leftmost completed pinch goes first.
pub fn britton_reduce(w: &Word, p: &BsParams) -> BrittonForm {
    let m = BigInt::from(p.m());
    let n = BigInt::from(p.n());
    let mut a_exps = vec![BigInt::zero()];
    let mut signs: Vec<Sign> = Vec::new();
    for syl in w.syllables() {
        match syl.letter {
            Letter::A => *a_exps.last_mut().expect("nonempty") += &syl.exp,
            Letter::B => {
                let e = Sign::of(&syl.exp);
                let mut count = syl.exp.abs();
                while count.is_positive() {
                    count -= 1;
                    let top = a_exps.last().expect("nonempty");
                    // b^-1 a^(km) b = a^(kn) and b a^(kn) b^-1 = a^(km)
                    let pinch = match (signs.last(), e) {
                        (Some(Sign::Minus), Sign::Plus) if top.is_multiple_of(&m) => {
                            Some(top / &m * &n)
                        }
                        (Some(Sign::Plus), Sign::Minus) if top.is_multiple_of(&n) => {
                            Some(top / &n * &m)
                        }
                        _ => None,
                    };
                    match pinch {
                        Some(merged) => {
                            a_exps.pop();
                            signs.pop();
                            *a_exps.last_mut().expect("nonempty") += merged;
                        }
                        None => {
                            signs.push(e);
                            a_exps.push(BigInt::zero());
                        }
                    }
                }
            }
        }
    }
    BrittonForm {
        a_exponents: a_exps,
        b_signs: signs,
    }
}

pub fn is_identity(w: &Word, p: &BsParams) -> bool {
    britton_reduce(w, p).is_identity()
}

pub fn words_equal(u: &Word, v: &Word, p: &BsParams) -> bool {
    is_identity(&u.multiply(&v.invert()), p)
}

/// Whether `w` lies in the vertex group `H = <a>`.
pub fn in_vertex_group(w: &Word, p: &BsParams) -> bool {
    britton_reduce(w, p).b_length() == 0
}

pub fn b_exponent_sum(w: &Word) -> BigInt {
    w.b_exponent_sum()
}

/// Deterministic generator for one `(seed, stream)` pair.
///
/// Streams give independent sequences from a single user seed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws syllables with a geometric exponent magnitude capped at `3|m|`.
pub fn sample_word<R: Rng>(p: &BsParams, length: usize, rng: &mut R) -> Word {
    let cap = 3 * p.out_degree().max(1);
    let mut letter = if rng.gen_bool(0.5) { Letter::A } else { Letter::B };
    let mut raw = Vec::with_capacity(length);
    for _ in 0..length {
        let mut mag: u64 = 1;
        while mag < cap && rng.gen_bool(0.5) {
            mag += 1;
        }
        let exp = if rng.gen_bool(0.5) {
            BigInt::from(mag)
        } else {
            -BigInt::from(mag)
        };
        raw.push(Syllable { letter, exp });
        letter = match letter {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        };
    }
    Word::free_reduce(raw)
}

/// Appends `b^-t` where `t` is the `b`-exponent sum, so the result lies in
/// the kernel of `f`.
pub fn sample_ker_f_word<R: Rng>(p: &BsParams, length: usize, rng: &mut R) -> Word {
    let w = sample_word(p, length, rng);
    let t = w.b_exponent_sum();
    w.multiply(&Word::b(-t))
}

pub fn random_word(p: &BsParams, length: usize, seed: u64) -> Word {
    sample_word(p, length, &mut rng_for(seed, 0))
}

pub fn random_ker_f_word(p: &BsParams, length: usize, seed: u64) -> Word {
    sample_ker_f_word(p, length, &mut rng_for(seed, 0))
}
