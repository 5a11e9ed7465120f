//! Sparse noncommutative polynomials over the rationals in two letters.
//!
//! A [`Word`] is stored as its length plus a bit string (`x = 0`, `y = 1`)
//! with the first letter in the most significant used bit, so that the
//! derived ordering on `(len, bits)` is exactly the length-lexicographic
//! order with `x < y`. Every weight-`k` word corresponds to one integer in
//! `0..2^k`, which the span solver uses as a dense row index.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Scalar = BigRational;

/// Longest word representable by [`Word`].
pub const MAX_WEIGHT: usize = 64;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::InvalidScalar(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn letter(l: Letter) -> Word {
        Word { len: 1, bits: l.bit() }
    }

    /// Builds the weight-`len` word whose dense code is `bits`.
    ///
    /// Panics if `len > 64` or `bits` does not fit in `len` bits.
    pub fn from_bits(len: usize, bits: u64) -> Word {
        assert!(len <= MAX_WEIGHT, "word length {len} exceeds {MAX_WEIGHT}");
        assert!(len == 64 || bits >> len == 0, "bits do not fit in {len} letters");
        Word { len: len as u8, bits }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Result<Word> {
        let mut w = Word::empty();
        for l in letters {
            if w.weight() == MAX_WEIGHT {
                return Err(Error::WordTooLong(MAX_WEIGHT + 1));
            }
            w.len += 1;
            w.bits = (w.bits << 1) | l.bit();
        }
        Ok(w)
    }

    pub fn weight(&self) -> usize {
        self.len as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `i`, counting from the left.
    pub fn at(&self, i: usize) -> Letter {
        debug_assert!(i < self.weight());
        if (self.bits >> (self.weight() - 1 - i)) & 1 == 0 {
            Letter::X
        } else {
            Letter::Y
        }
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + '_ {
        (0..self.weight()).map(move |i| self.at(i))
    }

    pub fn first(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(0))
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(self.weight() - 1))
    }

    /// Letters `start..end` as a word.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        debug_assert!(start <= end && end <= self.weight());
        let len = end - start;
        let shifted = self.bits >> (self.weight() - end);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Word { len: len as u8, bits: shifted & mask }
    }

    /// Concatenation. Panics if the result would exceed [`MAX_WEIGHT`].
    pub fn concat(&self, other: &Word) -> Word {
        let len = self.weight() + other.weight();
        assert!(len <= MAX_WEIGHT, "word length {len} exceeds {MAX_WEIGHT}");
        let bits = if other.len == 64 { other.bits } else { (self.bits << other.len) | other.bits };
        Word { len: len as u8, bits }
    }

    /// Empty, or starts with `x` and ends with `y`.
    pub fn is_admissible(&self) -> bool {
        self.is_empty() || (self.first() == Some(Letter::X) && self.last() == Some(Letter::Y))
    }

    /// Reverse the letters and swap `x <-> y`.
    pub fn dual(&self) -> Word {
        let mut bits = 0u64;
        for i in 0..self.weight() {
            bits = (bits << 1) | (((self.bits >> i) & 1) ^ 1);
        }
        Word { len: self.len, bits }
    }

    /// All words of the given weight in length-lex order.
    pub fn all_of_weight(k: usize) -> impl Iterator<Item = Word> {
        assert!(k < MAX_WEIGHT, "cannot enumerate words of weight {k}");
        (0..(1u64 << k)).map(move |bits| Word { len: k as u8, bits })
    }

    /// Admissible words of the given weight, in length-lex order.
    pub fn admissible_of_weight(k: usize) -> Vec<Word> {
        match k {
            0 => vec![Word::empty()],
            1 => Vec::new(),
            _ => (0..(1u64 << (k - 2)))
                .map(|mid| Word { len: k as u8, bits: (mid << 1) | 1 })
                .collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s.chars().count() > MAX_WEIGHT {
            return Err(Error::WordTooLong(s.chars().count()));
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(letters)
    }
}

/// An element of the free algebra: a finite map from words to nonzero rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn one() -> NcPoly {
        NcPoly::from_word(Word::empty())
    }

    pub fn constant(c: Scalar) -> NcPoly {
        NcPoly::monomial(c, Word::empty())
    }

    pub fn from_word(w: Word) -> NcPoly {
        NcPoly::monomial(Scalar::one(), w)
    }

    pub fn monomial(c: Scalar, w: Word) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn x() -> NcPoly {
        NcPoly::from_word(Word::letter(Letter::X))
    }

    pub fn y() -> NcPoly {
        NcPoly::from_word(Word::letter(Letter::Y))
    }

    /// Sum of the given words with coefficient one each.
    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> NcPoly {
        let mut p = NcPoly::zero();
        for w in words {
            p.add_term(w, Scalar::one());
        }
        p
    }

    /// Parses a whitespace-free sum of words like `"xxy-xyy+2xy"`.
    ///
    /// Terms are `[sign][coeff][*]word`; an empty word must be written `1`.
    /// Intended for tests and the command line.
    pub fn parse_sum(s: &str) -> Result<NcPoly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = NcPoly::zero();
        if s == "0" {
            return Ok(p);
        }
        let mut chunks = Vec::new();
        let mut start = 0;
        for (i, c) in s.char_indices() {
            if (c == '+' || c == '-') && i > 0 {
                chunks.push(&s[start..i]);
                start = i;
            }
        }
        chunks.push(&s[start..]);
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(chunk)),
            };
            let split = body.find(['x', 'y']).unwrap_or(body.len());
            let (coeff, word) = body.split_at(split);
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let mut c = match (coeff, word.is_empty()) {
                ("", false) => Scalar::one(),
                ("", true) => return Err(Error::InvalidWord(s.clone())),
                _ => parse_scalar(coeff)?,
            };
            if neg {
                c = -c;
            }
            p.add_term(word.parse()?, c);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (length-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &NcPoly) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(*w, c * d);
        }
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, d)| (*w, c * d)).collect() }
    }

    /// Constant (empty-word) coefficient.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Word::empty())
    }

    pub fn weight_component(&self, k: usize) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == k)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::weight)
    }

    /// The common weight of all terms, if there is one. `None` for zero.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let first = self.terms.keys().next()?.weight();
        (self.max_weight() == Some(first)).then_some(first)
    }

    /// Support lies in `Q + x h y`.
    pub fn is_admissible(&self) -> bool {
        self.terms.keys().all(Word::is_admissible)
    }

    /// Applies a word-to-word map linearly.
    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> NcPoly {
        let mut p = NcPoly::zero();
        for (w, c) in &self.terms {
            p.add_term(f(w), c.clone());
        }
        p
    }

    pub fn pow(&self, e: u32) -> NcPoly {
        (0..e).fold(NcPoly::one(), |acc, _| &acc * self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("NcPoly serialization is infallible")
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            let word = if w.is_empty() { "1".to_string() } else { w.to_string() };
            let sep = if i > 0 { " " } else { "" };
            if i > 0 {
                write!(f, "{sep}{sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if mag.is_one() {
                write!(f, "{word}")?;
            } else if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{word}")?;
            }
        }
        Ok(())
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;

    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;

    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c.clone());
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;

    fn neg(self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect() }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;

    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.concat(b), c * d);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for NcPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRepr { word: w.to_string(), coeff: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<NcPoly, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut p = NcPoly::zero();
        for t in repr.terms {
            let w: Word = t.word.parse().map_err(serde::de::Error::custom)?;
            let c = parse_scalar(&t.coeff).map_err(serde::de::Error::custom)?;
            p.add_term(w, c);
        }
        Ok(p)
    }
}
