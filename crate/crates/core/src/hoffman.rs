//! Duality, the derivations `∂ₙ`, and the index/word dictionary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NcPoly, Scalar, Word};

/// An MZV index `(k₁,…,k_d)` of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Index> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidIndex(format!("{parts:?}")));
        }
        Ok(Index(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.0[0] >= 2
    }

    /// `x^{k₁−1} y ⋯ x^{k_d−1} y`.
    pub fn to_word(&self) -> Result<Word> {
        let letters = self
            .0
            .iter()
            .flat_map(|&k| std::iter::repeat_n(Letter::X, k as usize - 1).chain([Letter::Y]));
        Word::from_letters(letters)
    }

    pub fn from_word(w: &Word) -> Result<Index> {
        if w.last() != Some(Letter::Y) {
            return Err(Error::NotIndexWord(w.to_string()));
        }
        let mut parts = Vec::new();
        let mut run = 1;
        for l in w.letters() {
            match l {
                Letter::X => run += 1,
                Letter::Y => {
                    parts.push(run);
                    run = 1;
                }
            }
        }
        Ok(Index(parts))
    }

    /// The index of `τ` applied to this index's word.
    pub fn dual(&self) -> Result<Index> {
        if !self.is_admissible() {
            return Err(Error::DualUndefined(self.to_string()));
        }
        Index::from_word(&self.to_word()?.dual())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Index> {
        let bad = || Error::InvalidIndex(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts).map_err(|_| bad())
    }
}

/// Which derivation `∂ₙ`; `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivationId(u32);

impl DerivationId {
    pub fn new(n: u32) -> Result<DerivationId> {
        if n == 0 {
            return Err(Error::ZeroDerivation);
        }
        Ok(DerivationId(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// The anti-automorphism `τ`: reverse each word and swap `x <-> y`.
pub fn tau(p: &NcPoly) -> NcPoly {
    p.map_words(Word::dual)
}

/// `(1 − τ)(p)`.
pub fn one_minus_tau(p: &NcPoly) -> NcPoly {
    p - &tau(p)
}

static GENERATORS: RwLock<BTreeMap<u32, Arc<NcPoly>>> = RwLock::new(BTreeMap::new());

/// `x(x+y)^{n−1}y`, the common image `∂ₙ(x) = −∂ₙ(y)`.
pub fn dn_generator(n: DerivationId) -> Arc<NcPoly> {
    if let Some(g) = GENERATORS.read().expect("generator cache poisoned").get(&n.0) {
        return Arc::clone(g);
    }
    // Every word x·m·y with m of length n−1 appears exactly once.
    let len = n.0 as usize + 1;
    let g = Arc::new(NcPoly::from_words(
        (0..(1u64 << (n.0 - 1))).map(|mid| Word::from_bits(len, (mid << 1) | 1)),
    ));
    let mut cache = GENERATORS.write().expect("generator cache poisoned");
    Arc::clone(cache.entry(n.0).or_insert(g))
}

/// `∂ₙ` applied to a single word, accumulated into `out` with factor `c`.
fn derive_word_into(out: &mut NcPoly, gen: &NcPoly, w: &Word, c: &Scalar) {
    let k = w.weight();
    for i in 0..k {
        let prefix = w.slice(0, i);
        let suffix = w.slice(i + 1, k);
        let sign = match w.at(i) {
            Letter::X => c.clone(),
            Letter::Y => -c.clone(),
        };
        for (g, gc) in gen.terms() {
            debug_assert!(gc.is_one());
            out.add_term(prefix.concat(g).concat(&suffix), sign.clone());
        }
    }
}

/// The derivation `∂ₙ`, extended from letters by the Leibniz rule.
pub fn derivation(n: DerivationId, p: &NcPoly) -> NcPoly {
    let gen = dn_generator(n);
    let mut out = NcPoly::zero();
    for (w, c) in p.terms() {
        derive_word_into(&mut out, &gen, w, c);
    }
    out
}
