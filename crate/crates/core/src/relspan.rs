//! Membership in the span `Σₙ ∂ₙ(h⁰)` at a fixed weight, decided by exact
//! rational elimination and witnessed by re-checkable certificates.
//!
//! Rows of the elimination are the `2^k` words of weight `k`, indexed by
//! their bit code (so row order is length-lex order); columns are the
//! images `∂ₙ(w)` for admissible `w` of weight `k − n`. Pivots are the first
//! nonzero row of each reduced column, which makes the echelon form, and
//! therefore every certificate, a deterministic function of the weight.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hoffman::{derivation, one_minus_tau, DerivationId};
use crate::identities::SumSpec;
use crate::ncpoly::{parse_scalar, NcPoly, Scalar, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub n: DerivationId,
    pub word: Word,
    pub image: NcPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    pub weight: u32,
    pub generators: Vec<Generator>,
}

/// `∂ₙ(w)` for `1 ≤ n ≤ k−2` and admissible `w` of weight `k−n ≥ 2`,
/// ordered by `n` and then by word.
pub fn span_basis(k: u32) -> SpanBasis {
    let mut generators = Vec::new();
    for n in 1..k.saturating_sub(1) {
        let id = DerivationId::new(n).expect("n >= 1");
        for word in Word::admissible_of_weight((k - n) as usize) {
            let image = derivation(id, &NcPoly::from_word(word));
            generators.push(Generator { n: id, word, image });
        }
    }
    SpanBasis { weight: k, generators }
}

#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    n: u32,
    word: String,
    image: NcPoly,
}

#[derive(Serialize, Deserialize)]
struct BasisRepr {
    weight: u32,
    generators: Vec<GeneratorRepr>,
}

impl Serialize for SpanBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisRepr {
            weight: self.weight,
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorRepr { n: g.n.get(), word: g.word.to_string(), image: g.image.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpanBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SpanBasis, D::Error> {
        use serde::de::Error as _;
        let repr = BasisRepr::deserialize(d)?;
        let generators = repr
            .generators
            .into_iter()
            .map(|g| {
                Ok(Generator {
                    n: DerivationId::new(g.n).map_err(D::Error::custom)?,
                    word: g.word.parse().map_err(D::Error::custom)?,
                    image: g.image,
                })
            })
            .collect::<std::result::Result<_, D::Error>>()?;
        Ok(SpanBasis { weight: repr.weight, generators })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateTerm {
    pub n: DerivationId,
    pub word: Word,
    pub coeff: Scalar,
}

/// `target = Σ coeff · ∂ₙ(word)` over `combination`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub target: NcPoly,
    pub combination: Vec<CertificateTerm>,
}

impl MembershipCertificate {
    /// Expands the combination with [`derivation`] directly.
    pub fn expand(&self) -> NcPoly {
        let mut sum = NcPoly::zero();
        for t in &self.combination {
            sum.add_scaled(&t.coeff, &derivation(t.n, &NcPoly::from_word(t.word)));
        }
        sum
    }

    /// The combination reproduces the target and uses only admissible words.
    pub fn verify(&self) -> bool {
        self.combination.iter().all(|t| t.word.is_admissible()) && self.expand() == self.target
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    n: u32,
    word: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    target: NcPoly,
    combination: Vec<TermRepr>,
}

impl Serialize for MembershipCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRepr {
            target: self.target.clone(),
            combination: self
                .combination
                .iter()
                .map(|t| TermRepr { n: t.n.get(), word: t.word.to_string(), coeff: t.coeff.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MembershipCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CertificateRepr::deserialize(d)?;
        let combination = repr
            .combination
            .into_iter()
            .map(|t| {
                Ok(CertificateTerm {
                    n: DerivationId::new(t.n).map_err(D::Error::custom)?,
                    word: t.word.parse().map_err(D::Error::custom)?,
                    coeff: parse_scalar(&t.coeff).map_err(D::Error::custom)?,
                })
            })
            .collect::<std::result::Result<_, D::Error>>()?;
        Ok(MembershipCertificate { target: repr.target, combination })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(MembershipCertificate),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::NotMember => None,
        }
    }
}

type SparseVec<K> = BTreeMap<K, Scalar>;

fn axpy<K: Ord + Copy>(dst: &mut SparseVec<K>, a: &Scalar, src: &SparseVec<K>) {
    for (k, v) in src {
        let entry = dst.entry(*k).or_insert_with(Scalar::zero);
        *entry += a * v;
        if entry.is_zero() {
            dst.remove(k);
        }
    }
}

#[derive(Debug, Clone)]
struct Pivot {
    /// Reduced column, normalized to 1 at its first row.
    column: SparseVec<u64>,
    /// The same column as a combination of generators.
    combo: SparseVec<usize>,
}

/// Echelon form of the weight-`k` derivation span, reusable across targets.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    basis: SpanBasis,
    pivots: BTreeMap<u64, Pivot>,
}

fn column_of(p: &NcPoly) -> SparseVec<u64> {
    p.terms().map(|(w, c)| (w.bits(), c.clone())).collect()
}

impl SpanSolver {
    pub fn new(k: u32) -> SpanSolver {
        SpanSolver::from_basis(span_basis(k))
    }

    pub fn from_basis(basis: SpanBasis) -> SpanSolver {
        let mut solver = SpanSolver { basis, pivots: BTreeMap::new() };
        for j in 0..solver.basis.generators.len() {
            let mut column = column_of(&solver.basis.generators[j].image);
            let mut combo = SparseVec::from([(j, Scalar::one())]);
            solver.reduce(&mut column, &mut combo, true);
            if let Some((&lead, lead_val)) = column.iter().next() {
                let inv = lead_val.recip();
                column.values_mut().for_each(|v| *v *= &inv);
                combo.values_mut().for_each(|v| *v *= &inv);
                solver.pivots.insert(lead, Pivot { column, combo });
            }
        }
        solver
    }

    /// Eliminates leading entries while they sit on pivot rows. With
    /// `subtract`, `combo` tracks the reduced column itself; otherwise it
    /// accumulates the multiples removed.
    fn reduce(&self, column: &mut SparseVec<u64>, combo: &mut SparseVec<usize>, subtract: bool) {
        while let Some((&lead, val)) = column.iter().next() {
            let Some(pivot) = self.pivots.get(&lead) else { break };
            let c = val.clone();
            axpy(column, &-c.clone(), &pivot.column);
            axpy(combo, &if subtract { -c } else { c }, &pivot.combo);
        }
    }

    pub fn basis(&self) -> &SpanBasis {
        &self.basis
    }

    pub fn weight(&self) -> u32 {
        self.basis.weight
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn membership(&self, target: &NcPoly) -> Result<Membership> {
        let k = self.weight();
        if target.is_zero() {
            return Ok(Membership::Member(MembershipCertificate {
                target: target.clone(),
                combination: Vec::new(),
            }));
        }
        if target.homogeneous_weight() != Some(k as usize) {
            return Err(Error::MixedWeight(k));
        }
        let mut column = column_of(target);
        let mut combo = SparseVec::new();
        self.reduce(&mut column, &mut combo, false);
        if !column.is_empty() {
            return Ok(Membership::NotMember);
        }
        let combination = combo
            .into_iter()
            .map(|(j, coeff)| {
                let g = &self.basis.generators[j];
                CertificateTerm { n: g.n, word: g.word, coeff }
            })
            .collect();
        Ok(Membership::Member(MembershipCertificate { target: target.clone(), combination }))
    }
}

/// Decides whether `target` (homogeneous of weight `k`) lies in `Σₙ ∂ₙ(h⁰)`.
pub fn membership(target: &NcPoly, k: u32) -> Result<Membership> {
    SpanSolver::new(k).membership(target)
}

/// Certifies `(1−τ)(sum_word(s))` against a prebuilt solver of weight `s.k`.
pub fn corollary_check_with(solver: &SpanSolver, s: SumSpec) -> Result<MembershipCertificate> {
    let target = one_minus_tau(&s.word_sum());
    match solver.membership(&target)? {
        Membership::Member(cert) => Ok(cert),
        Membership::NotMember => Err(Error::CorollaryFalsified { k: s.k, m: s.m, l: s.l }),
    }
}

pub fn corollary_check(s: SumSpec) -> Result<MembershipCertificate> {
    corollary_check_with(&SpanSolver::new(s.k), s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryEntry {
    pub m: u32,
    pub l: u32,
    pub certificate: MembershipCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollarySummary {
    pub weight: u32,
    pub generators: usize,
    pub rank: usize,
    pub entries: Vec<CorollaryEntry>,
}

/// Every valid `(m, l)` at weight `k`. Stops at the first non-member.
pub fn corollary_check_all(k: u32) -> Result<CorollarySummary> {
    let solver = SpanSolver::new(k);
    let entries = SumSpec::all_at_weight(k)
        .into_iter()
        .map(|s| {
            let certificate = corollary_check_with(&solver, s)?;
            Ok(CorollaryEntry { m: s.m, l: s.l, certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorollarySummary { weight: k, generators: solver.basis.generators.len(), rank: solver.rank(), entries })
}
