//! Truncated power series in central variables `u, v, w` with coefficients
//! in the free algebra, together with the automorphisms `Δ_t`.
//!
//! Truncation is by total degree: a series of order `N` stores only
//! monomials `u^a v^b w^c` with `a + b + c ≤ N`, and every operation drops
//! anything beyond the order of its result.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hoffman::{derivation, DerivationId};
use crate::ncpoly::{scalar, Letter, NcPoly, Scalar, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarId {
    U,
    V,
    W,
}

impl VarId {
    pub fn name(self) -> char {
        match self {
            VarId::U => 'u',
            VarId::V => 'v',
            VarId::W => 'w',
        }
    }
}

impl std::str::FromStr for VarId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<VarId, String> {
        match s {
            "u" | "U" => Ok(VarId::U),
            "v" | "V" => Ok(VarId::V),
            "w" | "W" => Ok(VarId::W),
            _ => Err(format!("unknown variable {s:?}; expected u, v or w")),
        }
    }
}

/// `u^u v^v w^w`, ordered by total degree and then exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial3 {
    pub u: u32,
    pub v: u32,
    pub w: u32,
}

impl Monomial3 {
    pub const ONE: Monomial3 = Monomial3 { u: 0, v: 0, w: 0 };

    pub fn new(u: u32, v: u32, w: u32) -> Monomial3 {
        Monomial3 { u, v, w }
    }

    pub fn var(t: VarId, e: u32) -> Monomial3 {
        match t {
            VarId::U => Monomial3::new(e, 0, 0),
            VarId::V => Monomial3::new(0, e, 0),
            VarId::W => Monomial3::new(0, 0, e),
        }
    }

    pub fn degree(&self) -> u32 {
        self.u + self.v + self.w
    }

    pub fn exponent(&self, t: VarId) -> u32 {
        match t {
            VarId::U => self.u,
            VarId::V => self.v,
            VarId::W => self.w,
        }
    }

    pub fn times(&self, o: &Monomial3) -> Monomial3 {
        Monomial3::new(self.u + o.u, self.v + o.v, self.w + o.w)
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.degree(), self.u, self.v, self.w)
    }
}

impl Ord for Monomial3 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^{} v^{} w^{}", self.u, self.v, self.w)
    }
}

/// A series of order `N` in `u, v, w` with [`NcPoly`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series3 {
    order: u32,
    coeffs: BTreeMap<Monomial3, NcPoly>,
}

impl Series3 {
    pub fn zero(order: u32) -> Series3 {
        Series3 { order, coeffs: BTreeMap::new() }
    }

    pub fn one(order: u32) -> Series3 {
        Series3::constant(NcPoly::one(), order)
    }

    pub fn constant(p: NcPoly, order: u32) -> Series3 {
        Series3::term(p, Monomial3::ONE, order)
    }

    pub fn term(p: NcPoly, m: Monomial3, order: u32) -> Series3 {
        let mut s = Series3::zero(order);
        s.add_coeff(m, &p);
        s
    }

    /// Sum of `p·m` over the given pairs.
    pub fn from_terms<I: IntoIterator<Item = (NcPoly, Monomial3)>>(terms: I, order: u32) -> Series3 {
        let mut s = Series3::zero(order);
        for (p, m) in terms {
            s.add_coeff(m, &p);
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Monomial3) -> NcPoly {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients in (total degree, u, v, w) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial3, &NcPoly)> {
        self.coeffs.iter()
    }

    pub fn add_coeff(&mut self, m: Monomial3, p: &NcPoly) {
        if m.degree() > self.order || p.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_default();
        slot.add_scaled(&Scalar::one(), p);
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn truncate(&self, order: u32) -> Series3 {
        Series3 {
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, p)| (*m, p.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Series3 {
        let mut s = Series3::zero(self.order);
        for (m, p) in &self.coeffs {
            s.add_coeff(*m, &p.scale(c));
        }
        s
    }

    /// Multiply by a central monomial, dropping what leaves the order.
    pub fn shift(&self, by: &Monomial3) -> Series3 {
        let mut s = Series3::zero(self.order);
        for (m, p) in &self.coeffs {
            s.add_coeff(m.times(by), p);
        }
        s
    }

    /// Applies a linear map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&NcPoly) -> NcPoly) -> Series3 {
        let mut s = Series3::zero(self.order);
        for (m, p) in &self.coeffs {
            s.add_coeff(*m, &f(p));
        }
        s
    }

    /// Substitutes `t = 0`.
    pub fn at_zero(&self, t: VarId) -> Series3 {
        Series3 {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.exponent(t) == 0)
                .map(|(m, p)| (*m, p.clone()))
                .collect(),
        }
    }

    /// Degree-ordered first nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(Monomial3, &NcPoly)> {
        self.coeffs.iter().next().map(|(m, p)| (*m, p))
    }

    /// `1/F` as the Neumann series `Σ (1−F)^j`. Requires `F(0) = 1`.
    pub fn geometric_inverse(&self) -> Result<Series3> {
        if self.coeff(&Monomial3::ONE) != NcPoly::one() {
            return Err(Error::NotInvertible);
        }
        let one = Series3::one(self.order);
        let rest = &one - self;
        let mut acc = one.clone();
        for _ in 0..self.order {
            acc = &one + &(&rest * &acc);
        }
        Ok(acc)
    }

    /// `Δ_t` applied to every coefficient; `u, v, w` are fixed.
    pub fn delta(&self, t: VarId) -> Series3 {
        let mut out = Series3::zero(self.order);
        for (m, p) in &self.coeffs {
            let image = delta_univariate(p, self.order - m.degree());
            for (e, q) in image.into_iter().enumerate() {
                out.add_coeff(m.times(&Monomial3::var(t, e as u32)), &q);
            }
        }
        out
    }

    /// The exact quotient `G / (v − w)`, of order one less than `G`.
    ///
    /// Fails unless `G` vanishes on the diagonal `w = v` through its order.
    pub fn divide_by_v_minus_w(&self) -> Result<Series3> {
        if self.order == 0 {
            return Err(Error::OrderTooSmall { needed: 1, got: 0 });
        }
        let mut quotient = Series3::zero(self.order - 1);
        for a in 0..=self.order {
            for d in 0..=(self.order - a) {
                // (v−w)·Q = G on the antidiagonal b + c = d gives
                // q[b−1, c] = g[b, c] + q[b, c−1]; the b = 0 equation is the
                // diagonal condition Σ_{b+c=d} g[b, c] = 0.
                let mut carry = NcPoly::zero();
                for c in 0..d {
                    let b = d - c;
                    carry = &self.coeff(&Monomial3::new(a, b, c)) + &carry;
                    quotient.add_coeff(Monomial3::new(a, b - 1, c), &carry);
                }
                let residual = &self.coeff(&Monomial3::new(a, 0, d)) + &carry;
                if !residual.is_zero() {
                    return Err(Error::NotDivisible { u: a, degree: d });
                }
            }
        }
        Ok(quotient)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serialization is infallible")
    }
}

/// `Δ_t(p)` through `t`-degree `order`, via the closed-form letter images
/// `x ↦ Σ x y^m t^m` and `y ↦ y − Σ_{m≥1} x y^m t^m`.
pub fn delta_subst(t: VarId, p: &NcPoly, order: u32) -> Series3 {
    univariate_to_series(t, delta_univariate(p, order), order)
}

/// `Δ_t(p)` through `t`-degree `order` as `exp(D)(p)` with the derivation
/// `D = Σₙ ∂ₙ tⁿ / n`. Independent of [`delta_subst`].
pub fn delta_exp(t: VarId, p: &NcPoly, order: u32) -> Series3 {
    let n_max = order as usize;
    let apply_d = |q: &[NcPoly]| -> Vec<NcPoly> {
        let mut out = vec![NcPoly::zero(); n_max + 1];
        for (deg, slot) in out.iter_mut().enumerate() {
            for n in 1..=deg {
                let src = &q[deg - n];
                if src.is_zero() {
                    continue;
                }
                let id = DerivationId::new(n as u32).expect("n >= 1");
                let inv_n = Scalar::new(1.into(), (n as i64).into());
                slot.add_scaled(&inv_n, &derivation(id, src));
            }
        }
        out
    };
    let mut term = vec![NcPoly::zero(); n_max + 1];
    term[0] = p.clone();
    let mut total = term.clone();
    for j in 1..=n_max {
        // D raises t-degree by at least one, so D^j vanishes below degree j.
        term = apply_d(&term);
        let inv_j = Scalar::new(1.into(), (j as i64).into());
        for q in term.iter_mut() {
            *q = q.scale(&inv_j);
        }
        for (acc, q) in total.iter_mut().zip(&term) {
            acc.add_scaled(&Scalar::one(), q);
        }
    }
    univariate_to_series(t, total, order)
}

fn univariate_to_series(t: VarId, coeffs: Vec<NcPoly>, order: u32) -> Series3 {
    let mut s = Series3::zero(order);
    for (e, q) in coeffs.into_iter().enumerate() {
        s.add_coeff(Monomial3::var(t, e as u32), &q);
    }
    s
}

/// `x y^m` for `m = 0..=order`.
fn xy_powers(order: u32) -> Vec<Word> {
    let x = Word::letter(Letter::X);
    let y = Word::letter(Letter::Y);
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut w = x;
    for _ in 0..=order {
        out.push(w);
        w = w.concat(&y);
    }
    out
}

fn delta_univariate(p: &NcPoly, order: u32) -> Vec<NcPoly> {
    let powers = xy_powers(order);
    delta_horner(p, order as usize, &powers)
}

/// Writes `p = c + x·p_x + y·p_y` and recurses on `p_x`, `p_y`.
fn delta_horner(p: &NcPoly, order: usize, xy: &[Word]) -> Vec<NcPoly> {
    let mut out = vec![NcPoly::zero(); order + 1];
    let mut after_x = NcPoly::zero();
    let mut after_y = NcPoly::zero();
    for (w, c) in p.terms() {
        match w.first() {
            None => out[0].add_term(*w, c.clone()),
            Some(l) => {
                let rest = w.slice(1, w.weight());
                match l {
                    Letter::X => after_x.add_term(rest, c.clone()),
                    Letter::Y => after_y.add_term(rest, c.clone()),
                }
            }
        }
    }
    let y = Word::letter(Letter::Y);
    if !after_x.is_zero() {
        let tail = delta_horner(&after_x, order, xy);
        for (i, q) in tail.iter().enumerate() {
            for (m, head) in xy.iter().enumerate().take(order + 1 - i) {
                for (w, c) in q.terms() {
                    out[i + m].add_term(head.concat(w), c.clone());
                }
            }
        }
    }
    if !after_y.is_zero() {
        let tail = delta_horner(&after_y, order, xy);
        for (i, q) in tail.iter().enumerate() {
            for (w, c) in q.terms() {
                out[i].add_term(y.concat(w), c.clone());
            }
            for (m, head) in xy.iter().enumerate().take(order + 1 - i).skip(1) {
                for (w, c) in q.terms() {
                    out[i + m].add_term(head.concat(w), -c.clone());
                }
            }
        }
    }
    out
}

impl Add for &Series3 {
    type Output = Series3;

    fn add(self, rhs: &Series3) -> Series3 {
        let mut s = self.truncate(self.order.min(rhs.order));
        for (m, p) in &rhs.coeffs {
            s.add_coeff(*m, p);
        }
        s
    }
}

impl Sub for &Series3 {
    type Output = Series3;

    fn sub(self, rhs: &Series3) -> Series3 {
        self + &(-rhs)
    }
}

impl Neg for &Series3 {
    type Output = Series3;

    fn neg(self) -> Series3 {
        Series3 { order: self.order, coeffs: self.coeffs.iter().map(|(m, p)| (*m, -p)).collect() }
    }
}

impl Mul for &Series3 {
    type Output = Series3;

    fn mul(self, rhs: &Series3) -> Series3 {
        let order = self.order.min(rhs.order);
        let mut acc: BTreeMap<Monomial3, NcPoly> = BTreeMap::new();
        for (ma, pa) in &self.coeffs {
            if ma.degree() > order {
                break;
            }
            for (mb, pb) in &rhs.coeffs {
                if ma.degree() + mb.degree() > order {
                    break;
                }
                let slot = acc.entry(ma.times(mb)).or_default();
                for (wa, ca) in pa.terms() {
                    for (wb, cb) in pb.terms() {
                        slot.add_term(wa.concat(wb), ca * cb);
                    }
                }
            }
        }
        acc.retain(|_, p| !p.is_zero());
        Series3 { order, coeffs: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series3 {
            type Output = Series3;
            fn $m(self, rhs: Series3) -> Series3 {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct SeriesTermRepr {
    u: u32,
    v: u32,
    w: u32,
    poly: NcPoly,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: u32,
    terms: Vec<SeriesTermRepr>,
}

impl Serialize for Series3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            order: self.order,
            terms: self
                .coeffs
                .iter()
                .map(|(m, p)| SeriesTermRepr { u: m.u, v: m.v, w: m.w, poly: p.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Series3, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let mut s = Series3::zero(repr.order);
        for t in repr.terms {
            s.add_coeff(Monomial3::new(t.u, t.v, t.w), &t.poly);
        }
        Ok(s)
    }
}

/// `p·m` at the given order.
pub fn mono(p: &NcPoly, m: Monomial3, order: u32) -> Series3 {
    Series3::term(p.clone(), m, order)
}

/// The integer `n` as a constant series.
pub fn int(n: i64, order: u32) -> Series3 {
    Series3::constant(NcPoly::constant(scalar(n)), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::ratio;

    fn p(s: &str) -> NcPoly {
        NcPoly::parse_sum(s).unwrap()
    }

    fn m(u: u32, v: u32, w: u32) -> Monomial3 {
        Monomial3::new(u, v, w)
    }

    /// Series from `(poly, (a,b,c))` pairs.
    fn s(order: u32, terms: &[(&str, (u32, u32, u32))]) -> Series3 {
        Series3::from_terms(terms.iter().map(|(q, (a, b, c))| (p(q), m(*a, *b, *c))), order)
    }

    #[test]
    fn central_variables_noncommuting_coefficients() {
        let xu = s(4, &[("x", (1, 0, 0))]);
        let yv = s(4, &[("y", (0, 1, 0))]);
        assert_eq!((&xu * &yv).coeff(&m(1, 1, 0)), p("xy"));
        assert_eq!((&yv * &xu).coeff(&m(1, 1, 0)), p("yx"));
        assert_eq!(s(3, &[("1", (0, 0, 0)), ("x", (1, 0, 0))]).coeff(&m(1, 0, 0)), p("x"));
        assert!(s(3, &[("1", (0, 0, 0))]).coeff(&m(0, 2, 0)).is_zero());
    }

    #[test]
    fn multiplication_truncates() {
        let n = 5;
        let xu = s(n, &[("x", (1, 0, 0))]);
        let mut power = Series3::one(n);
        for _ in 0..n {
            power = &power * &xu;
        }
        assert_eq!(power, s(n, &[("xxxxx", (5, 0, 0))]));
        assert!((&power * &xu).is_zero());
        // Mixed orders take the minimum.
        assert_eq!((&Series3::one(3) + &Series3::one(7)).order(), 3);
    }

    #[test]
    fn geometric_series() {
        let n = 6;
        let inv = s(n, &[("1", (0, 0, 0)), ("-x", (1, 0, 0))]).geometric_inverse().unwrap();
        let expected = Series3::from_terms(
            (0..=n).map(|k| (NcPoly::x().pow(k), m(k, 0, 0))),
            n,
        );
        assert_eq!(inv, expected);

        let inv2 = s(2, &[("1", (0, 0, 0)), ("-x", (0, 0, 1)), ("-y", (0, 1, 0))])
            .geometric_inverse()
            .unwrap();
        let expected2 = s(
            2,
            &[
                ("1", (0, 0, 0)),
                ("x", (0, 0, 1)),
                ("y", (0, 1, 0)),
                ("xx", (0, 0, 2)),
                ("xy+yx", (0, 1, 1)),
                ("yy", (0, 2, 0)),
            ],
        );
        assert_eq!(inv2, expected2);
        assert_eq!(inv2.geometric_inverse().unwrap(), expected2.geometric_inverse().unwrap());
        assert_eq!(
            inv2.geometric_inverse().unwrap(),
            s(2, &[("1", (0, 0, 0)), ("-x", (0, 0, 1)), ("-y", (0, 1, 0))])
        );
    }

    #[test]
    fn inverse_requires_unit_constant() {
        assert!(matches!(s(3, &[("2", (0, 0, 0))]).geometric_inverse(), Err(Error::NotInvertible)));
        assert!(matches!(s(3, &[("1+x", (0, 0, 0))]).geometric_inverse(), Err(Error::NotInvertible)));
        assert!(matches!(Series3::zero(3).geometric_inverse(), Err(Error::NotInvertible)));
    }

    #[test]
    fn delta_letter_images() {
        assert_eq!(
            delta_subst(VarId::U, &p("x"), 2),
            s(2, &[("x", (0, 0, 0)), ("xy", (1, 0, 0)), ("xyy", (2, 0, 0))])
        );
        assert_eq!(
            delta_subst(VarId::U, &p("y"), 2),
            s(2, &[("y", (0, 0, 0)), ("-xy", (1, 0, 0)), ("-xyy", (2, 0, 0))])
        );
        for n in 0..=8 {
            assert_eq!(delta_subst(VarId::W, &p("x+y"), n), s(n, &[("x+y", (0, 0, 0))]));
        }
    }

    #[test]
    fn delta_exp_small_cases() {
        assert_eq!(delta_exp(VarId::U, &p("x"), 1), s(1, &[("x", (0, 0, 0)), ("xy", (1, 0, 0))]));
        for n in 0..5 {
            assert_eq!(delta_exp(VarId::V, &NcPoly::one(), n), Series3::one(n));
        }
        // Second order by hand: ∂₁²(x)/2 + ∂₂(x)/2 = (xyy − xxy)/2 + (xxy + xyy)/2.
        assert_eq!(delta_exp(VarId::U, &p("x"), 2).coeff(&m(2, 0, 0)), p("xyy"));
        assert_eq!(delta_exp(VarId::U, &p("1/2xxy"), 3), delta_subst(VarId::U, &p("1/2xxy"), 3));
    }

    #[test]
    fn delta_on_series_examples() {
        let n = 7;
        let one_minus_xu = s(n, &[("1", (0, 0, 0)), ("-x", (1, 0, 0))]);
        let rhs = &s(n, &[("1", (0, 0, 0)), ("-x-y", (1, 0, 0))])
            * &s(n, &[("1", (0, 0, 0)), ("-y", (1, 0, 0))]).geometric_inverse().unwrap();
        assert_eq!(one_minus_xu.delta(VarId::U), rhs);

        let scalar_only = s(n, &[("3", (0, 0, 0)), ("-1/2", (1, 2, 0)), ("7", (0, 0, 4))]);
        for t in [VarId::U, VarId::V, VarId::W] {
            assert_eq!(scalar_only.delta(t), scalar_only);
        }
        let fixed = s(n, &[("x+y", (0, 0, 0)), ("x+y", (1, 0, 0))]);
        assert_eq!(fixed.delta(VarId::U), fixed);
        // Δ is multiplicative on (x+y)^2 too.
        let sq = s(n, &[("xx+xy+yx+yy", (0, 1, 0))]);
        assert_eq!(sq.delta(VarId::V), sq);
    }

    #[test]
    fn divided_difference_examples() {
        let g = s(4, &[("xy", (0, 1, 0)), ("-xy", (0, 0, 1))]);
        assert_eq!(g.divide_by_v_minus_w().unwrap(), s(3, &[("xy", (0, 0, 0))]));
        let g = s(4, &[("1", (0, 2, 0)), ("-1", (0, 0, 2))]);
        assert_eq!(g.divide_by_v_minus_w().unwrap(), s(3, &[("1", (0, 1, 0)), ("1", (0, 0, 1))]));
        let g = s(4, &[("x", (0, 1, 0))]);
        assert!(matches!(g.divide_by_v_minus_w(), Err(Error::NotDivisible { u: 0, degree: 1 })));
        assert!(matches!(Series3::zero(0).divide_by_v_minus_w(), Err(Error::OrderTooSmall { .. })));
    }

    #[test]
    fn scale_and_specialize() {
        let f = s(3, &[("x", (1, 0, 0)), ("y", (0, 1, 1))]);
        assert_eq!(f.scale(&ratio(-1, 2)), s(3, &[("-1/2x", (1, 0, 0)), ("-1/2y", (0, 1, 1))]));
        assert_eq!(f.at_zero(VarId::U), s(3, &[("y", (0, 1, 1))]));
        assert_eq!(f.shift(&m(0, 0, 2)), s(3, &[("x", (1, 0, 2))]));
    }

    #[test]
    fn json_layout() {
        let f = s(2, &[("y", (0, 1, 0)), ("x", (1, 0, 0)), ("-1/3", (0, 0, 0))]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            concat!(
                r#"{"order":2,"terms":[{"u":0,"v":0,"w":0,"poly":{"terms":[{"word":"","coeff":"-1/3"}]}},"#,
                r#"{"u":0,"v":1,"w":0,"poly":{"terms":[{"word":"y","coeff":"1"}]}},"#,
                r#"{"u":1,"v":0,"w":0,"poly":{"terms":[{"word":"x","coeff":"1"}]}}]}"#
            )
        );
        assert_eq!(serde_json::from_str::<Series3>(&json).unwrap(), f);
    }
}
