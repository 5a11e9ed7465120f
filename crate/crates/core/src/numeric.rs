//! Double-precision evaluation of the map `Z` by plain truncated summation.
//!
//! This is a sanity net for the exact layer, not a precision tool: the tail
//! estimate is a crude logarithmic bound and no acceleration is used.

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hoffman::Index;
use crate::ncpoly::{NcPoly, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    /// Partial sum over `m₁ ≤ cutoff`.
    pub value: f64,
    pub cutoff: u64,
    pub tail_bound: f64,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Upper bound on `ζ(k) − zeta_eval(k, M).value`.
///
/// The inner sums are bounded by `H_{m−1}^{d−1}/(d−1)! ≤ (1+ln m)^{d−1}/(d−1)!`,
/// and the outer tail by the integral of that envelope times `t^{−k₁}`:
/// `M^{1−k₁} Σ_{i<d} s^{d−1−i} / ((d−1−i)! (k₁−1)^{i+1})` with `s = 1 + ln M`.
/// When the envelope is still increasing at `M`, its peak value is added.
pub fn tail_bound(index: &Index, cutoff: u64) -> f64 {
    let m = cutoff as f64;
    let k1 = index.parts()[0] as f64;
    let j = index.depth() as i32 - 1;
    let s = 1.0 + m.ln();
    let a = k1 - 1.0;
    let mut sum = 0.0;
    let mut fact = 1.0; // (j − i)!
    for i in (0..=j).rev() {
        sum += s.powi(j - i) / (fact * a.powi(i + 1));
        fact *= (j - i + 1) as f64;
    }
    let mut bound = m.powf(-a) * sum;
    if k1 * s < j as f64 {
        let peak_s = j as f64 / k1;
        let j_fact: f64 = (1..=j).map(f64::from).product();
        bound += peak_s.powi(j) * (k1 - j as f64).exp() / j_fact;
    }
    bound
}

/// `ζ(k₁,…,k_d)` summed over `cutoff ≥ m₁ > ⋯ > m_d > 0`.
///
/// Built from the innermost sum outward: after processing part `j`, slot
/// `m` holds the sum over `m = m_j > m_{j+1} > ⋯ > m_d > 0`.
pub fn zeta_eval(index: &Index, cutoff: u64) -> Result<EvalResult> {
    if !index.is_admissible() {
        return Err(Error::DivergentSeries(index.to_string()));
    }
    if cutoff < index.depth() as u64 {
        return Err(Error::CutoffTooSmall { cutoff, depth: index.depth() });
    }
    let len = cutoff as usize;
    let parts = index.parts();
    let inv_pow = |m: usize, k: u32| (m as f64).powi(-(k as i32));
    let mut level: Vec<f64> = (1..=len).map(|m| inv_pow(m, parts[parts.len() - 1])).collect();
    for &k in parts[..parts.len() - 1].iter().rev() {
        let mut prefix = CompensatedSum::default();
        let mut next = vec![0.0; len];
        for m in 1..len {
            prefix.add(level[m - 1]);
            next[m] = inv_pow(m + 1, k) * prefix.value();
        }
        level = next;
    }
    // Smallest terms sit at large m; add them first.
    let mut total = CompensatedSum::default();
    for v in level.iter().rev() {
        total.add(*v);
    }
    Ok(EvalResult { value: total.value(), cutoff, tail_bound: tail_bound(index, cutoff) })
}

fn to_f64(c: &Scalar) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let sign = if c.is_negative() { -1.0 } else { 1.0 };
        sign * f64::INFINITY
    })
}

/// `Z(p) = Σ c · ζ(index(word))` with `Z(1) = 1`; tail bounds weighted by `|c|`.
pub fn z_eval(p: &NcPoly, cutoff: u64) -> Result<EvalResult> {
    if let Some((w, _)) = p.terms().find(|(w, _)| !w.is_admissible()) {
        return Err(Error::OutsideDomain(w.to_string()));
    }
    let mut value = CompensatedSum::default();
    let mut tail = 0.0;
    for (w, c) in p.terms() {
        let c = to_f64(c);
        if w.is_empty() {
            value.add(c);
            continue;
        }
        let r = zeta_eval(&Index::from_word(w)?, cutoff)?;
        value.add(c * r.value);
        tail += c.abs() * r.tail_bound;
    }
    Ok(EvalResult { value: value.value(), cutoff, tail_bound: tail })
}
