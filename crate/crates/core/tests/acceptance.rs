//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p mzv-core --test acceptance` (add `--release` for
//! desk-scale timings).

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use mzv_core::hoffman::{one_minus_tau, tau};
use mzv_core::identities::{
    conjecture_lhs_series, lemma2_swapped_control, sum_word, verify_duality_k1, verify_duality_zeta,
    verify_proof_steps, SumSpec,
};
use mzv_core::ncpoly::{scalar, Letter};
use mzv_core::numeric::{z_eval, zeta_eval};
use mzv_core::relspan::{corollary_check_all, membership, span_basis, Membership, SpanSolver};
use mzv_core::series::{delta_exp, delta_subst, Monomial3};
use mzv_core::{DerivationId, Index, NcPoly, Scalar, VarId, Word};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `∂ₙ(w)` rebuilt from `x(x+y)^{n−1}y` with polynomial products only.
fn derivation_by_products(n: u32, w: &Word) -> NcPoly {
    let x = NcPoly::x();
    let y = NcPoly::y();
    let gen = &(&x * &(&x + &y).pow(n - 1)) * &y;
    let letters: Vec<Letter> = w.letters().collect();
    let letter_poly = |l: Letter| if l == Letter::X { x.clone() } else { y.clone() };
    let mut out = NcPoly::zero();
    for i in 0..letters.len() {
        let prefix = letters[..i].iter().fold(NcPoly::one(), |acc, &l| &acc * &letter_poly(l));
        let suffix = letters[i + 1..].iter().fold(NcPoly::one(), |acc, &l| &acc * &letter_poly(l));
        let image = if letters[i] == Letter::X { gen.clone() } else { -&gen };
        out = &out + &(&(&prefix * &image) * &suffix);
    }
    out
}

/// Rank by dense elimination, scanning word codes from the top down and
/// pivoting on the last eligible vector.
fn dense_rank(vectors: &[NcPoly], k: usize) -> usize {
    let dim = 1usize << k;
    let mut rows: Vec<Vec<Scalar>> = vectors
        .iter()
        .map(|p| {
            let mut v = vec![Scalar::zero(); dim];
            for (w, c) in p.terms() {
                v[w.bits() as usize] = c.clone();
            }
            v
        })
        .collect();
    let mut rank = 0;
    for col in (0..dim).rev() {
        let Some(piv) = (rank..rows.len()).rev().find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot_row[col];
            for (cell, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *cell -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn criterion_1() -> Outcome {
    let r = verify_duality_zeta(12);
    ensure(r.passed() && r.order == 12, || format!("{r:?}"))?;
    Ok("all u-coefficients through u^12 agree exactly".into())
}

fn criterion_2() -> Outcome {
    let r = verify_duality_k1(8);
    ensure(r.passed() && r.diagnostic.is_none(), || format!("{r:?}"))?;
    Ok(format!("divisible by (v-w); equal through total degree {}", r.order))
}

fn criterion_3() -> Outcome {
    let reports = verify_proof_steps(8);
    ensure(reports.len() == 5, || format!("expected 5 reports, got {}", reports.len()))?;
    for r in &reports {
        ensure(r.passed() && r.order == 8, || format!("{} failed: {r:?}", r.name))?;
    }
    let control = lemma2_swapped_control(8);
    ensure(!control.passed(), || "swapped-factor control unexpectedly passed".into())?;
    let f = control.first_failure.as_ref().expect("failing report has a location");
    Ok(format!(
        "4 lemmas + closing identity pass at order 8; swapped control fails at u^{} v^{} w^{}",
        f.u, f.v, f.w
    ))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for weight in 0..=6 {
        for w in Word::admissible_of_weight(weight) {
            let p = NcPoly::from_word(w);
            for order in 0..=6 {
                for t in [VarId::U, VarId::V, VarId::W] {
                    let a = delta_exp(t, &p, order);
                    let b = delta_subst(t, &p, order);
                    ensure(a == b, || format!("mismatch on {w} at order {order} in {}", t.name()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (word, order, variable) cases, zero discrepancies"))
}

fn criterion_5() -> Outcome {
    let x_plus_y = NcPoly::parse_sum("x+y").unwrap();
    for t in [VarId::U, VarId::V, VarId::W] {
        let image = delta_subst(t, &x_plus_y, 12);
        for m in 1..=12 {
            let c = image.coeff(&Monomial3::var(t, m));
            ensure(c.is_zero(), || format!("coefficient of {}^{m} is {c}", t.name()))?;
        }
        ensure(image.coeff(&Monomial3::ONE) == x_plus_y, || "constant term changed".into())?;
        ensure(delta_exp(t, &x_plus_y, 12) == image, || "exp route disagrees".into())?;
    }
    Ok("t^1..t^12 coefficients vanish for t in {u,v,w}".into())
}

fn criterion_6() -> Outcome {
    // Monomial degree is k − 2, so order 7 covers every k ≤ 9.
    let series = conjecture_lhs_series(7);
    let mut triples = 0;
    for k in 2..=9u32 {
        for s in SumSpec::all_at_weight(k) {
            // Words of weight k beginning x^m y, ending in y, with l letters y.
            let oracle = NcPoly::from_words(Word::all_of_weight(k as usize).filter(|w| {
                let letters: Vec<Letter> = w.letters().collect();
                let m = s.m as usize;
                letters[..m].iter().all(|&l| l == Letter::X)
                    && letters[m] == Letter::Y
                    && letters.last() == Some(&Letter::Y)
                    && letters.iter().filter(|&&l| l == Letter::Y).count() == s.l as usize
            }));
            let from_series = series.coeff(&s.monomial());
            let direct = sum_word(s.k, s.m, s.l).unwrap();
            ensure(from_series == oracle && direct == oracle, || {
                format!("(k,m,l)=({},{},{}): series {from_series}, sum_word {direct}, oracle {oracle}", s.k, s.m, s.l)
            })?;
            triples += 1;
        }
    }
    Ok(format!("{triples} triples with k <= 9 agree exactly"))
}

fn criterion_7() -> Outcome {
    let mut certs = 0;
    for k in 3..=10 {
        let summary = corollary_check_all(k).map_err(|e| e.to_string())?;
        for e in &summary.entries {
            let cert = &e.certificate;
            let mut expanded = NcPoly::zero();
            for t in &cert.combination {
                ensure(t.word.is_admissible(), || format!("non-admissible word {} in certificate", t.word))?;
                expanded.add_scaled(&t.coeff, &derivation_by_products(t.n.get(), &t.word));
            }
            let target = one_minus_tau(&sum_word(k, e.m, e.l).unwrap());
            ensure(expanded == target && cert.target == target, || {
                format!("k={k} m={} l={}: certificate does not reproduce the target", e.m, e.l)
            })?;
            certs += 1;
        }
    }
    let control = membership(&NcPoly::parse_sum("xy").unwrap(), 2).map_err(|e| e.to_string())?;
    ensure(control == Membership::NotMember, || "xy reported as a member at weight 2".into())?;
    Ok(format!("{certs} certificates for k=3..10 re-verified; xy not a member at weight 2"))
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6d7a76);
    let mut targets: Vec<(usize, NcPoly)> = Vec::new();
    for i in 0..60 {
        let k = rng.gen_range(2..=6usize);
        let p = if i % 2 == 0 {
            // Random combination of words: usually outside the span.
            let mut p = NcPoly::zero();
            for _ in 0..rng.gen_range(1..=4) {
                let w = Word::from_bits(k, rng.gen_range(0..(1u64 << k)));
                p.add_term(w, scalar(rng.gen_range(-3..=3)));
            }
            p
        } else {
            // Random combination of generator images: always inside.
            let basis = span_basis(k as u32);
            let mut p = NcPoly::zero();
            for g in &basis.generators {
                p.add_scaled(&scalar(rng.gen_range(-2..=2)), &g.image);
            }
            p
        };
        targets.push((k, p));
    }
    for k in 2..=6u32 {
        for s in SumSpec::all_at_weight(k) {
            targets.push((k as usize, one_minus_tau(&s.word_sum())));
        }
    }
    let mut solvers: BTreeMap<usize, SpanSolver> = BTreeMap::new();
    let (mut members, mut non_members) = (0, 0);
    for (k, target) in &targets {
        let solver = solvers.entry(*k).or_insert_with(|| SpanSolver::new(*k as u32));
        let decided = solver.membership(target).map_err(|e| e.to_string())?;
        let images: Vec<NcPoly> = solver.basis().generators.iter().map(|g| g.image.clone()).collect();
        let base_rank = dense_rank(&images, *k);
        let mut augmented = images.clone();
        augmented.push(target.clone());
        let oracle_member = dense_rank(&augmented, *k) == base_rank;
        ensure(decided.is_member() == oracle_member, || {
            format!("weight {k} target {target}: solver {} vs rank oracle {oracle_member}", decided.is_member())
        })?;
        ensure(base_rank == solver.rank(), || format!("rank mismatch at weight {k}"))?;
        if let Membership::Member(c) = &decided {
            ensure(c.verify(), || format!("certificate for {target} does not verify"))?;
            members += 1;
        } else {
            non_members += 1;
        }
    }
    Ok(format!("{} targets agree with rank oracle ({members} members, {non_members} non-members)", targets.len()))
}

fn criterion_9() -> Outcome {
    let d1 = mzv_core::derivation(DerivationId::new(1).unwrap(), &NcPoly::parse_sum("xy").unwrap());
    let euler = z_eval(&d1, 1_000_000).map_err(|e| e.to_string())?;
    ensure(euler.value.abs() < 1e-4, || format!("|Z(d1(xy))| = {}", euler.value))?;

    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 2..=7 {
        for w in Word::admissible_of_weight(k) {
            let i = Index::from_word(&w).unwrap();
            let d = i.dual().unwrap();
            let a = zeta_eval(&i, 100_000).map_err(|e| e.to_string())?;
            let b = zeta_eval(&d, 100_000).map_err(|e| e.to_string())?;
            let diff = (a.value - b.value).abs();
            let bound = a.tail_bound + b.tail_bound;
            ensure(diff <= bound, || format!("{i} vs {d}: |diff| {diff:e} > bound {bound:e}"))?;
            worst = worst.max(diff / bound);
            count += 1;
        }
    }
    let z2 = zeta_eval(&"(2)".parse().unwrap(), 1_000_000).map_err(|e| e.to_string())?;
    ensure((z2.value - 1.6449340668).abs() < 1e-5, || format!("zeta(2) = {}", z2.value))?;
    Ok(format!(
        "|Z(d1(xy))| = {:.2e}; {count} dual pairs within bounds (max ratio {worst:.3}); zeta(2) = {:.10}",
        euler.value.abs(),
        z2.value
    ))
}

fn full_run_json() -> String {
    let mut reports = vec![verify_duality_zeta(12), verify_duality_k1(8)];
    reports.extend(verify_proof_steps(8));
    reports.push(lemma2_swapped_control(8));
    let summaries: Vec<_> = (3..=8).map(|k| corollary_check_all(k).expect("corollary holds")).collect();
    let series = conjecture_lhs_series(5);
    let dual_gf = series.map_coeffs(tau);
    serde_json::to_string_pretty(&serde_json::json!({
        "reports": reports,
        "corollary": summaries,
        "generating_function": series,
        "tau_generating_function": dual_gf,
    }))
    .expect("serializable")
}

fn criterion_10() -> Outcome {
    let first = full_run_json();
    let second = full_run_json();
    ensure(first == second, || "two runs produced different JSON".into())?;
    Ok(format!("two runs, {} identical bytes", first.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1  duality-zeta identity at order 12", criterion_1),
        ("2  duality-k1 identity at order 8", criterion_2),
        ("3  proof lemmas + negative control", criterion_3),
        ("4  delta_exp == delta_subst (weight<=6, order<=6)", criterion_4),
        ("5  Delta_t(x+y) = x+y at order 12", criterion_5),
        ("6  generating function vs enumeration (k<=9)", criterion_6),
        ("7  corollary for k=3..10 + weight-2 control", criterion_7),
        ("8  solver vs rank oracle (weight<=6)", criterion_8),
        ("9  numeric residuals", criterion_9),
        ("10 determinism of JSON artifacts", criterion_10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} [{secs:.2}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name} [{secs:.2}s] {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
