//! Randomized properties shared by the property suite and the acceptance run.

#![allow(dead_code)]

use std::sync::Arc;

use inflex_core::jet::{self, JetProbeSpec};
use inflex_core::poly::{binomial, int};
use inflex_core::scroll::{chern_wu_reduce, pushforward};
use inflex_core::{max_rank, FormalBundle, GradedClass, GradedVariable, Poly, Rat, Ring, Strategy as Split};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 500;

pub type Outcome = Result<(), TestCaseError>;

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn graded_ring() -> Arc<Ring> {
    Ring::new(
        vec![GradedVariable::new("a", 1), GradedVariable::new("b", 1), GradedVariable::new("p", 2), GradedVariable::new("q", 3)],
        None,
    )
    .expect("valid ring")
}

/// Monomials of weighted degree `1..=t` in the ring.
fn monomials(ring: &Ring, t: u32) -> Vec<Vec<u32>> {
    let n = ring.len();
    let mut out = vec![vec![0u32; n]];
    for i in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let mut m = m.clone();
            loop {
                if ring.degree(&m) > t {
                    break;
                }
                next.push(m.clone());
                m[i] += 1;
            }
        }
        out = next;
    }
    out.retain(|m| ring.degree(m) >= 1);
    out.sort();
    out
}

fn class_from_coeffs(ring: &Arc<Ring>, t: u32, coeffs: &[i64], constant: i64) -> GradedClass {
    let mons = monomials(ring, t);
    let mut p = Poly::constant(ring.len(), int(constant));
    for (m, c) in mons.iter().zip(coeffs.iter().cycle()) {
        p.add_term(m.clone(), int(*c));
    }
    GradedClass::from_poly(ring, t, p).expect("admissible")
}

pub fn series_inverse_strategy() -> impl Strategy<Value = (u32, Vec<i64>)> {
    (1u32..=5, prop::collection::vec(-6i64..=6, 1..40))
}

/// `c * c^{-1} = 1` for every class with constant term one.
pub fn series_inverse((t, coeffs): (u32, Vec<i64>)) -> Outcome {
    let ring = graded_ring();
    let c = class_from_coeffs(&ring, t, &coeffs, 1);
    let inv = c.series_inverse().map_err(|e| fail(e.to_string()))?;
    let prod = &c * &inv;
    prop_assert_eq!(prod, GradedClass::one(&ring, t));
    let back = inv.series_inverse().map_err(|e| fail(e.to_string()))?;
    prop_assert_eq!(back, c);
    Ok(())
}

fn roots_ring() -> Arc<Ring> {
    Ring::new((1..=3).map(|i| GradedVariable::new(format!("x{i}"), 1)).collect(), None).expect("valid ring")
}

fn linear(ring: &Arc<Ring>, t: u32, coeffs: &[i64]) -> GradedClass {
    let p = Poly::from_terms(ring.len(), coeffs.iter().enumerate().map(|(i, c)| ((0..ring.len()).map(|j| u32::from(i == j)).collect(), int(*c))));
    GradedClass::from_poly(ring, t, p).expect("degree one")
}

fn product_of(ring: &Arc<Ring>, t: u32, roots: &[GradedClass]) -> GradedClass {
    roots.iter().fold(GradedClass::one(ring, t), |acc, r| &acc * &(&GradedClass::one(ring, t) + r))
}

fn bundle(ring: &Arc<Ring>, t: u32, roots: &[GradedClass]) -> FormalBundle {
    FormalBundle::new(roots.len() as u32, product_of(ring, t, roots)).expect("constant term one")
}

fn multisets(n: usize, k: u32) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..n {
            let mut m = rest.clone();
            m.push(i);
            out.push(m);
        }
    }
    out
}

pub type RootsInput = (u32, Vec<[i64; 3]>, Vec<[i64; 3]>, u32, i32);

pub fn roots_strategy() -> impl Strategy<Value = RootsInput> {
    let root = prop::array::uniform3(-3i64..=3);
    (1u32..=4, prop::collection::vec(root.clone(), 1..=3), prop::collection::vec(root, 1..=3), 1u32..=3, prop::sample::select(vec![-1, 1]))
}

/// Whitney sums, duals, twists, tensor products and symmetric powers of split
/// bundles of rank at most 3 agree with products over their roots, under both strategies.
pub fn root_consistency((t, e_roots, f_roots, k, sign): RootsInput) -> Outcome {
    let ring = roots_ring();
    let e: Vec<GradedClass> = e_roots.iter().map(|c| linear(&ring, t, c)).collect();
    let f: Vec<GradedClass> = f_roots.iter().map(|c| linear(&ring, t, c)).collect();
    let be = bundle(&ring, t, &e);
    let bf = bundle(&ring, t, &f);
    let err = |x: inflex_core::Error| fail(x.to_string());

    let sum = be.direct_sum(&bf).map_err(err)?;
    let all: Vec<GradedClass> = e.iter().chain(&f).cloned().collect();
    prop_assert_eq!(sum.total_chern(), &product_of(&ring, t, &all));

    let neg: Vec<GradedClass> = e.iter().map(|r| -r).collect();
    let dual = be.dual();
    prop_assert_eq!(dual.total_chern(), &product_of(&ring, t, &neg));

    let l = &f[0];
    let twisted: Vec<GradedClass> = e.iter().map(|r| if sign > 0 { r + l } else { r - l }).collect();
    let tw = be.tensor_line(l, sign).map_err(err)?;
    prop_assert_eq!(tw.total_chern(), &product_of(&ring, t, &twisted));

    let pairs: Vec<GradedClass> = e.iter().flat_map(|a| f.iter().map(move |b| a + b)).collect();
    let expected_tensor = product_of(&ring, t, &pairs);
    for s in [Split::Roots, Split::Newton] {
        let got = be.tensor_with(&bf, s).map_err(err)?;
        prop_assert_eq!(got.rank() as usize, pairs.len());
        prop_assert_eq!(got.total_chern(), &expected_tensor);
    }

    let sym_roots: Vec<GradedClass> = multisets(e.len(), k)
        .iter()
        .map(|ms| ms.iter().fold(GradedClass::zero(&ring, t), |acc, &i| &acc + &e[i]))
        .collect();
    let expected_sym = product_of(&ring, t, &sym_roots);
    for s in [Split::Roots, Split::Newton] {
        let got = be.sym_power_with(k, s).map_err(err)?;
        prop_assert_eq!(got.rank() as i64, binomial(e.len() as i64 + k as i64 - 1, k as i64));
        prop_assert_eq!(got.total_chern(), &expected_sym);
    }
    Ok(())
}

pub type TotalInput = (u32, u32, Vec<i64>, Vec<i64>);

pub fn total_strategy() -> impl Strategy<Value = TotalInput> {
    (prop::sample::select(vec![(2u32, 1u32), (3, 1), (3, 2), (4, 2), (4, 3)]), prop::collection::vec(-5i64..=5, 1..30), prop::collection::vec(-5i64..=5, 1..12))
        .prop_map(|((n, m), a, b)| (n, m, a, b))
}

fn random_total(n: u32, m: u32, coeffs: &[i64]) -> GradedClass {
    let ring = Ring::total_space(n, m);
    let mons = monomials(&ring, n);
    let mut p = Poly::zero(ring.len());
    for (i, (mm, c)) in mons.iter().zip(coeffs.iter().cycle()).enumerate() {
        // sparse: skip most monomials
        if i % 3 == 0 {
            p.add_term(mm.clone(), int(*c));
        }
    }
    GradedClass::from_poly(&ring, n, p).expect("admissible")
}

/// Reduction is idempotent and leaves only L-powers below the fiber rank plus one.
pub fn chern_wu_idempotent((n, m, coeffs, _): TotalInput) -> Outcome {
    let x = random_total(n, m, &coeffs);
    let r = n - m + 1;
    let once = chern_wu_reduce(&x, r).map_err(|e| fail(e.to_string()))?;
    let twice = chern_wu_reduce(&once, r).map_err(|e| fail(e.to_string()))?;
    prop_assert_eq!(&once, &twice);
    let li = x.ring().index("L").expect("L");
    prop_assert!(once.poly().terms().all(|(mm, _)| mm[li] < r));
    Ok(())
}

/// `pi_*(pi^* beta * alpha) = beta * pi_*(alpha)`.
pub fn projection_formula((n, m, coeffs, beta): TotalInput) -> Outcome {
    let alpha = random_total(n, m, &coeffs);
    let ring = alpha.ring().clone();
    let r = n - m + 1;
    let li = ring.index("L").expect("L");
    let mut b = Poly::zero(ring.len());
    for (i, (mm, c)) in monomials(&ring, n).iter().filter(|mm| mm[li] == 0).zip(beta.iter().cycle()).enumerate() {
        if i % 2 == 0 {
            b.add_term(mm.clone(), int(*c));
        }
    }
    b.add_term(vec![0; ring.len()], int(beta[0]));
    let up = GradedClass::from_poly(&ring, n, b.clone()).expect("admissible");
    let lhs = pushforward(&(&up * &alpha), r).map_err(|e| fail(e.to_string()))?;
    let pa = pushforward(&alpha, r).map_err(|e| fail(e.to_string()))?;
    let map: Vec<usize> = (0..ring.len()).map(|i| if i < li { i } else { i.saturating_sub(1) }).collect();
    let down = GradedClass::from_poly(pa.ring(), pa.truncation(), b.remap(pa.ring().len(), &map)).expect("base class");
    prop_assert_eq!(lhs, &down * &pa);
    // normalization
    let lr = GradedClass::var(&ring, n, "L").expect("L").pow(r - 1);
    prop_assert_eq!(pushforward(&lr, r).map_err(|e| fail(e.to_string()))?, GradedClass::one(pa.ring(), pa.truncation()));
    Ok(())
}

pub type ChartInput = (usize, usize, Vec<i64>, u64);

pub fn chart_strategy() -> impl Strategy<Value = ChartInput> {
    (1usize..=2, 1usize..=2, prop::collection::vec(-4i64..=4, 24), any::<u64>())
}

/// Random scroll chart `1, a_i(u), b_ij(u) v_j` with polynomial `a`, `b` of degree at most 2.
pub fn random_chart(m: usize, f: usize, coeffs: &[i64], k: u32) -> JetProbeSpec {
    let n = m + f;
    let base_mons: Vec<Vec<u32>> = jet::multi_indices(m, 2);
    let mut cs = coeffs.iter().cycle();
    let mut next_poly = |fiber: Option<usize>| {
        let mut p = Poly::zero(n);
        for bm in &base_mons {
            let c = *cs.next().expect("cycle");
            let mut e = bm.clone();
            e.extend(vec![0; f]);
            if let Some(j) = fiber {
                e[m + j] = 1;
            }
            p.add_term(e, Rat::from_integer(c.into()));
        }
        p
    };
    let mut coords = vec![Poly::one(n)];
    for _ in 0..3 {
        coords.push(next_poly(None));
    }
    for j in 0..f {
        for _ in 0..3 {
            coords.push(next_poly(Some(j)));
        }
    }
    let mut vars: Vec<String> = (1..=m).map(|i| format!("u{i}")).collect();
    vars.extend((1..=f).map(|j| format!("v{j}")));
    JetProbeSpec::from_polys(vars, m, coords, k).expect("valid chart")
}

/// `s_k <= r_k`, rank monotone in `k`, row count, and vanishing of pure fiber rows.
pub fn jet_rank_bound((m, f, coeffs, seed): ChartInput) -> Outcome {
    let n = m + f;
    for k in 1..=2u32 {
        let spec = random_chart(m, f, &coeffs, k).with_sampling(2, seed);
        prop_assert!(spec.is_scroll_chart());
        let report = jet::generic_jet_rank(&spec).map_err(|e| fail(e.to_string()))?;
        prop_assert!(report.rank as u64 <= max_rank(n as u32, m as u32, k));
        let pt = &jet::sample_points(&spec, 1, seed)[0];
        let low = jet::jet_matrix(&spec.with_order(k - 1), pt).map_err(|e| fail(e.to_string()))?;
        let high = jet::jet_matrix(&spec, pt).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(high.len() as i64, binomial((n as u32 + k) as i64, k as i64));
        let rank = |x: &Vec<Vec<Rat>>| inflex_core::linalg::rank(x);
        prop_assert!(rank(&low) <= rank(&high));
        // the probe point is the first sampled point, so it cannot beat the maximum
        prop_assert!(rank(&high) <= report.rank);
        for (alpha, row) in jet::multi_indices(n, k).iter().zip(&high) {
            let pure_fiber = alpha[..m].iter().all(|&e| e == 0) && alpha[m..].iter().sum::<u32>() >= 2;
            if pure_fiber {
                prop_assert!(row.iter().all(|x| *x == Rat::from_integer(0.into())));
            }
        }
    }
    Ok(())
}

/// Runs one property for `CASES` cases with a fixed seed; used by the acceptance target.
pub fn run<S: Strategy>(strategy: S, property: impl Fn(S::Value) -> Outcome) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha));
    runner.run(&strategy, property).map_err(|e| e.to_string())
}
