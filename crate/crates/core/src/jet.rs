//! Jet (osculation) maps of explicitly parameterized scrolls.
//!
//! A chart is a list of coordinate polynomials in local variables
//! `u_1..u_m` (base) and `v_{m+1}..v_n` (fiber). The order-`k` jet matrix has one
//! row per partial derivative of order at most `k` and one column per coordinate.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::parse::parse_poly;
use crate::poly::{binomial, Poly, Rat};
use crate::scroll::max_rank;

pub const DEFAULT_TRIALS: u32 = 8;
pub const DEFAULT_HEIGHT: i64 = 100;
pub const MAX_MINORS: u128 = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct JetProbeSpec {
    pub vars: Vec<String>,
    /// number of base variables; the remaining ones are fiber variables
    pub base_vars: usize,
    pub coords: Vec<Poly>,
    pub k: u32,
    pub trials: u32,
    pub seed: u64,
    pub height: i64,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    variables: Vec<String>,
    #[serde(default)]
    base_variables: Option<usize>,
    coordinates: Vec<String>,
    k: u32,
    #[serde(default)]
    trials: Option<u32>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    height: Option<i64>,
}

impl JetProbeSpec {
    pub fn new<S: AsRef<str>>(vars: &[S], base_vars: usize, coords: &[&str], k: u32) -> Result<JetProbeSpec> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        if base_vars > vars.len() {
            return Err(Error::invalid("more base variables than variables"));
        }
        let coords = coords.iter().map(|c| parse_poly(c, &vars)).collect::<Result<Vec<_>>>()?;
        Self::from_polys(vars, base_vars, coords, k)
    }

    pub fn from_polys(vars: Vec<String>, base_vars: usize, coords: Vec<Poly>, k: u32) -> Result<JetProbeSpec> {
        if coords.is_empty() {
            return Err(Error::invalid("a chart needs at least one coordinate"));
        }
        if coords.iter().any(|c| c.nvars() != vars.len()) {
            return Err(Error::invalid("coordinate does not live in the declared variables"));
        }
        if !coords.iter().any(|c| c.is_constant() && !c.is_zero()) {
            log::warn!("no coordinate is a non-zero constant; the chart is not normalized");
        }
        Ok(JetProbeSpec { vars, base_vars, coords, k, trials: DEFAULT_TRIALS, seed: 0, height: DEFAULT_HEIGHT })
    }

    pub fn with_order(&self, k: u32) -> JetProbeSpec {
        JetProbeSpec { k, ..self.clone() }
    }

    pub fn with_sampling(mut self, trials: u32, seed: u64) -> JetProbeSpec {
        self.trials = trials;
        self.seed = seed;
        self
    }

    pub fn from_toml(src: &str) -> Result<JetProbeSpec> {
        let f: SpecFile = toml::from_str(src).map_err(|e| Error::Parse { pos: e.span().map_or(0, |s| s.start), msg: e.message().to_string() })?;
        let coords: Vec<&str> = f.coordinates.iter().map(|s| s.as_str()).collect();
        let base = f.base_variables.unwrap_or(f.variables.len());
        let mut spec = JetProbeSpec::new(&f.variables, base, &coords, f.k)?;
        spec.trials = f.trials.unwrap_or(DEFAULT_TRIALS);
        spec.seed = f.seed.unwrap_or(0);
        spec.height = f.height.unwrap_or(DEFAULT_HEIGHT);
        if spec.trials == 0 || spec.height < 1 {
            return Err(Error::invalid("trials and height must be positive"));
        }
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        let f = SpecFile {
            variables: self.vars.clone(),
            base_variables: Some(self.base_vars),
            coordinates: self.coords.iter().map(|c| c.display(&self.vars).to_string()).collect(),
            k: self.k,
            trials: Some(self.trials),
            seed: Some(self.seed),
            height: Some(self.height),
        };
        toml::to_string(&f).expect("spec serializes")
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// True when every coordinate has degree at most one in the fiber variables.
    pub fn is_scroll_chart(&self) -> bool {
        self.coords.iter().all(|c| c.terms().all(|(m, _)| m[self.base_vars..].iter().sum::<u32>() <= 1))
    }
}

/// Multi-indices of order at most `k` in graded-lex order.
pub fn multi_indices(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=k {
        let mut level = Vec::new();
        fill(n, total, &mut vec![0; n], 0, &mut level);
        level.sort_by(|a, b| b.cmp(a));
        out.extend(level);
    }
    out
}

fn fill(n: usize, left: u32, cur: &mut Vec<u32>, i: usize, out: &mut Vec<Vec<u32>>) {
    if i + 1 == n {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    if n == 0 {
        if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(n, left - e, cur, i + 1, out);
    }
}

fn derive(p: &Poly, alpha: &[u32]) -> Poly {
    alpha.iter().enumerate().fold(p.clone(), |acc, (i, &e)| if e == 0 { acc } else { acc.derivative(i, e) })
}

/// Jet matrix with unevaluated polynomial entries.
pub fn symbolic_jet_matrix(spec: &JetProbeSpec) -> Vec<Vec<Poly>> {
    multi_indices(spec.n(), spec.k).iter().map(|a| spec.coords.iter().map(|c| derive(c, a)).collect()).collect()
}

pub fn jet_matrix(spec: &JetProbeSpec, point: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    if point.len() != spec.n() {
        return Err(Error::invalid(format!("point has {} coordinates, chart has {} variables", point.len(), spec.n())));
    }
    Ok(symbolic_jet_matrix(spec).iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub per_trial: Vec<usize>,
    pub seed: u64,
    pub trials: u32,
    pub height: i64,
    pub confidence: String,
    pub notice: Option<String>,
}

impl fmt::Display for RankReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generic rank {} (confidence: {})", self.rank, self.confidence)?;
        writeln!(f, "per trial    {:?}", self.per_trial)?;
        write!(f, "seed {}, height {}", self.seed, self.height)?;
        if let Some(n) = &self.notice {
            write!(f, "\nnotice       {n}")?;
        }
        Ok(())
    }
}

fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> Rat {
    Rat::new(BigInt::from(rng.random_range(-height..=height)), BigInt::from(rng.random_range(1..=height)))
}

pub fn sample_points(spec: &JetProbeSpec, count: u32, seed: u64) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..spec.n()).map(|_| random_rational(&mut rng, spec.height)).collect()).collect()
}

/// Maximum jet rank over seeded random rational points.
pub fn generic_jet_rank(spec: &JetProbeSpec) -> Result<RankReport> {
    if spec.trials == 0 {
        return Err(Error::invalid("at least one trial is needed"));
    }
    let symbolic = symbolic_jet_matrix(spec);
    let rank_at = |p: &Vec<Rat>| -> usize {
        let m: Vec<Vec<Rat>> = symbolic.iter().map(|row| row.iter().map(|e| e.eval(p)).collect()).collect();
        linalg::rank(&m)
    };
    let mut notice = None;
    let mut seed = spec.seed;
    for _round in 0..4 {
        let points = sample_points(spec, spec.trials, seed);
        let per_trial: Vec<usize> = std::thread::scope(|s| {
            let handles: Vec<_> = points.iter().map(|p| s.spawn(|| rank_at(p))).collect();
            handles.into_iter().map(|h| h.join().expect("rank worker")).collect()
        });
        let rank = per_trial.iter().copied().max().unwrap_or(0);
        if rank > 0 {
            return Ok(RankReport {
                rank,
                per_trial,
                seed: spec.seed,
                trials: spec.trials,
                height: spec.height,
                confidence: "sampled".into(),
                notice,
            });
        }
        notice = Some(format!("every point sampled with seed {seed} gave the zero matrix; resampled"));
        log::warn!("{}", notice.as_deref().unwrap_or_default());
        seed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    }
    Err(Error::Resource("every sampled point lies on the zero locus of the jet matrix".into()))
}

/// Rank over the field of rational functions in the chart variables.
pub fn symbolic_rank(spec: &JetProbeSpec) -> Result<usize> {
    linalg::rank_poly(&symbolic_jet_matrix(spec))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InflectionEquations {
    pub size: usize,
    pub minor_count: usize,
    /// monic gcd of all non-zero minors
    pub content: Poly,
    /// non-zero minors divided by the content
    pub generators: Vec<Poly>,
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] != i + n - r) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The `r x r` minors of the symbolic jet matrix with their common factor pulled out.
pub fn inflection_equations(spec: &JetProbeSpec, r: usize) -> Result<InflectionEquations> {
    let m = symbolic_jet_matrix(spec);
    // zero rows contribute nothing to any non-zero minor
    let rows: Vec<Vec<Poly>> = m.into_iter().filter(|row| row.iter().any(|e| !e.is_zero())).collect();
    let (nr, nc) = (rows.len(), spec.coords.len());
    if r == 0 || r > nr.min(nc) {
        return Err(Error::invalid(format!("minor size {r} exceeds the {nr} x {nc} matrix of non-zero rows")));
    }
    let count = binomial(nr as i64, r as i64) as u128 * binomial(nc as i64, r as i64) as u128;
    if count > MAX_MINORS {
        return Err(Error::Resource(format!("{count} minors exceed the limit of {MAX_MINORS}")));
    }
    let row_sets = combinations(nr, r);
    let col_sets = combinations(nc, r);
    let jobs: Vec<(&Vec<usize>, &Vec<usize>)> = row_sets.iter().flat_map(|rs| col_sets.iter().map(move |cs| (rs, cs))).collect();
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = jobs.len().div_ceil(workers).max(1);
    let minors: Vec<Poly> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                let rows = &rows;
                s.spawn(move || {
                    part.iter()
                        .map(|(rs, cs)| {
                            let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                            linalg::det_poly(&sub)
                        })
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("minor worker")).collect::<Result<Vec<Vec<Poly>>>>()
    })?
    .into_iter()
    .flatten()
    .filter(|p| !p.is_zero())
    .collect();
    let nv = spec.n();
    let content = minors.iter().fold(Poly::zero(nv), |g, p| Poly::gcd(&g, p));
    let content = if content.is_zero() { Poly::zero(nv) } else { content.monic() };
    let generators = if content.is_zero() {
        vec![]
    } else {
        minors.iter().map(|p| p.div_exact(&content).expect("content divides every minor").primitive()).collect()
    };
    Ok(InflectionEquations { size: r, minor_count: jobs.len(), content, generators })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRank {
    pub predicted: usize,
    pub direct: usize,
}

/// Segre product of a chart with `P^fiber_dim`, using the affine chart `(1: v_1: ...: v_f)`.
pub fn product_chart(base: &JetProbeSpec, fiber_dim: usize) -> Result<JetProbeSpec> {
    let mut vars = base.vars.clone();
    let nb = vars.len();
    for j in 1..=fiber_dim {
        vars.push(format!("w{j}"));
    }
    let n = vars.len();
    let lift = |p: &Poly| Poly::from_terms(n, p.terms().map(|(m, c)| ([m.clone(), vec![0; fiber_dim]].concat(), c.clone())));
    let mut coords = Vec::new();
    for f in std::iter::once(Poly::one(n)).chain((0..fiber_dim).map(|j| Poly::var(n, nb + j))) {
        for c in &base.coords {
            coords.push(&lift(c) * &f);
        }
    }
    let mut spec = JetProbeSpec::from_polys(vars, nb, coords, base.k)?;
    spec.trials = base.trials;
    spec.seed = base.seed;
    spec.height = base.height;
    Ok(spec)
}

/// `(n - m) rk j_{k-1} + rk j_k` of the base against a direct probe of the product.
pub fn product_rank_identity(base: &JetProbeSpec, fiber_dim: usize) -> Result<ProductRank> {
    if base.k == 0 {
        return Err(Error::invalid("the identity needs k >= 1"));
    }
    let low = generic_jet_rank(&base.with_order(base.k - 1))?.rank;
    let high = generic_jet_rank(base)?.rank;
    let direct = generic_jet_rank(&product_chart(base, fiber_dim)?)?.rank;
    let out = ProductRank { predicted: fiber_dim * low + high, direct };
    if out.predicted != out.direct {
        log::warn!("product rank identity fails: predicted {}, direct {}", out.predicted, out.direct);
    }
    Ok(out)
}

/// Chart builders for the standard examples.
pub mod charts {
    use super::*;

    fn monomials_up_to(n: usize, deg: u32) -> Vec<Vec<u32>> {
        multi_indices(n, deg)
    }

    fn names(prefix: &str, count: usize) -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    }

    fn build(vars: Vec<String>, base: usize, exps: Vec<Vec<u32>>, k: u32) -> JetProbeSpec {
        let n = vars.len();
        let coords = exps.into_iter().map(|e| Poly::monomial(e, Rat::from_integer(1.into()))).collect();
        let _ = n;
        JetProbeSpec::from_polys(vars, base, coords, k).expect("well-formed chart")
    }

    /// `P^m x P^(n-m)` with coordinates `1, u_i, v_j, u_i v_j`.
    pub fn segre(m: usize, f: usize, k: u32) -> JetProbeSpec {
        let mut vars = names("u", m);
        vars.extend(names("v", f));
        let n = m + f;
        let unit = |i: usize| (0..n).map(|j| u32::from(i == j)).collect::<Vec<u32>>();
        let mut exps = vec![vec![0; n]];
        exps.extend((0..n).map(unit));
        for i in 0..m {
            for j in m..n {
                let mut e = vec![0; n];
                e[i] = 1;
                e[j] = 1;
                exps.push(e);
            }
        }
        build(vars, m, exps, k)
    }

    /// `(P^1)^n`: all square-free monomials in `u_1..u_(n-1), v`.
    pub fn p1_power(n: usize, k: u32) -> JetProbeSpec {
        let mut vars = names("u", n - 1);
        vars.push("v".into());
        let exps = (0..1u32 << n).map(|mask| (0..n).map(|i| (mask >> i) & 1).collect()).collect();
        build(vars, n - 1, exps, k)
    }

    /// Flag threefold in `P^7`: pairs `x = (1, u1, u2)`, `y = (-u1 v - u2, v, 1)` with
    /// `sum x_i y_i = 0`, Segre products `x_i y_j` without `x_2 y_2`.
    pub fn flag_threefold(k: u32) -> JetProbeSpec {
        let vars = ["u1", "u2", "v"];
        let coords = [
            "-u1*v - u2",
            "v",
            "1",
            "-u1^2*v - u1*u2",
            "u1*v",
            "u1",
            "-u1*u2*v - u2^2",
            "u2*v",
        ];
        JetProbeSpec::new(&vars, 2, &coords, k).expect("valid")
    }

    /// `P(O(1) + O(2))` over `P^m`: `1, u_i, v, v u^a` with `|a| <= 2`.
    pub fn example5(m: usize, k: u32) -> JetProbeSpec {
        let mut vars = names("u", m);
        if m == 1 {
            vars = vec!["u".into()];
        }
        vars.push("v".into());
        let mut exps: Vec<Vec<u32>> = monomials_up_to(m, 1).into_iter().map(|mut e| {
            e.push(0);
            e
        }).collect();
        exps.extend(monomials_up_to(m, 2).into_iter().map(|mut e| {
            e.push(1);
            e
        }));
        build(vars, m, exps, k)
    }

    /// Cubic surface scroll `(1: u: v: vu: vu^2)` in `P^4`.
    pub fn cubic_scroll(k: u32) -> JetProbeSpec {
        JetProbeSpec::new(&["u", "v"], 1, &["1", "u", "v", "v*u", "v*u^2"], k).expect("valid")
    }

    /// Cubic threefold sections of the twisted-cubic ideal, near a fiber of the exceptional divisor.
    pub fn bordiga(k: u32) -> JetProbeSpec {
        let coords = [
            "x^2 - y",
            "x^3 - x*y",
            "x^2*y - y^2",
            "x*y - y*w",
            "x*y^2 - y^2*w",
            "x*y^2*w - y^2*w^2",
            "x*y*w - y^2",
            "x^2*y*w - x*y^2",
            "x*y^2*w - y^3",
            "x*y^2*w^2 - y^3*w",
        ];
        JetProbeSpec::new(&["x", "y", "w"], 3, &coords, k).expect("valid")
    }

    /// Veronese surface in `P^5`.
    pub fn veronese(k: u32) -> JetProbeSpec {
        build(names("u", 2), 2, monomials_up_to(2, 2), k)
    }

    /// Rational normal curve of degree `deg`.
    pub fn rational_normal_curve(deg: u32, k: u32) -> JetProbeSpec {
        build(vec!["t".into()], 1, (0..=deg).map(|e| vec![e]).collect(), k)
    }

    /// Cubic scroll `F_1` in `P^4` regarded as a surface base.
    pub fn cubic_scroll_base(k: u32) -> JetProbeSpec {
        let mut s = cubic_scroll(k);
        s.base_vars = 2;
        s
    }
}

/// A bundled probe with its recorded outcome.
pub struct Probe {
    pub id: String,
    run: Box<dyn Fn() -> Result<(String, String)> + Send + Sync>,
}

impl Probe {
    /// `(expected, actual)` as display strings.
    pub fn run(&self) -> Result<(String, String)> {
        (self.run)()
    }
}

fn rank_probe(id: String, spec: JetProbeSpec, expected: usize) -> Probe {
    Probe {
        id,
        run: Box::new(move || Ok((format!("rank {expected}"), format!("rank {}", generic_jet_rank(&spec)?.rank)))),
    }
}

fn content_probe(id: &str, spec: JetProbeSpec, r: usize, rank: usize, content: &'static str) -> Probe {
    Probe {
        id: id.into(),
        run: Box::new(move || {
            let eq = inflection_equations(&spec, r)?;
            let got = eq.content.display(&spec.vars).to_string();
            let rk = generic_jet_rank(&spec)?.rank;
            Ok((format!("rank {rank}, content {content}"), format!("rank {rk}, content {got}")))
        }),
    }
}

fn product_probe(id: &str, base: JetProbeSpec, expected: usize) -> Probe {
    Probe {
        id: id.into(),
        run: Box::new(move || {
            let r = product_rank_identity(&base, 1)?;
            Ok((format!("{expected} = {expected}"), format!("{} = {}", r.predicted, r.direct)))
        }),
    }
}

pub fn bundled_probes() -> Vec<Probe> {
    let mut out = Vec::new();
    for (m, f) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
        let big_n = m * f + m + f;
        out.push(rank_probe(format!("segre.{m}x{f}"), charts::segre(m, f, 2), big_n + 1));
    }
    for n in 3..=5 {
        out.push(rank_probe(format!("p1_power.{n}"), charts::p1_power(n, 2), binomial(n as i64 + 2, 2) as usize - n));
    }
    out.push(rank_probe("flag_threefold".into(), charts::flag_threefold(2), 8));
    out.push(rank_probe("example5.m2".into(), charts::example5(2, 2), 9));
    out.push(content_probe("example5.m2.minors", charts::example5(2, 2), 9, 9, "v^3"));
    out.push(content_probe("cubic_scroll.minors", charts::cubic_scroll(2), 5, 5, "v"));
    out.push(Probe {
        id: "bordiga.minors".into(),
        run: Box::new(|| {
            let spec = charts::bordiga(2);
            let rk = generic_jet_rank(&spec)?.rank;
            let eq = inflection_equations(&spec, 9)?;
            let y = Poly::var(3, 1);
            let divisible = eq.content.div_exact(&y).is_some();
            Ok(("rank 9, y divides every minor".into(), format!("rank {rk}, y {} every minor", if divisible { "divides" } else { "does not divide" })))
        }),
    });
    out.push(product_probe("product.veronese", charts::veronese(2), 9));
    out.push(product_probe("product.cubic_scroll", charts::cubic_scroll_base(2), 8));
    for k in 1..=3 {
        out.push(product_probe(&format!("product.rnc3.k{k}"), charts::rational_normal_curve(3, k), 2 * k as usize + 1));
    }
    out
}

/// Upper bound from the rank formula, when the chart has scroll shape.
pub fn rank_bound(spec: &JetProbeSpec) -> Option<u64> {
    let n = spec.n() as u32;
    let m = spec.base_vars as u32;
    (m >= 1 && m < n && spec.is_scroll_chart()).then(|| max_rank(n, m, spec.k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_order_and_count() {
        let idx = multi_indices(2, 2);
        assert_eq!(idx, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_indices(3, 2).len(), 10);
    }

    #[test]
    fn constants_only_has_rank_one() {
        let spec = JetProbeSpec::new(&["u", "v"], 1, &["1", "2", "-3"], 1).unwrap();
        assert_eq!(generic_jet_rank(&spec).unwrap().rank, 1);
    }

    #[test]
    fn segre_and_example5_at_a_point() {
        let pt: Vec<Rat> = [3, -2, 5].iter().map(|&v| Rat::from_integer(v.into())).collect();
        assert_eq!(linalg::rank(&jet_matrix(&charts::segre(2, 1, 2), &pt).unwrap()), 6);
        assert_eq!(linalg::rank(&jet_matrix(&charts::example5(2, 2), &pt).unwrap()), 9);
    }

    #[test]
    fn symbolic_rank_agrees() {
        assert_eq!(symbolic_rank(&charts::flag_threefold(2)).unwrap(), 8);
        assert_eq!(symbolic_rank(&charts::p1_power(3, 2)).unwrap(), 7);
    }

    #[test]
    fn cubic_scroll_locus() {
        let eq = inflection_equations(&charts::cubic_scroll(2), 5).unwrap();
        assert_eq!(eq.content.display(&["u", "v"]).to_string(), "v");
    }

    #[test]
    fn toml_roundtrip() {
        let spec = charts::example5(2, 2).with_sampling(4, 7);
        let back = JetProbeSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn minor_guard() {
        let spec = charts::p1_power(5, 3);
        assert!(matches!(inflection_equations(&spec, 16), Err(Error::Resource(_))));
    }
}
