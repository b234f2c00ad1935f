//! Exhaustive integer-point scans for uninflected scrolls.
//!
//! A scan looks for integer solutions of `deg = 0`, where the degree is written
//! over a set of basis unknowns. One unknown is enumerated, one is solved for
//! (the equation must be linear in it), and optional outer unknowns range over
//! fixed windows. Enumeration ranges are derived, never hard-coded:
//!
//! * sign analysis: if `deg = sum a_q q + R(x)` with positive constants `a_q` and
//!   lower bounds `q >= lb_q`, then `R(x) + sum a_q lb_q <= 0`;
//! * divisibility: if `deg = (alpha x + beta) s + B(x)`, then `alpha x + beta`
//!   divides `alpha^deg(B) B(-beta/alpha)`.
//!
//! A margin of 5 is added on both sides of the derived range.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::base::{ChowModel, NumericalBaseData, Preset};
use crate::closed_forms::{self as cf, scan_equations, ScalarForm};
use crate::error::{Error, Result};
use crate::poly::{int, Poly, Rat};
use crate::scroll::{self, ScrollSetup};

pub const MARGIN: i64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "P2_N10")]
    PlaneN10,
    #[serde(rename = "P2_N9")]
    PlaneN9,
    Fe,
    #[serde(rename = "ProductsBxP1")]
    CurveTimesLine,
    P3,
    Q3,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "p2_n10" | "p2n10" => Family::PlaneN10,
            "p2_n9" | "p2n9" => Family::PlaneN9,
            "fe" => Family::Fe,
            "productsbxp1" | "bxp1" => Family::CurveTimesLine,
            "p3" => Family::P3,
            "q3" => Family::Q3,
            _ => return Err(Error::invalid(format!("unknown scan family '{s}'"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::PlaneN10 => "P2_N10",
            Family::PlaneN9 => "P2_N9",
            Family::Fe => "Fe",
            Family::CurveTimesLine => "ProductsBxP1",
            Family::P3 => "P3",
            Family::Q3 => "Q3",
        }
    }
}

/// Integer values of the basis and derived unknowns at one candidate.
pub struct Point<'a> {
    names: &'a [String],
    values: &'a [i128],
}

impl Point<'_> {
    pub fn get(&self, name: &str) -> i128 {
        let i = self.names.iter().position(|n| n == name).unwrap_or_else(|| panic!("no unknown named '{name}'"));
        self.values[i]
    }
}

type Test = Arc<dyn Fn(&Point) -> bool + Send + Sync>;
type Note = Arc<dyn Fn(&Point) -> Option<String> + Send + Sync>;

#[derive(Clone)]
pub struct Constraint {
    pub name: String,
    pub reason: String,
    test: Test,
}

fn constraint(name: &str, reason: &str, test: impl Fn(&Point) -> bool + Send + Sync + 'static) -> Constraint {
    Constraint { name: name.into(), reason: reason.into(), test: Arc::new(test) }
}

/// Integer polynomial with checked evaluation.
#[derive(Clone, Debug)]
struct IntPoly {
    terms: Vec<(Vec<u32>, i128)>,
}

impl IntPoly {
    /// `p` scaled to integer coefficients (the scale is irrelevant for `p = 0`).
    fn from_poly(p: &Poly) -> Result<IntPoly> {
        let mut lcm = BigInt::from(1);
        for (_, c) in p.terms() {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let terms = p
            .terms()
            .map(|(m, c)| {
                let v = (c * Rat::from_integer(lcm.clone())).to_integer();
                v.to_i128().map(|v| (m.clone(), v)).ok_or_else(|| Error::Resource("coefficient exceeds 128 bits".into()))
            })
            .collect::<Result<_>>()?;
        Ok(IntPoly { terms })
    }

    fn eval(&self, x: &[i128]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (v, &e) in x.iter().zip(m) {
                for _ in 0..e {
                    t = t.checked_mul(*v)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundRule {
    /// range from the sign of the equation with positive unknowns at their lower bounds
    Sign,
    /// range from integrality of the solved unknown, recomputed for each outer value
    Divisibility,
}

#[derive(Clone)]
pub struct ScanProblem {
    pub family: Family,
    pub params: Vec<(String, i64)>,
    /// basis unknowns: outer ones, then the enumerated one, then the solved one
    basis: Vec<String>,
    outer: Vec<(i64, i64)>,
    /// degree-zero equation over the basis
    pub equation: ScalarForm,
    derived: Vec<(String, ScalarForm)>,
    /// equation before the Chern-Wu substitution, for sign analysis
    sign_form: Option<ScalarForm>,
    positive: Vec<(String, i64)>,
    x_floor: Option<i64>,
    pub rule: BoundRule,
    pub constraints: Vec<Constraint>,
    exclusions: Vec<Note>,
    /// Fe and B x P^1: survivors are expected on a parametric family
    condition: Option<(String, Test, Note)>,
    scale: i64,
    expected: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub scope: String,
    pub var: String,
    pub lo: i64,
    pub hi: i64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Survivor {
    pub values: Vec<(String, i64)>,
    pub note: Option<String>,
    pub excluded: bool,
}

impl fmt::Display for Survivor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.values.iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "({})", inner.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Empty,
    EmptyAfterExclusions,
    ExceptionalCondition,
    SurvivorsListed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Empty => "empty",
            Verdict::EmptyAfterExclusions => "empty after exclusions",
            Verdict::ExceptionalCondition => "exceptional condition",
            Verdict::SurvivorsListed => "survivors listed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: String,
    pub params: Vec<(String, i64)>,
    pub equation: String,
    pub bounds: Vec<BoundRecord>,
    pub candidates: u64,
    pub integral: u64,
    pub rejected: BTreeMap<String, u64>,
    pub survivors: Vec<Survivor>,
    pub verdict: Verdict,
    pub condition: Option<String>,
}

impl ScanReport {
    /// One-line outcome; identical for scans that agree.
    pub fn summary(&self) -> String {
        let list = |xs: &[Survivor]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ");
        match self.verdict {
            Verdict::Empty => "empty".into(),
            Verdict::EmptyAfterExclusions => format!("excluded {{{}}}", list(&self.survivors)),
            Verdict::ExceptionalCondition => format!("exceptional: {}", self.condition.clone().unwrap_or_default()),
            Verdict::SurvivorsListed => format!("survivors {{{}}}", list(&self.survivors)),
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("family     {}\n", std::iter::once(self.family.clone()).chain(params).collect::<Vec<_>>().join(" ")));
        out.push_str(&format!("equation   {} = 0\n", self.equation));
        for b in self.bounds.iter().take(6) {
            out.push_str(&format!("bounds     {}{} <= {} <= {}  ({})\n", b.scope, b.lo, b.var, b.hi, b.reason));
        }
        if self.bounds.len() > 6 {
            out.push_str(&format!("           ... {} more ranges\n", self.bounds.len() - 6));
        }
        out.push_str(&format!("candidates {}\nintegral   {}\n", self.candidates, self.integral));
        for (name, count) in &self.rejected {
            out.push_str(&format!("rejected   {count:>6}  {name}\n"));
        }
        for s in &self.survivors {
            let tag = if s.excluded { "excluded" } else { "survivor" };
            out.push_str(&format!("{tag:<10} {s}"));
            if let Some(n) = &s.note {
                out.push_str(&format!("  [{n}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!("verdict    {}\n", self.summary()));
        out
    }
}

/// Integrates a closed-form degree against base data, keeping `keep` symbolic.
/// The result is a polynomial over `keep` followed by the data parameters.
pub fn integrate_form(form: &ScalarForm, data: &NumericalBaseData, keep: &[&str]) -> Result<Poly> {
    let ring = data.ring();
    let base_names = ring.names();
    let mut target: Vec<String> = keep.iter().map(|s| s.to_string()).collect();
    target.extend(base_names.iter().map(|s| s.to_string()));
    let nk = keep.len();
    let nt = target.len();
    let c1 = Poly::var(nt, nk + ring.index("c1").expect("base ring has c1"));
    let v1 = Poly::var(nt, nk + ring.index("v1").expect("base ring has v1"));
    let g = &(&(&v1 * &v1) - &(&c1 * &v1)).scale(&crate::poly::rat(1, 2)) + &Poly::one(nt);
    let p = form.substitute(&target, &[("K", -&c1), ("g", g)])?;
    let np = data.params().len();
    let mut out = Poly::zero(nk + np);
    for (m, c) in p.terms() {
        let (kept, base) = m.split_at(nk);
        let value = if base.iter().all(|&e| e == 0) {
            Poly::one(np)
        } else {
            data.value(base).cloned().ok_or_else(|| Error::IncompleteData { missing: vec![crate::poly::fmt_monomial(base, &base_names)] })?
        };
        let mut lifted = Poly::zero(nk + np);
        for (vm, vc) in value.terms() {
            let mut e = kept.to_vec();
            e.extend_from_slice(vm);
            lifted.add_term(e, vc * c);
        }
        out = &out + &lifted;
    }
    Ok(out)
}

fn form(names: &[String], poly: Poly) -> ScalarForm {
    ScalarForm { names: names.to_vec(), poly }
}

/// Renames variables; names that are neither kept nor renamed must not occur.
fn rename(f: &ScalarForm, target: &[&str], images: &[(&str, &str)]) -> Result<ScalarForm> {
    let n = target.len();
    let mut imgs: Vec<(&str, Poly)> =
        images.iter().map(|(from, to)| (*from, Poly::var(n, target.iter().position(|t| t == to).expect("target name")))).collect();
    for (i, name) in f.names.iter().enumerate() {
        if !target.contains(&name.as_str()) && !images.iter().any(|(from, _)| from == name) {
            if f.poly.degree_in(i) > 0 {
                return Err(Error::invalid(format!("'{name}' occurs but has no image")));
            }
            imgs.push((name.as_str(), Poly::zero(n)));
        }
    }
    Ok(ScalarForm { names: target.iter().map(|s| s.to_string()).collect(), poly: f.substitute(target, &imgs)? })
}

fn inconsistent(what: &str, a: &ScalarForm, b: &ScalarForm) -> Error {
    Error::Inconsistent(format!("{what}: {a} differs from {b}"))
}

/// Engine degree on `data`, written with `d` kept symbolic and cross-checked three ways.
fn degree_equation(setup: &ScrollSetup, closed: &ScalarForm, data: &NumericalBaseData) -> Result<ScalarForm> {
    let mut names = vec!["d".to_string()];
    names.extend(data.params().iter().cloned());
    let e = form(&names, integrate_form(closed, data, &["d"])?);
    let engine = scroll::degree_of_inflection(setup, data)?.value;
    let expanded = e.substitute(data.params(), &[("d", data.scroll_degree()?)])?;
    if expanded != engine {
        return Err(inconsistent("closed form vs engine", &form(data.params(), expanded), &form(data.params(), engine)));
    }
    Ok(e)
}

impl ScanProblem {
    pub fn id(&self) -> String {
        let mut s = self.family.name().to_string();
        for (k, v) in &self.params {
            s.push_str(&format!(".{k}{v}"));
        }
        s
    }

    /// The outcome recorded for this family, when there is one.
    pub fn expected_summary(&self) -> Option<String> {
        self.expected.clone()
    }

    /// Same problem with every derived range twice as wide.
    pub fn doubled(&self) -> ScanProblem {
        let mut p = self.clone();
        p.scale = self.scale * 2;
        p.outer = self.outer.iter().map(|&(lo, hi)| (lo, lo + 2 * (hi - lo))).collect();
        p
    }

    fn names(&self) -> Vec<String> {
        let mut n = self.basis.clone();
        n.extend(self.derived.iter().map(|(k, _)| k.clone()));
        n
    }

    fn x_name(&self) -> &str {
        &self.basis[self.outer.len()]
    }

    fn widen(&self, lo: i64, hi: i64) -> (i64, i64) {
        let (lo, hi) = (lo - MARGIN, hi + MARGIN);
        let w = hi - lo;
        (lo - (self.scale - 1) * w / 2, hi + (self.scale - 1) * w / 2)
    }

    /// Range of the enumerated unknown by sign analysis.
    fn sign_range(&self) -> Result<BoundRecord> {
        let f = self.sign_form.as_ref().ok_or_else(|| Error::Unbounded("no sign form available".into()))?;
        let x = self.x_name();
        let xi = f.names.iter().position(|n| n == x).expect("sign form mentions the enumerated unknown");
        let mut images = Vec::new();
        for (q, lb) in &self.positive {
            let qi = f.names.iter().position(|n| n == q).expect("positive unknown in sign form");
            if f.poly.degree_in(qi) > 1 {
                return Err(Error::Unbounded(format!("{q} does not enter linearly")));
            }
            let d1 = f.poly.derivative(qi, 1);
            if !d1.is_constant() || d1.constant_term() <= Rat::zero() {
                return Err(Error::Unbounded(format!("coefficient of {q} is not a positive constant")));
            }
            images.push((q.as_str(), Poly::constant(1, int(*lb))));
        }
        for (i, name) in f.names.iter().enumerate() {
            if i != xi && !self.positive.iter().any(|(q, _)| q == name) && f.poly.degree_in(i) > 0 {
                return Err(Error::Unbounded(format!("{name} is neither enumerated nor bounded below")));
            }
            if i != xi && !images.iter().any(|(q, _)| q == name) {
                images.push((name.as_str(), Poly::zero(1)));
            }
        }
        let g = f.substitute(&[x], &images)?;
        let deg = g.degree_in(0);
        if deg == 0 {
            return Err(Error::Unbounded("sign analysis leaves the enumerated unknown free".into()));
        }
        let lc = g.coeff(&[deg]);
        let cauchy: BigInt = g.terms().map(|(_, c)| (c / &lc).abs()).max().expect("non-zero").ceil().to_integer() + 1;
        let cauchy = cauchy.to_i64().ok_or_else(|| Error::Resource("bound too large".into()))?;
        if lc < Rat::zero() {
            return Err(Error::Unbounded(format!("{x} is unbounded above")));
        }
        let below_ok = deg % 2 == 0;
        let floor = match (self.x_floor, below_ok) {
            (Some(f), _) => f.max(-cauchy),
            (None, true) => -cauchy,
            (None, false) => return Err(Error::Unbounded(format!("{x} is unbounded below"))),
        };
        let feasible: Vec<i64> = (floor..=cauchy).filter(|&v| g.eval(&[int(v)]) <= Rat::zero()).collect();
        let (lo, hi) = match (feasible.first(), feasible.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (floor, floor),
        };
        let (wlo, whi) = self.widen(lo, hi);
        let pos: Vec<String> = self.positive.iter().map(|(q, lb)| format!("{q} >= {lb}")).collect();
        Ok(BoundRecord {
            scope: String::new(),
            var: x.to_string(),
            lo: wlo,
            hi: whi,
            reason: format!("sign analysis with {} gives {lo} <= {x} <= {hi}, plus margin {MARGIN}", pos.join(", ")),
        })
    }

    /// Range of the enumerated unknown by divisibility, for fixed outer values.
    fn divisibility_range(&self, a: &Poly, b: &Poly, scope: String) -> Result<BoundRecord> {
        let x = self.x_name().to_string();
        if a.degree_in(0) != 1 {
            return Err(Error::Unbounded("coefficient of the solved unknown is not linear".into()));
        }
        let alpha = a.coeff(&[1]);
        let beta = a.coeff(&[0]);
        let k = b.degree_in(0);
        let root = -&beta / &alpha;
        let r = b.eval(&[root]) * num_traits::pow::pow(alpha.clone(), k as usize);
        if r.is_zero() {
            return Err(Error::Unbounded("the solved unknown is polynomial in the enumerated one".into()));
        }
        let r = r.abs();
        let lo = ((-&r - &beta) / &alpha).floor().to_integer();
        let hi = ((&r - &beta) / &alpha).ceil().to_integer();
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let lo = lo.to_i64().ok_or_else(|| Error::Resource("bound too large".into()))?;
        let hi = hi.to_i64().ok_or_else(|| Error::Resource("bound too large".into()))?;
        let lo = self.x_floor.map_or(lo, |f| lo.max(f));
        let (wlo, whi) = self.widen(lo, hi);
        Ok(BoundRecord { scope, var: x, lo: wlo, hi: whi, reason: format!("({}) divides {r}", a.display(&[self.x_name()])) })
    }
}

struct Tally {
    candidates: u64,
    integral: u64,
    rejected: BTreeMap<String, u64>,
    survivors: Vec<Survivor>,
}

fn split_linear(eq: &Poly, s: usize) -> Result<(Poly, Poly)> {
    if eq.degree_in(s) > 1 {
        return Err(Error::invalid("equation is not linear in the solved unknown"));
    }
    let n = eq.nvars();
    let mut a = Poly::zero(n);
    let mut b = Poly::zero(n);
    for (m, c) in eq.terms() {
        let mut m2 = m.clone();
        m2[s] = 0;
        if m[s] == 1 {
            a.add_term(m2, c.clone());
        } else {
            b.add_term(m2, c.clone());
        }
    }
    Ok((a, b))
}

/// Fixes the first `outer.len()` variables and keeps only the enumerated one.
fn restrict(p: &Poly, outer: &[i64], x: usize) -> Poly {
    let mut q = p.clone();
    for (i, v) in outer.iter().enumerate() {
        q = q.specialize(i, &int(*v));
    }
    Poly::from_terms(1, q.terms().map(|(m, c)| (vec![m[x]], c.clone())))
}

pub fn scan(problem: &ScanProblem) -> Result<ScanReport> {
    let names = problem.names();
    let no = problem.outer.len();
    let xi = no;
    let si = no + 1;
    let (a, b) = split_linear(&problem.equation.poly, si)?;
    let (ia, ib) = (IntPoly::from_poly(&a)?, IntPoly::from_poly(&b)?);
    let derived: Vec<IntPoly> = problem.derived.iter().map(|(_, f)| IntPoly::from_poly(&f.poly)).collect::<Result<_>>()?;
    // derived forms may carry a denominator; keep it to recover exact values
    let derived_scale: Vec<i128> = problem
        .derived
        .iter()
        .map(|(_, f)| {
            let mut l = BigInt::from(1);
            for (_, c) in f.poly.terms() {
                l = num_integer::Integer::lcm(&l, c.denom());
            }
            l.to_i128().unwrap_or(1)
        })
        .collect();

    let mut outers: Vec<Vec<i64>> = vec![vec![]];
    for &(lo, hi) in &problem.outer {
        outers = outers.into_iter().flat_map(|o| (lo..=hi).map(move |v| [o.clone(), vec![v]].concat())).collect();
    }
    let sign = match problem.rule {
        BoundRule::Sign => Some(problem.sign_range()?),
        BoundRule::Divisibility => None,
    };
    let mut bounds = Vec::new();
    let mut jobs = Vec::new();
    for o in &outers {
        let rec = match &sign {
            Some(r) => r.clone(),
            None => {
                let scope: Vec<String> = o.iter().zip(&problem.basis).map(|(v, n)| format!("{n}={v}: ")).collect();
                problem.divisibility_range(&restrict(&a, o, xi), &restrict(&b, o, xi), scope.concat())?
            }
        };
        jobs.push((o.clone(), rec.lo, rec.hi));
        if sign.is_none() || bounds.is_empty() {
            bounds.push(rec);
        }
    }
    if let Some((_, lo, hi)) = jobs.iter().find(|(_, lo, hi)| hi - lo > 50_000_000) {
        return Err(Error::Resource(format!("range {lo}..={hi} is too large to enumerate")));
    }

    let tally = Mutex::new(Tally { candidates: 0, integral: 0, rejected: BTreeMap::new(), survivors: Vec::new() });
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(jobs.len().max(1));
    let overflow = std::sync::atomic::AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut local = Tally { candidates: 0, integral: 0, rejected: BTreeMap::new(), survivors: Vec::new() };
                loop {
                    let j = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    let Some((o, lo, hi)) = jobs.get(j) else { break };
                    let mut vals: Vec<i128> = o.iter().map(|&v| v as i128).collect();
                    vals.extend([0, 0]);
                    for x in *lo..=*hi {
                        local.candidates += 1;
                        vals[xi] = x as i128;
                        vals[si] = 0;
                        let (Some(av), Some(bv)) = (ia.eval(&vals), ib.eval(&vals)) else {
                            overflow.store(true, std::sync::atomic::Ordering::Relaxed);
                            continue;
                        };
                        if av == 0 || bv % av != 0 {
                            if av == 0 && bv == 0 {
                                *local.rejected.entry("degenerate: equation vanishes identically in the solved unknown".into()).or_default() += 1;
                            }
                            continue;
                        }
                        local.integral += 1;
                        vals[si] = -bv / av;
                        let mut full = vals.clone();
                        let mut exact = true;
                        for (p, sc) in derived.iter().zip(&derived_scale) {
                            match p.eval(&vals) {
                                Some(v) if v % sc == 0 => full.push(v / sc),
                                _ => {
                                    exact = false;
                                    full.push(0);
                                }
                            }
                        }
                        if !exact {
                            *local.rejected.entry("derived quantity is not an integer".into()).or_default() += 1;
                            continue;
                        }
                        let point = Point { names: &names, values: &full };
                        if let Some(c) = problem.constraints.iter().find(|c| !(c.test)(&point)) {
                            *local.rejected.entry(c.name.clone()).or_default() += 1;
                            continue;
                        }
                        let exclusion = problem.exclusions.iter().find_map(|f| f(&point));
                        let remark = problem.condition.as_ref().and_then(|(_, _, note)| note(&point));
                        local.survivors.push(Survivor {
                            values: names.iter().cloned().zip(full.iter().map(|&v| v as i64)).collect(),
                            excluded: exclusion.is_some(),
                            note: exclusion.or(remark),
                        });
                    }
                }
                let mut t = tally.lock().expect("no poisoning");
                t.candidates += local.candidates;
                t.integral += local.integral;
                for (k, v) in local.rejected {
                    *t.rejected.entry(k).or_default() += v;
                }
                t.survivors.extend(local.survivors);
            });
        }
    });
    if overflow.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::Resource("integer overflow while evaluating the equation".into()));
    }
    let mut t = tally.into_inner().expect("no poisoning");
    t.survivors.sort_by(|a, b| {
        let key = |s: &Survivor| s.values.iter().map(|(_, v)| *v).collect::<Vec<_>>();
        key(a).cmp(&key(b))
    });

    let (verdict, condition) = if t.survivors.is_empty() {
        (Verdict::Empty, None)
    } else if let Some((text, holds, _)) = &problem.condition {
        let all = t.survivors.iter().all(|s| {
            let vals: Vec<i128> = s.values.iter().map(|(_, v)| *v as i128).collect();
            holds(&Point { names: &names, values: &vals })
        });
        if all {
            (Verdict::ExceptionalCondition, Some(text.clone()))
        } else {
            (Verdict::SurvivorsListed, None)
        }
    } else if t.survivors.iter().all(|s| s.excluded) {
        (Verdict::EmptyAfterExclusions, None)
    } else {
        (Verdict::SurvivorsListed, None)
    };
    Ok(ScanReport {
        family: problem.family.name().into(),
        params: problem.params.clone(),
        equation: problem.equation.to_string(),
        bounds,
        candidates: t.candidates,
        integral: t.integral,
        rejected: t.rejected,
        survivors: t.survivors,
        verdict,
        condition,
    })
}

fn plane_problem(big_n: u32) -> Result<ScanProblem> {
    let data = ChowModel::preset(Preset::ProjectiveSpace(2)).data(2);
    let setup = ScrollSetup::new(3, 2, 2, big_n)?;
    let e = degree_equation(&setup, &cf::surface_degree(big_n)?, &data)?;
    let d_min = big_n as i64 - 3 + 1;
    let (x, derived_name) = if big_n == 9 { ("v", "c2") } else { ("x", "y") };
    let sign_form = rename(&e, &["d", x], &[("x", x)])?;
    let basis = vec![x.to_string(), "d".to_string()];
    let equation = rename(&sign_form, &[x, "d"], &[])?;
    let derived = ScalarForm::parse(&format!("{x}^2 - d"), &[x, "d"])?;
    // the recorded equation must agree with the engine-derived one
    if big_n == 10 {
        let record = scan_equations::plane_n10();
        let xy = ["x", "y"];
        let ours = equation.substitute(&xy, &[("d", ScalarForm::parse("x^2 - y", &xy)?.poly)])?;
        if ours != record.poly {
            return Err(inconsistent("recorded plane equation", &record, &form(&record.names, ours)));
        }
    } else {
        let record = rename(&scan_equations::plane_n9(), &["v", "d"], &[])?;
        if record.poly != equation.poly {
            return Err(inconsistent("recorded plane equation", &record, &equation));
        }
    }
    let dm = d_min as i128;
    let mut constraints = vec![constraint(&format!("d >= {d_min}"), "degree exceeds the codimension", move |p| p.get("d") >= dm)];
    let mut exclusions: Vec<Note> = Vec::new();
    let expected = if big_n == 9 {
        constraints.push(constraint("c2 = 1 forces v = 2", "c2(V) = 1 on the plane forces V = O(1) + O(1)", |p| {
            p.get("c2") != 1 || p.get("v") == 2
        }));
        exclusions.push(Arc::new(|p: &Point| {
            (p.get("v") == 4 && p.get("d") == 10 && p.get("c2") == 6)
                .then(|| "Bordiga scroll; excluded, violates the general assumptions".to_string())
        }));
        Some("excluded {(v=4, d=10, c2=6)}".to_string())
    } else {
        Some("empty".to_string())
    };
    Ok(ScanProblem {
        family: if big_n == 9 { Family::PlaneN9 } else { Family::PlaneN10 },
        params: vec![],
        basis,
        outer: vec![],
        equation,
        derived: vec![(derived_name.to_string(), derived)],
        sign_form: Some(sign_form),
        positive: vec![("d".into(), d_min)],
        x_floor: None,
        rule: BoundRule::Sign,
        constraints,
        exclusions,
        condition: None,
        scale: 1,
        expected,
    })
}

fn fourfold_problem(ell: u32, quadric: bool) -> Result<ScanProblem> {
    if !(2..=4).contains(&ell) {
        return Err(Error::invalid("ell must be 2, 3 or 4 (a divisor cannot be empty)"));
    }
    let preset = if quadric { Preset::Quadric3 } else { Preset::ProjectiveSpace(3) };
    let data = ChowModel::preset(preset).data(2);
    let setup = ScrollSetup::with_codim(4, 3, 2, ell)?;
    let e = degree_equation(&setup, &cf::fourfold_degree(ell)?, &data)?;
    let sign_form = rename(&e, &["d", "x", "y"], &[])?;
    let record = if quadric { scan_equations::quadric(ell) } else { scan_equations::space(ell) }.expect("ell in range");
    if record.poly != sign_form.poly {
        return Err(inconsistent("recorded fourfold equation", &record, &sign_form));
    }
    let d_poly = data.scroll_degree()?;
    let d = ScalarForm { names: data.params().to_vec(), poly: d_poly };
    let d = rename(&d, &["x", "y"], &[])?;
    let basis = vec!["x".to_string(), "y".to_string()];
    let equation = ScalarForm { names: basis.clone(), poly: sign_form.substitute(&basis, &[("d", d.poly.clone())])? };
    let screen = if quadric { "d > 0, i.e. y < x^2" } else { "d > 0, i.e. y < x^2/2" };
    let constraints = vec![
        constraint("x >= 2", "V restricted to a line is ample of rank 2", |p| p.get("x") >= 2),
        constraint("y >= 1", "c2 of an ample bundle is positive", |p| p.get("y") >= 1),
        constraint(screen, "Chern-Wu relation", |p| p.get("d") > 0),
    ];
    let mut exclusions: Vec<Note> = Vec::new();
    let expected = if quadric {
        None
    } else if ell == 2 {
        exclusions.push(Arc::new(|p: &Point| {
            (p.get("x") == 4 && p.get("y") == 5)
                .then(|| "null-correlation twist N(2); excluded by the projection argument".to_string())
        }));
        Some("excluded {(x=4, y=5, d=24)}".to_string())
    } else {
        Some("empty".to_string())
    };
    Ok(ScanProblem {
        family: if quadric { Family::Q3 } else { Family::P3 },
        params: vec![("l".into(), ell as i64)],
        basis,
        outer: vec![],
        equation,
        derived: vec![("d".into(), d)],
        sign_form: Some(sign_form),
        positive: vec![("d".into(), 1), ("y".into(), 1)],
        x_floor: Some(2),
        rule: BoundRule::Sign,
        constraints,
        exclusions,
        condition: None,
        scale: 1,
        expected,
    })
}

fn surface_hyperbola(family: Family, param: i64, d_max: i64) -> Result<ScanProblem> {
    let (preset, record, pname) = match family {
        Family::Fe => {
            if param < 0 {
                return Err(Error::invalid("e must be non-negative"));
            }
            (Preset::Hirzebruch(Some(param)), scan_equations::hirzebruch(), "e")
        }
        Family::CurveTimesLine => {
            if param < 1 {
                return Err(Error::invalid("q must be at least 1"));
            }
            (Preset::CurveTimesLine(Some(param)), scan_equations::curve_times_line(), "q")
        }
        _ => unreachable!("only surface families have hyperbolas"),
    };
    let data = ChowModel::preset(preset).data(2);
    let setup = ScrollSetup::new(3, 2, 2, 9)?;
    let e = degree_equation(&setup, &cf::surface_degree(9)?, &data)?;
    let basis = vec!["d".to_string(), "a".to_string(), "b".to_string()];
    let equation = rename(&e, &["d", "a", "b"], &[])?;
    let rec = record.substitute(&basis, &[(pname, Poly::constant(3, int(param)))])?;
    let sign = if family == Family::Fe { -1 } else { 1 };
    if rec != equation.poly.scale(&int(sign)) {
        return Err(inconsistent("recorded hyperbola", &form(&basis, rec), &equation));
    }
    let (text, holds, note): (String, Test, Note) = if family == Family::Fe {
        let e = param as i128;
        (
            "a = 2, 9*d - 32 = 20*(b - e)".into(),
            Arc::new(move |p: &Point| {
                let on = |a: i128, b: i128| a == 2 && 9 * p.get("d") - 32 == 20 * (b - e);
                on(p.get("a"), p.get("b")) || (e == 0 && on(p.get("b"), p.get("a")))
            }),
            Arc::new(move |p: &Point| {
                (e == 0 && p.get("a") != 2 && p.get("b") == 2)
                    .then(|| "F_0: the swap of the two rulings maps it to the a = 2 family".to_string())
            }),
        )
    } else {
        let q = param as i128;
        (
            "a = 2, 9*d + 32*(q - 1) = 20*b".into(),
            Arc::new(move |p: &Point| p.get("a") == 2 && 9 * p.get("d") + 32 * (q - 1) == 20 * p.get("b")),
            Arc::new(|_: &Point| None),
        )
    };
    let mut constraints = vec![constraint("a >= 2", "degree on a fiber is at least the rank", |p| p.get("a") >= 2)];
    if family == Family::Fe {
        let e = param as i128;
        constraints.push(constraint("b >= e*a + 2", "degree on the minimal section is at least 2", move |p| p.get("b") >= e * p.get("a") + 2));
        constraints.push(constraint("d >= 7", "degree exceeds the codimension", |p| p.get("d") >= 7));
        constraints.push(constraint("d even", "parity of the hyperbola equation", |p| p.get("d") % 2 == 0));
        constraints.push(constraint("d >= 10", "d = 8 is ruled out by the Delta-genus classification", |p| p.get("d") >= 10));
    } else {
        constraints.push(constraint("b >= 5", "no irrational surface scrolls of degree < 5", |p| p.get("b") >= 5));
        constraints.push(constraint("d >= 7", "degree exceeds the codimension", |p| p.get("d") >= 7));
    }
    Ok(ScanProblem {
        family,
        params: vec![(pname.into(), param)],
        basis,
        outer: vec![(7, d_max)],
        equation,
        derived: vec![],
        sign_form: None,
        positive: vec![],
        x_floor: Some(2),
        rule: BoundRule::Divisibility,
        constraints,
        exclusions: vec![],
        condition: Some((text.clone(), holds, note)),
        scale: 1,
        expected: Some(format!("exceptional: {text}")),
    })
}

/// Builds a scan problem. `param` is `ell` for P3/Q3, `e` for Fe and `q` for B x P^1.
pub fn problem(family: Family, param: Option<i64>, d_max: Option<i64>) -> Result<ScanProblem> {
    let d_max = d_max.unwrap_or(60);
    match family {
        Family::PlaneN10 => plane_problem(10),
        Family::PlaneN9 => plane_problem(9),
        Family::P3 | Family::Q3 => {
            let ell = param.ok_or_else(|| Error::invalid("this family needs ell"))?;
            fourfold_problem(u32::try_from(ell).map_err(|_| Error::invalid("ell must be positive"))?, family == Family::Q3)
        }
        Family::Fe => surface_hyperbola(family, param.unwrap_or(0), d_max),
        Family::CurveTimesLine => surface_hyperbola(family, param.unwrap_or(1), d_max),
    }
}

pub fn q3_scan(ell: u32) -> Result<ScanReport> {
    scan(&fourfold_problem(ell, true)?)
}

/// All problems run by the verification catalogue.
pub fn standard_problems() -> Vec<ScanProblem> {
    let mut out = vec![plane_problem(10).expect("builds"), plane_problem(9).expect("builds")];
    for ell in 2..=4 {
        out.push(fourfold_problem(ell, false).expect("builds"));
        out.push(fourfold_problem(ell, true).expect("builds"));
    }
    for e in 0..=3 {
        out.push(surface_hyperbola(Family::Fe, e, 60).expect("builds"));
    }
    for q in 1..=3 {
        out.push(surface_hyperbola(Family::CurveTimesLine, q, 60).expect("builds"));
    }
    out
}

/// The parametric family of possible exceptions for a surface family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCondition {
    pub family: String,
    pub fixed: (String, i64),
    /// `lhs = rhs`
    pub relation: (String, String),
    pub side: Vec<String>,
    /// the relation is proportional to the equation restricted to `a = 2`
    pub verified: bool,
}

impl fmt::Display for ExceptionalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}, {} = {}", self.fixed.0, self.fixed.1, self.relation.0, self.relation.1)?;
        if !self.verified {
            f.write_str(" (NOT VERIFIED)")?;
        }
        Ok(())
    }
}

pub fn exceptional_condition(family: &str) -> Result<ExceptionalCondition> {
    let family = Family::parse(family)?;
    let (eq, lhs, rhs, side) = match family {
        Family::Fe => (scan_equations::hirzebruch(), "9*d - 32", "20*(b - e)", vec!["b >= e*a + 2".to_string(), "d >= 10".to_string()]),
        Family::CurveTimesLine => (scan_equations::curve_times_line(), "9*d + 32*(q - 1)", "20*b", vec!["b >= 5".to_string()]),
        _ => return Err(Error::invalid("exceptional conditions exist for Fe and ProductsBxP1 only")),
    };
    let names = &eq.names;
    let n = names.len();
    let restricted = eq.substitute(names, &[("a", Poly::constant(n, int(2)))])?;
    let rel = &ScalarForm::parse(lhs, names)?.poly - &ScalarForm::parse(rhs, names)?.poly;
    let verified = match (restricted.leading(), rel.leading()) {
        (Some((m1, c1)), Some((m2, c2))) if m1 == m2 => restricted == rel.scale(&(c1 / c2)),
        _ => false,
    };
    Ok(ExceptionalCondition {
        family: family.name().into(),
        fixed: ("a".into(), 2),
        relation: (lhs.into(), rhs.into()),
        side,
        verified,
    })
}

/// Points of the exceptional family that pass the feasibility screen, for one value of `d`.
pub fn exceptional_points(family: Family, param: i64, d: i64) -> Result<Vec<Survivor>> {
    let mut p = problem(family, Some(param), None)?;
    p.outer = vec![(d, d)];
    Ok(scan(&p)?.survivors.into_iter().filter(|s| s.values.iter().any(|(n, v)| n == "a" && *v == 2)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_scans() {
        assert_eq!(scan(&plane_problem(10).unwrap()).unwrap().summary(), "empty");
        let r = scan(&plane_problem(9).unwrap()).unwrap();
        assert_eq!(r.summary(), "excluded {(v=4, d=10, c2=6)}");
        assert_eq!(r.rejected.get("c2 = 1 forces v = 2"), Some(&1));
    }

    #[test]
    fn space_scans() {
        for ell in 2..=4 {
            let p = fourfold_problem(ell, false).unwrap();
            assert_eq!(Some(scan(&p).unwrap().summary()), p.expected_summary());
        }
    }

    #[test]
    fn sign_bounds_match_hand_analysis() {
        // largest x with a positive right-hand side: 11, 12, 14 for ell = 2, 3, 4
        for (ell, hi) in [(2, 11), (3, 12), (4, 14)] {
            let b = fourfold_problem(ell, false).unwrap().sign_range().unwrap();
            assert!(b.hi >= hi && b.hi <= hi + MARGIN, "{b:?}");
        }
    }

    #[test]
    fn hirzebruch_d8_is_screened() {
        let pts = exceptional_points(Family::Fe, 0, 8).unwrap();
        assert!(pts.is_empty());
        let mut p = problem(Family::Fe, Some(0), None).unwrap();
        p.outer = vec![(8, 8)];
        assert!(scan(&p).unwrap().rejected.contains_key("d >= 10"));
    }

    #[test]
    fn conditions_verify() {
        assert_eq!(exceptional_condition("Fe").unwrap().to_string(), "a = 2, 9*d - 32 = 20*(b - e)");
        assert_eq!(exceptional_condition("BxP1").unwrap().to_string(), "a = 2, 9*d + 32*(q - 1) = 20*b");
    }

    #[test]
    fn unbounded_is_refused() {
        let mut p = plane_problem(10).unwrap();
        p.positive.clear();
        p.sign_form = Some(ScalarForm::parse("x^3 + d", &["d", "x"]).unwrap());
        assert!(matches!(scan(&p), Err(Error::Unbounded(_))));
    }
}
