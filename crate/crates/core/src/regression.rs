//! The verification catalogue: every closed form against the engine, plus
//! numeric reproductions, scans and jet probes. Each check yields an
//! `(expected, actual)` pair; a check passes when the two are equal.

use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::base::{ChowModel, NumericalBaseData, Preset};
use crate::chern::{GradedClass, GradedVariable, Ring};
use crate::closed_forms::{self as cf, Exception, ScalarForm};
use crate::error::{Error, Result};
use crate::poly::{binomial, int, Poly};
use crate::scroll::{self, ScrollSetup};
use crate::{jet, search};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Class(GradedClass),
    Poly(Poly, Vec<String>),
    Int(BigInt),
    Text(String),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Class(c) => write!(f, "{c}"),
            Value::Poly(p, names) => write!(f, "{}", p.display(names)),
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(t) => f.write_str(t),
        }
    }
}

impl Value {
    fn int(v: impl Into<BigInt>) -> Value {
        Value::Int(v.into())
    }

    fn perturbed(&self) -> Value {
        match self {
            Value::Class(c) => Value::Class(c + &GradedClass::one(c.ring(), c.truncation())),
            Value::Poly(p, n) => Value::Poly(p + &Poly::one(p.nvars()), n.clone()),
            Value::Int(i) => Value::Int(i + 1),
            Value::Text(t) => Value::Text(format!("{t}*")),
        }
    }
}

type Runner = Box<dyn Fn() -> Result<(Value, Value)> + Send + Sync>;

pub struct Check {
    pub id: String,
    pub group: String,
    run: Runner,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub group: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    pub error: Option<String>,
}

fn check(id: impl Into<String>, group: &str, run: impl Fn() -> Result<(Value, Value)> + Send + Sync + 'static) -> Check {
    Check { id: id.into(), group: group.into(), run: Box::new(run) }
}

fn setup(n: u32, m: u32, k: u32, ell: u32) -> Result<ScrollSetup> {
    ScrollSetup::with_codim(n, m, k, ell)
}

fn engine_class(n: u32, m: u32, k: u32, ell: u32) -> Result<GradedClass> {
    Ok(scroll::inflection_class(&setup(n, m, k, ell)?)?.class)
}

fn engine_degree(n: u32, m: u32, k: u32, ell: u32) -> Result<GradedClass> {
    scroll::degree_class(&setup(n, m, k, ell)?)
}

fn classes(expected: GradedClass, actual: GradedClass) -> Result<(Value, Value)> {
    Ok((Value::Class(expected), Value::Class(actual)))
}

fn polys(names: &[&str], expected: Poly, actual: Poly) -> Result<(Value, Value)> {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    Ok((Value::Poly(expected, names.clone()), Value::Poly(actual, names)))
}

fn plane() -> NumericalBaseData {
    ChowModel::preset(Preset::ProjectiveSpace(2)).data(2)
}

/// Engine degree on given base data, at the given `N`.
fn degree_on(data: &NumericalBaseData, n: u32, m: u32, k: u32, big_n: u32) -> Result<Poly> {
    let s = ScrollSetup::new(n, m, k, big_n)?;
    Ok(scroll::degree_of_inflection(&s, data)?.value)
}

fn engine_checks(out: &mut Vec<Check>) {
    for ell in 1..=3 {
        out.push(check(format!("threefold.class.{ell}"), "threefold", move || {
            classes(cf::threefold_class(ell)?, engine_class(3, 2, 2, ell)?)
        }));
    }
    for big_n in 8..=10 {
        out.push(check(format!("threefold.degree.N{big_n}"), "threefold", move || {
            let s = ScrollSetup::new(3, 2, 2, big_n)?;
            classes(cf::surface_degree(big_n)?.on_base(3, 2)?, scroll::degree_class(&s)?)
        }));
    }
    out.push(check("threefold.degree.N9.plane", "threefold", || {
        let names = ["x", "y"];
        let x = Poly::var(2, 0);
        let d = &(&x * &x) - &Poly::var(2, 1);
        let expected = cf::plane_degree_n9().substitute(&names, &[("d", d), ("v", x)])?;
        polys(&names, expected, degree_on(&plane(), 3, 2, 2, 9)?)
    }));
    out.push(check("threefold.degree.N9.k3", "threefold", || {
        let data = ChowModel::preset(Preset::K3).data(2);
        let names = ["w", "y"];
        let (w, y) = (Poly::var(2, 0), Poly::var(2, 1));
        let g = &w.scale(&crate::poly::rat(1, 2)) + &Poly::one(2);
        let expected = cf::k3_degree().substitute(&names, &[("d", &w - &y), ("g", g)])?;
        polys(&names, expected, degree_on(&data, 3, 2, 2, 9)?)
    }));
    out.push(check("threefold.projection", "threefold", || {
        let x = Ring::total_space(3, 2);
        let r = GradedClass::parse(&x, 3, "(3*L - C1)*L^2")?;
        classes(cf::projection_degree().on_base(3, 2)?, scroll::pushforward(&r, 2)?)
    }));
    for n in 3..=6 {
        for m in 2..n {
            out.push(check(format!("divisor.class.n{n}.m{m}"), "divisor", move || {
                classes(cf::divisor_class(n, m)?, engine_class(n, m, 2, 1)?)
            }));
        }
        out.push(check(format!("divisor.degree.n{n}"), "divisor", move || {
            let (a, b) = cf::divisor_degree_forms(n);
            let a = a.on_base(n, 2)?;
            if a != b.on_base(n, 2)? {
                return Err(Error::Inconsistent("the two divisor degree forms differ".into()));
            }
            classes(a, engine_degree(n, 2, 2, 1)?)
        }));
    }
    for ell in 2..=4 {
        out.push(check(format!("fourfold.class.{ell}"), "fourfold", move || {
            classes(cf::fourfold_class(ell)?, engine_class(4, 3, 2, ell)?)
        }));
    }
    for ell in 1..=4 {
        out.push(check(format!("fourfold.degree.{ell}"), "fourfold", move || {
            classes(cf::fourfold_degree(ell)?.on_base(4, 3)?, engine_degree(4, 3, 2, ell)?)
        }));
    }
    for (m, ns) in [(2u32, [3u32, 4]), (3, [4, 5])] {
        for n in ns {
            for k in 1..=3 {
                for ell in 1..=n {
                    out.push(check(format!("abelian.class.m{m}.n{n}.k{k}.l{ell}"), "abelian", move || {
                        classes(cf::abelian_class(n, m, k, ell)?, cf::drop_tangent(&engine_class(n, m, k, ell)?))
                    }));
                }
            }
        }
    }
    for n in 3..=4 {
        for k in 1..=3 {
            out.push(check(format!("abelian.degree.n{n}.k{k}"), "abelian", move || {
                let expected = cf::drop_tangent(&cf::abelian_degree(n, k).on_base(n, 2)?);
                classes(expected, cf::drop_tangent(&engine_degree(n, 2, k, n)?))
            }));
        }
    }
    out.push(check("abelian.degree.value", "abelian", || {
        // 19d + 27(2g - 2) with v1^2 = 2g - 2
        let data = ChowModel::preset(Preset::AbelianSurface).data(2);
        let names = ["w", "y"];
        let (w, y) = (Poly::var(2, 0), Poly::var(2, 1));
        let expected = ScalarForm::parse("19*d + 27*e", &["d", "e"])?.substitute(&names, &[("d", &w - &y), ("e", w)])?;
        polys(&names, expected, degree_on(&data, 3, 2, 2, 10)?)
    }));
    out.push(check("abelian.example4", "abelian", || {
        // d = 3p, v1^2 = 4p with p = 11
        let data = ChowModel::preset(Preset::AbelianSurface).data(2).bind(&[("w", int(44)), ("y", int(11))])?;
        let r = scroll::degree_of_inflection(&ScrollSetup::new(3, 2, 2, 10)?, &data)?;
        let actual = r.integer().ok_or_else(|| Error::Integrality("non-integral degree".into()))?;
        Ok((Value::Int(cf::abelian_example4_degree(2, 11)?), Value::Int(actual)))
    }));
    out.push(check("abelian.example4.identity", "abelian", || {
        let mut bad = Vec::new();
        for k in 1..=6i64 {
            let p = (k + 1) * (k + 1) + 2;
            let v = cf::abelian_degree(3, k as u32).eval(&[("d", int(3 * p)), ("g", int(2 * p + 1))])?;
            if v != crate::poly::Rat::from_integer(cf::abelian_example4_degree(k, p)?) {
                bad.push(k);
            }
        }
        Ok((Value::Text("[]".into()), Value::Text(format!("{bad:?}"))))
    }));
    out.push(check("threefold.projection.value", "threefold", || {
        let data = plane().bind(&[("x", int(4)), ("y", int(4))])?;
        let r = scroll::degree_of_inflection(&ScrollSetup::new(3, 2, 2, 10)?, &data)?;
        Ok((Value::int(6), Value::Int(r.integer().unwrap_or_default())))
    }));
    out.push(check("exceptions.case1", "exceptions", || {
        let Exception::Values(d, deg) = cf::thm_details_exception_degree(1)? else {
            return Err(Error::Inconsistent("case 1 has fixed values".into()));
        };
        let data = plane().bind(&[("x", int(3)), ("y", int(2))])?;
        let ed = data.scroll_degree()?.constant_term();
        let edeg = degree_on(&data, 3, 2, 2, 8)?.constant_term();
        Ok((Value::Text(format!("({d}, {deg})")), Value::Text(format!("({ed}, {edeg})"))))
    }));
    let exception = |case: u32, data: NumericalBaseData, names: &'static [&'static str]| {
        move || -> Result<(Value, Value)> {
            let Exception::Formula(f) = cf::thm_details_exception_degree(case)? else {
                return Err(Error::Inconsistent("expected a formula".into()));
            };
            let expected = f.substitute(names, &[("d", data.scroll_degree()?)])?;
            polys(names, expected, degree_on(&data, 3, 2, 2, 8)?)
        }
    };
    let ruled = ChowModel::preset(Preset::RuledSurface).data(2);
    out.push(check("exceptions.case2", "exceptions", exception(2, plane().bind(&[("x", int(4))]).expect("x is a parameter"), &["y"])));
    out.push(check(
        "exceptions.case3",
        "exceptions",
        exception(
            3,
            ruled.reparametrize(&["q", "F", "G"], &[("alpha", "2"), ("beta", "G"), ("y", "F + G")]).expect("valid"),
            &["q", "F", "G"],
        ),
    ));
    out.push(check(
        "exceptions.case4",
        "exceptions",
        exception(
            4,
            ruled.reparametrize(&["q", "F", "A", "M"], &[("alpha", "3"), ("beta", "A + M"), ("y", "2*F + A + 2*M")]).expect("valid"),
            &["q", "F", "A", "M"],
        ),
    ));
    out.push(check("exceptions.equality", "exceptions", || {
        // deg = 3d exactly when det V = O(5) on the plane
        let data = plane().bind(&[("x", int(5))])?;
        let d = data.scroll_degree()?;
        polys(&["y"], d.scale(&int(3)), degree_on(&data, 3, 2, 2, 8)?)
    }));
    for m in 2..=4u32 {
        out.push(check(format!("example5.m{m}"), "example5", move || {
            let class = engine_class(m + 1, m, 2, 1)?;
            let target = Ring::new(vec![GradedVariable::new("Y0", 1), GradedVariable::new("H", 1)], None)?;
            let t = class.truncation();
            let p = |s: &str| GradedClass::parse(&target, t, s);
            let mut images = vec![p("Y0 + 2*H")?, p(&format!("{}*H", m + 1))?];
            images.extend((2..=m).map(|_| GradedClass::zero(&target, t)));
            images.push(p("3*H")?);
            images.push(p("2*H^2")?);
            let expected = p(&format!("{}*Y0", binomial(m as i64 + 1, 2)))?;
            classes(expected, class.substitute(&images)?)
        }));
    }
}

fn consistency_checks(out: &mut Vec<Check>) {
    out.push(check("consistency.tag13-abelian", "consistency", || {
        let a = cf::drop_tangent(&cf::surface_degree(10)?.on_base(3, 2)?);
        let b = cf::drop_tangent(&cf::abelian_degree(3, 2).on_base(3, 2)?);
        classes(b, a)
    }));
    for n in 3..=6 {
        out.push(check(format!("consistency.two-expressions.n{n}"), "consistency", move || {
            let (a, b) = cf::divisor_degree_forms(n);
            classes(a.on_base(n, 2)?, b.on_base(n, 2)?)
        }));
    }
    for (n, m, k, ell) in [(3, 2, 2, 1), (3, 2, 2, 2), (3, 2, 2, 3), (4, 3, 2, 3), (4, 2, 2, 4), (5, 3, 2, 2), (4, 1, 3, 2)] {
        out.push(check(format!("consistency.reduce-order.n{n}.m{m}.k{k}.l{ell}"), "consistency", move || {
            let s = setup(n, m, k, ell)?;
            classes(scroll::degree_class(&s)?, scroll::degree_class_reduced_first(&s)?)
        }));
    }
    for (n, m, k) in [(3, 2, 2), (4, 3, 2), (4, 2, 3)] {
        out.push(check(format!("consistency.segre.n{n}.m{m}.k{k}"), "consistency", move || {
            let s = ScrollSetup::new(n, m, k, 0)?;
            let direct = scroll::total_chern_e_k(&s)?.series_inverse()?;
            classes(direct, scroll::inverse_via_segre(&s)?)
        }));
    }
}

fn scan_checks(out: &mut Vec<Check>) {
    for problem in search::standard_problems() {
        let id = format!("scan.{}", problem.id());
        let expected = problem.expected_summary();
        out.push(check(id, "scan", move || {
            let report = search::scan(&problem)?;
            // without a recorded outcome the verdict must survive doubled bounds
            let expected = match &expected {
                Some(e) => e.clone(),
                None => search::scan(&problem.doubled())?.summary(),
            };
            Ok((Value::Text(expected), Value::Text(report.summary())))
        }));
    }
    for (family, expected) in [("Fe", "a = 2, 9*d - 32 = 20*(b - e)"), ("BxP1", "a = 2, 9*d + 32*(q - 1) = 20*b")] {
        out.push(check(format!("scan.exceptional.{family}"), "scan", move || {
            let cond = search::exceptional_condition(family)?;
            Ok((Value::Text(expected.into()), Value::Text(cond.to_string())))
        }));
    }
}

fn jet_checks(out: &mut Vec<Check>) {
    for probe in jet::bundled_probes() {
        let id = format!("jet.{}", probe.id);
        out.push(check(id, "jet", move || {
            let (expected, actual) = probe.run()?;
            Ok((Value::Text(expected), Value::Text(actual)))
        }));
    }
}

/// Every check, sorted by identifier.
pub fn all_checks() -> Vec<Check> {
    let mut out = Vec::new();
    engine_checks(&mut out);
    consistency_checks(&mut out);
    scan_checks(&mut out);
    jet_checks(&mut out);
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn run_one(c: &Check, tamper: bool) -> CheckResult {
    match (c.run)() {
        Ok((expected, actual)) => {
            let expected = if tamper { expected.perturbed() } else { expected };
            CheckResult {
                id: c.id.clone(),
                group: c.group.clone(),
                pass: expected == actual,
                expected: expected.to_string(),
                actual: actual.to_string(),
                error: None,
            }
        }
        Err(e) => CheckResult {
            id: c.id.clone(),
            group: c.group.clone(),
            pass: false,
            expected: String::new(),
            actual: String::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Runs the checks whose id or group contains `filter`. The check named by
/// `tamper` has its expected value perturbed, which must make it fail.
pub fn verify(filter: Option<&str>, tamper: Option<&str>) -> Vec<CheckResult> {
    let checks: Vec<Check> =
        all_checks().into_iter().filter(|c| filter.map_or(true, |f| c.id.contains(f) || c.group.contains(f))).collect();
    let results = Mutex::new(Vec::with_capacity(checks.len()));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(checks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(c) = checks.get(i) else { break };
                let r = run_one(c, tamper == Some(c.id.as_str()));
                results.lock().expect("no poisoning").push(r);
            });
        }
    });
    let mut results = results.into_inner().expect("no poisoning");
    results.sort_by(|a, b| a.id.cmp(&b.id));
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_passes() {
        let results = verify(None, None);
        let failed: Vec<String> = results
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{}: expected {} got {} {:?}", r.id, r.expected, r.actual, r.error))
            .collect();
        assert!(failed.is_empty(), "{}", failed.join("\n"));
    }

    #[test]
    fn tampering_is_detected() {
        let id = "abelian.example4";
        let r = verify(Some(id), Some(id));
        assert!(r.iter().any(|c| c.id == id && !c.pass));
    }
}
