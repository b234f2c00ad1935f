//! Hand-transcribed closed forms for special families, kept independent of the
//! engine so the two can be checked against each other.
//!
//! Scalar formulas are [`ScalarForm`]s over named quantities. The names `d`
//! (degree of the scroll), `K` (canonical class of the base) and `g` (sectional
//! genus) have a meaning on the base ring; see [`ScalarForm::on_base`].

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::chern::{GradedClass, Ring};
use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{binomial, int, Poly, Rat};
use crate::scroll::scroll_degree;

/// A polynomial in named scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarForm {
    pub names: Vec<String>,
    pub poly: Poly,
}

impl std::fmt::Display for ScalarForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly.display(&self.names))
    }
}

impl ScalarForm {
    pub fn parse<S: AsRef<str>>(src: &str, names: &[S]) -> Result<ScalarForm> {
        Ok(ScalarForm { names: names.iter().map(|s| s.as_ref().to_string()).collect(), poly: parse_poly(src, names)? })
    }

    /// Rewrites into polynomials over `target`. Each name is replaced by its
    /// image if one is given, otherwise by the target variable of the same name.
    pub fn substitute<S: AsRef<str>>(&self, target: &[S], images: &[(&str, Poly)]) -> Result<Poly> {
        let subs = self
            .names
            .iter()
            .map(|name| {
                if let Some((_, p)) = images.iter().find(|(n, _)| n == name) {
                    return Ok(p.clone());
                }
                match target.iter().position(|t| t.as_ref() == name) {
                    Some(i) => Ok(Poly::var(target.len(), i)),
                    None => Err(Error::invalid(format!("no image for '{name}'"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.poly.substitute(&subs))
    }

    /// The form as a class on the base of an `(n, m)` scroll, using
    /// `d = pi_*(L^n)`, `K = -c1` and `2g - 2 = v1^2 + K v1`.
    pub fn on_base(&self, n: u32, m: u32) -> Result<GradedClass> {
        let ring = Ring::base(n, m);
        let names = ring.names();
        let k = ring.len();
        let c1 = Poly::var(k, ring.index("c1").expect("base ring has c1"));
        let v1 = Poly::var(k, ring.index("v1").expect("base ring has v1"));
        let two_g_minus_2 = &(&v1 * &v1) - &(&c1 * &v1);
        let g = &two_g_minus_2.scale(&crate::poly::rat(1, 2)) + &Poly::one(k);
        let d = scroll_degree(n, m)?.poly().clone();
        let poly = self.substitute(&names, &[("d", d), ("K", -&c1), ("g", g)])?;
        GradedClass::from_poly(&ring, m, poly)
    }

    pub fn eval(&self, values: &[(&str, Rat)]) -> Result<Rat> {
        let point = self
            .names
            .iter()
            .map(|n| {
                values.iter().find(|(k, _)| k == n).map(|(_, v)| v.clone()).ok_or_else(|| Error::IncompleteData { missing: vec![n.clone()] })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.poly.eval(&point))
    }
}

/// Catalogue entry: identifier, parameters and template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaRecord {
    pub id: String,
    pub group: String,
    pub params: String,
    pub template: String,
    pub description: String,
}

fn record(id: &str, group: &str, params: &str, template: impl Into<String>, description: &str) -> FormulaRecord {
    FormulaRecord { id: id.into(), group: group.into(), params: params.into(), template: template.into(), description: description.into() }
}

const THREEFOLD_CLASS: [&str; 3] = [
    "3*L + 3*V1 - 5*C1",
    "6*L^2 + 9*V1*L - 18*C1*L + 6*V1^2 - 3*V2 - 16*C1*V1 + 16*C1^2 - 6*C2",
    "10*L^3 - 42*C1*L^2 + 18*V1*L^2 + 68*C1^2*L - 26*C2*L - 57*C1*V1*L + 18*V1^2*L - 9*V2*L",
];

/// Graded parts of degree 1..3 of the inverse total class for a threefold over a surface, k = 2.
pub fn threefold_class(ell: u32) -> Result<GradedClass> {
    let src = THREEFOLD_CLASS.get((ell as usize).wrapping_sub(1)).ok_or_else(|| Error::invalid("ell must be 1, 2 or 3"))?;
    GradedClass::parse(&Ring::total_space(3, 2), 3, src)
}

const FOURFOLD_CLASS: [&str; 3] = [
    "21*L^2 + 24*V1*L - 40*C1*L + 10*V1^2 - 4*V2 - 25*C1*V1 + 22*C1^2 - 7*C2",
    "56*L^3 - 154*C1*L^2 + 84*V1*L^2 + 162*C1^2*L - 52*C2*L - 166*C1*V1*L + 60*V1^2*L - 24*V2*L + 20*V1^3 \
     - 20*V1*V2 - 65*C1*V1^2 + 26*C1*V2 + 95*C1^2*V1 - 30*C2*V1 - 64*C1^3 + 53*C1*C2 - 9*C3",
    "126*L^4 + 224*V1*L^3 - 448*C1*L^3 - 84*V2*L^2 + 210*V1^2*L^2 - 637*C1*V1*L^2 + 683*C1^2*L^2 - 222*C2*L^2 \
     + 694*C1^2*V1*L - 220*C2*V1*L + 120*V1^3*L - 120*V1*V2*L - 430*C1*V1^2*L + 172*C1*V2*L - 518*C1^3*L \
     + 433*C1*C2*L - 75*C3*L",
];

/// Class for a fourfold over a threefold, k = 2, codimension 2, 3 or 4.
pub fn fourfold_class(ell: u32) -> Result<GradedClass> {
    let src = FOURFOLD_CLASS.get((ell as usize).wrapping_sub(2)).ok_or_else(|| Error::invalid("ell must be 2, 3 or 4"))?;
    GradedClass::parse(&Ring::total_space(4, 3), 4, src)
}

const FOURFOLD_DEGREE: [&str; 4] = [
    "8*d + 2*v1^3 - 6*c1*v1^2 + 6*c1*v2",
    "35*d + 20*v1^3 - 65*c1*v1^2 + 40*c1*v2 + 22*c1^2*v1 - 7*c2*v1",
    "120*d + 100*v1^3 - 385*c1*v1^2 + 180*c1*v2 + 257*c1^2*v1 - 82*c2*v1 - 64*c1^3 + 53*c1*c2 - 9*c3",
    "340*d + 340*v1^3 - 1515*c1*v1^2 + 620*c1*v2 + 1377*c1^2*v1 - 442*c2*v1 - 518*c1^3 + 433*c1*c2 - 75*c3",
];

const FOURFOLD_NAMES: [&str; 6] = ["d", "c1", "c2", "c3", "v1", "v2"];

/// Degree of the inflectional locus of a fourfold over a threefold, k = 2.
pub fn fourfold_degree(ell: u32) -> Result<ScalarForm> {
    let src = FOURFOLD_DEGREE.get((ell as usize).wrapping_sub(1)).ok_or_else(|| Error::invalid("ell must be 1..=4"))?;
    ScalarForm::parse(src, &FOURFOLD_NAMES)
}

/// Threefold over a surface, k = 2, in `P^N` for `N` in 8..=10.
pub fn surface_degree(big_n: u32) -> Result<ScalarForm> {
    let names = ["d", "g", "K", "c1", "c2", "v1", "v2"];
    let src = match big_n {
        8 => "10*(g - 1) + v1^2 - 3*v2",
        9 => "9*d + 12*v1^2 + 34*K*v1 + 16*K^2 - 6*c2",
        10 => "19*d + 68*c1^2 - 26*c2 - 99*c1*v1 + 27*v1^2",
        _ => return Err(Error::invalid("N must be 8, 9 or 10")),
    };
    ScalarForm::parse(src, &names)
}

/// The `N = 9` degree on the projective plane, with `v` the degree of `det V`.
pub fn plane_degree_n9() -> ScalarForm {
    ScalarForm::parse("9*d + 6*v*(2*v - 17) + 126", &["d", "v"]).expect("valid template")
}

/// The `N = 9` degree on a K3 surface.
pub fn k3_degree() -> ScalarForm {
    ScalarForm::parse("3*(3*d + 4*(2*g - 2) - 48)", &["d", "g"]).expect("valid template")
}

pub fn k3_degree_value(d: i64, g: i64) -> BigInt {
    let v = k3_degree().eval(&[("d", int(d)), ("g", int(g))]).expect("both names bound");
    v.to_integer()
}

/// Degree of `(3L + pi^*K) L^2` for a threefold over a surface.
pub fn projection_degree() -> ScalarForm {
    ScalarForm::parse("3*d + K*v1", &["d", "K", "v1"]).expect("valid template")
}

/// The two expressions for the degree of the divisorial locus when the base is a surface.
pub fn divisor_degree_forms(n: u32) -> (ScalarForm, ScalarForm) {
    let names = ["d", "g", "v1", "v2"];
    let n = n as i64;
    let a = format!("({}) * d + ({}) * (2*g - 2) - ({}) * v2", 4 - n, n + 2, n - 1);
    let b = format!("({}) * v1^2 + ({}) * (2*g - 2) - 3 * v2", 4 - n, n + 2);
    (ScalarForm::parse(&a, &names).expect("valid"), ScalarForm::parse(&b, &names).expect("valid"))
}

/// Class of the inflectional divisor (codimension one), `pi^*((n+2)K + (m+1)v1) + C(m+1,2) L`.
pub fn divisor_class(n: u32, m: u32) -> Result<GradedClass> {
    if m < 2 || m >= n {
        return Err(Error::invalid("need 2 <= m < n"));
    }
    let src = format!("{} * (-C1) + {} * V1 + {} * L", n + 2, m + 1, binomial(m as i64 + 1, 2));
    GradedClass::parse(&Ring::total_space(n, m), n, &src)
}

/// Class over a base with trivial tangent Chern classes, as a class in `L, V_i` (no `C_i` appear).
pub fn abelian_class(n: u32, m: u32, k: u32, ell: u32) -> Result<GradedClass> {
    if ell > n {
        return Err(Error::invalid(format!("ell = {ell} exceeds n = {n}")));
    }
    if ell < m {
        log::warn!("terms with negative L-powers are dropped at ell = {ell}");
    }
    let (l, kk) = (ell as i64, k as i64);
    let b = |a: i64, c: i64| if a < 0 { 0 } else { binomial(a, c) };
    // (coefficient of L^(ell - j), fiber polynomial) for j = 0..=m
    let terms: Vec<(i64, String)> = match m {
        2 => {
            let nu = binomial(kk + 1, 2);
            vec![
                (b(l + kk, kk), "1".into()),
                (nu * b(l - 1 + kk, kk), "V1".into()),
                (b(l - 2 + kk, kk), format!("{}*V1^2 - {nu}*V2", binomial(nu + 1, 2))),
            ]
        }
        3 => {
            let mu = binomial(kk + 2, 2);
            let nu = binomial(kk + 2, 3);
            vec![
                (b(l + mu - 1, mu - 1), "1".into()),
                (nu * b(l + mu - 2, mu - 1), "V1".into()),
                (b(l + mu - 3, mu - 1), format!("{}*V1^2 - {nu}*V2", binomial(nu + 1, 2))),
                (b(l + mu - 4, mu - 1), format!("{}*V1^3 - {}*V1*V2 + {nu}*V3", binomial(nu + 2, 3), nu * (nu + 1))),
            ]
        }
        _ => return Err(Error::invalid(format!("abelian closed form exists for m = 2, 3, not {m}"))),
    };
    let rank = n - m + 1;
    // Chern classes above the rank vanish
    let fiber = |f: &str| (rank + 1..=m).fold(f.to_string(), |acc, i| acc.replace(&format!("V{i}"), "0"));
    let src = terms
        .iter()
        .enumerate()
        .filter(|(j, _)| *j as i64 <= l)
        .map(|(j, (c, f))| format!("{c}*({})*L^{}", fiber(f), l - j as i64))
        .collect::<Vec<_>>()
        .join(" + ");
    GradedClass::parse(&Ring::total_space(n, m), n, &src)
}

/// Degree over an abelian surface at `ell = n`, in terms of `d` and `2g - 2`.
pub fn abelian_degree(n: u32, k: u32) -> ScalarForm {
    let (n, k) = (n as i64, k as i64);
    let nu = binomial(k + 1, 2);
    let a = binomial(n + k, k) + nu * binomial(n - 2 + k, k);
    let b = nu * binomial(n - 1 + k, k) + binomial(nu, 2) * binomial(n - 2 + k, k);
    ScalarForm::parse(&format!("{a}*d + {b}*(2*g - 2)"), &["d", "g"]).expect("valid template")
}

/// `(p/2)(k^5 + 5k^4 + 13k^3 + 19k^2 + 16k + 6)`.
pub fn abelian_example4_degree(k: i64, p: i64) -> Result<BigInt> {
    let k = BigInt::from(k);
    let poly = k.pow(5) + 5 * k.pow(4) + 13 * k.pow(3) + 19 * k.pow(2) + 16 * &k + 6;
    let prod = poly * p;
    if (&prod % 2u32) != BigInt::zero() {
        return Err(Error::Integrality(format!("p * (...) = {prod} is odd")));
    }
    Ok(prod / 2)
}

/// Degrees in the exceptional cases of the lower bound `deg >= 3d` in `P^8`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exception {
    /// `(d, deg)`
    Values(i64, i64),
    Formula(ScalarForm),
}

pub fn thm_details_exception_degree(case: u32) -> Result<Exception> {
    Ok(match case {
        1 => Exception::Values(7, 3),
        2 => Exception::Formula(ScalarForm::parse("3*d - 12", &["d"])?),
        3 => Exception::Formula(ScalarForm::parse("3*d + 20*(q - 1) + 2*(F + G)", &["d", "q", "F", "G"])?),
        4 => Exception::Formula(ScalarForm::parse("3*d + 30*(q - 1) + 12*F + 8*(A + M)", &["d", "q", "F", "A", "M"])?),
        _ => return Err(Error::invalid(format!("unknown exceptional case {case}"))),
    })
}

/// Degree-zero equations used by the diophantine scans.
pub mod scan_equations {
    use super::ScalarForm;

    pub fn plane_n10() -> ScalarForm {
        ScalarForm::parse("46*x^2 - 297*x + 534 - 19*y", &["x", "y"]).expect("valid")
    }

    pub fn plane_n9() -> ScalarForm {
        super::plane_degree_n9()
    }

    /// Equals minus the degree on `F_e`.
    pub fn hirzebruch() -> ScalarForm {
        ScalarForm::parse("12*e*a^2 - 24*a*b + 34*(2 - e)*a + 68*b - (9*d + 104)", &["a", "b", "d", "e"]).expect("valid")
    }

    pub fn curve_times_line() -> ScalarForm {
        ScalarForm::parse("24*a*b + 68*(q - 1)*a - 68*b + 9*d - 104*(q - 1)", &["a", "b", "d", "q"]).expect("valid")
    }

    pub fn space(ell: u32) -> Option<ScalarForm> {
        let src = match ell {
            2 => "5*(7*d + 4*x^3 - 52*x^2 + 32*y + 62*x)",
            3 => "20*(6*d + 5*x^3 - 77*x^2 + 36*y + 181*x - 143)",
            4 => "20*(17*d + 17*x^3 - 303*x^2 + 124*y + 969*x - 1153)",
            _ => return None,
        };
        Some(ScalarForm::parse(src, &["d", "x", "y"]).expect("valid"))
    }

    /// Obtained from the fourfold degrees with `c = (3h, 4h^2, 2h^3)`, `h^3 = 2`,
    /// `v1 = x h`, `v2 = (y/2) h^2`.
    pub fn quadric(ell: u32) -> Option<ScalarForm> {
        let src = match ell {
            2 => "5*(7*d + 8*x^3 - 78*x^2 + 68*x + 24*y)",
            3 => "10*(12*d + 20*x^3 - 231*x^2 + 397*x + 54*y - 222)",
            4 => "10*(34*d + 68*x^3 - 909*x^2 + 2125*x + 186*y - 1788)",
            _ => return None,
        };
        Some(ScalarForm::parse(src, &["d", "x", "y"]).expect("valid"))
    }
}

/// Machine-readable dump of every transcribed formula.
pub fn catalogue() -> Vec<FormulaRecord> {
    let mut out = Vec::new();
    for (i, t) in THREEFOLD_CLASS.iter().enumerate() {
        out.push(record(&format!("threefold.class.{}", i + 1), "threefold", "n=3 m=2 k=2", *t, "graded part of the inverse total class"));
    }
    for big_n in 8..=10 {
        out.push(record(
            &format!("threefold.degree.N{big_n}"),
            "threefold",
            "n=3 m=2 k=2",
            surface_degree(big_n).expect("valid").to_string(),
            "degree of the inflectional locus",
        ));
    }
    out.push(record("threefold.degree.N9.plane", "threefold", "Y=P2, v=deg det V", plane_degree_n9().to_string(), "N=9 degree on the plane"));
    out.push(record("threefold.degree.N9.k3", "threefold", "Y=K3", k3_degree().to_string(), "N=9 degree on a K3 surface"));
    out.push(record("threefold.projection", "threefold", "n=3 m=2", projection_degree().to_string(), "degree of (3L + K) L^2"));
    out.push(record("divisor.class", "divisor", "2<=m<n", "(n+2)*K + (m+1)*V1 + C(m+1,2)*L", "class of the inflectional divisor"));
    let (a, b) = divisor_degree_forms(4);
    out.push(record("divisor.degree.forms", "divisor", "m=2 n=4", format!("{a} == {b}"), "two expressions for the divisor degree"));
    for (i, t) in FOURFOLD_CLASS.iter().enumerate() {
        out.push(record(&format!("fourfold.class.{}", i + 2), "fourfold", "n=4 m=3 k=2", *t, "class of the inflectional locus"));
    }
    for (i, t) in FOURFOLD_DEGREE.iter().enumerate() {
        out.push(record(&format!("fourfold.degree.{}", i + 1), "fourfold", "n=4 m=3 k=2", *t, "degree of the inflectional locus"));
    }
    out.push(record(
        "abelian.class.m2",
        "abelian",
        "m=2, nu=C(k+1,2)",
        "C(l+k,k) L^l + nu C(l-1+k,k) V1 L^(l-1) + C(l-2+k,k) (C(nu+1,2) V1^2 - nu V2) L^(l-2)",
        "class over an abelian surface",
    ));
    out.push(record(
        "abelian.class.m3",
        "abelian",
        "m=3, mu=C(k+2,2), nu=C(k+2,3)",
        "C(l+mu-1,mu-1) L^l + nu C(l+mu-2,mu-1) V1 L^(l-1) + C(l+mu-3,mu-1) (C(nu+1,2) V1^2 - nu V2) L^(l-2) \
         + C(l+mu-4,mu-1) (C(nu+2,3) V1^3 - nu(nu+1) V1 V2 + nu V3) L^(l-3)",
        "class over an abelian threefold",
    ));
    out.push(record("abelian.degree", "abelian", "m=2 l=n k=2 n=3", abelian_degree(3, 2).to_string(), "degree over an abelian surface"));
    out.push(record("abelian.example", "abelian", "n=3 m=2", "(p/2)(k^5 + 5k^4 + 13k^3 + 19k^2 + 16k + 6)", "abelian surface with d=3p"));
    for case in 1..=4 {
        let t = match thm_details_exception_degree(case).expect("valid case") {
            Exception::Values(d, deg) => format!("(d, deg) = ({d}, {deg})"),
            Exception::Formula(f) => f.to_string(),
        };
        out.push(record(&format!("exceptions.case{case}"), "exceptions", "n=3 m=2 N=8", t, "exception to deg >= 3d"));
    }
    out.push(record("scan.plane.N10", "scan", "Y=P2 N=10", scan_equations::plane_n10().to_string(), "degree with d = x^2 - y"));
    out.push(record("scan.plane.N9", "scan", "Y=P2 N=9", scan_equations::plane_n9().to_string(), "degree on the plane"));
    out.push(record("scan.hirzebruch", "scan", "Y=F_e", scan_equations::hirzebruch().to_string(), "minus the degree"));
    out.push(record("scan.curve-times-line", "scan", "Y=BxP1", scan_equations::curve_times_line().to_string(), "degree"));
    for ell in 2..=4 {
        out.push(record(&format!("scan.space.{ell}"), "scan", "Y=P3", scan_equations::space(ell).expect("valid").to_string(), "degree"));
        out.push(record(
            &format!("scan.quadric.{ell}"),
            "scan",
            "Y=Q3",
            scan_equations::quadric(ell).expect("valid").to_string(),
            "degree, derived from the fourfold formulas",
        ));
    }
    out
}

/// Sets the Chern classes of the tangent bundle (`C_i` or `c_i`) to zero.
pub fn drop_tangent(x: &GradedClass) -> GradedClass {
    let ring = x.ring();
    let kept = x.poly().terms().filter(|(m, _)| {
        ring.vars().iter().zip(m.iter()).all(|(v, &e)| e == 0 || !v.name.starts_with(['C', 'c']))
    });
    let poly = Poly::from_terms(ring.len(), kept.map(|(m, c)| (m.clone(), c.clone())));
    GradedClass::from_poly(ring, x.truncation(), poly).expect("same ring")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example4_values() {
        assert_eq!(abelian_example4_degree(2, 11).unwrap(), BigInt::from(1815));
        assert_eq!(abelian_example4_degree(3, 18).unwrap(), BigInt::from(11016));
        // k^5 + 5k^4 + 13k^3 + 19k^2 + 16k + 6 is even for every k
        for k in 0..40 {
            assert!(abelian_example4_degree(k, 1).is_ok());
        }
    }

    #[test]
    fn example4_matches_abelian_degree() {
        for k in 1..6i64 {
            let p = (k + 1) * (k + 1) + 2;
            let f = abelian_degree(3, k as u32);
            // d = 3p and 2g - 2 = 4p, i.e. g = 2p + 1
            let v = f.eval(&[("d", int(3 * p)), ("g", int(2 * p + 1))]).unwrap();
            // the doubled product is always even
            let twice = abelian_example4_degree(k, 2 * p).unwrap();
            assert_eq!(int(2) * v, Rat::from_integer(twice));
        }
    }

    #[test]
    fn k3_and_abelian_degree_values() {
        assert_eq!(k3_degree_value(7, 5), BigInt::from(15));
        assert_eq!(abelian_degree(3, 2), ScalarForm::parse("19*d + 27*(2*g - 2)", &["d", "g"]).unwrap());
    }

    #[test]
    fn abelian_class_low_codim() {
        let c = abelian_class(3, 2, 2, 1).unwrap();
        assert_eq!(c, GradedClass::parse(&Ring::total_space(3, 2), 3, "3*L + 3*V1").unwrap());
    }

    #[test]
    fn two_expressions_agree() {
        for n in 3..=6 {
            let (a, b) = divisor_degree_forms(n);
            assert_eq!(a.on_base(n, 2).unwrap(), b.on_base(n, 2).unwrap());
        }
    }

    #[test]
    fn catalogue_ids_unique() {
        let cat = catalogue();
        let mut ids: Vec<_> = cat.iter().map(|r| r.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), cat.len());
    }
}
