//! Intersection numbers on the base: [`NumericalBaseData`] maps every top-degree
//! monomial in `c_i = c_i(T_Y)` and `v_i = c_i(V)` to a value, and [`ChowModel`]
//! produces such tables from a small presentation of the Chow ring of `Y`.
//!
//! Values are polynomials in named parameters, so a table can stay symbolic in
//! the Chern classes of `V` (e.g. `v1 = x*H` on a projective plane).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chern::{GradedClass, Ring};
use crate::error::{Error, Result};
use crate::parse::{parse_monomial, parse_poly};
use crate::poly::{binomial, int, Monomial, Poly, Rat};
use crate::scroll::scroll_degree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalBaseData {
    dim: u32,
    rank: u32,
    params: Vec<String>,
    values: BTreeMap<Monomial, Poly>,
}

/// All exponent vectors over `weights` of weighted degree exactly `deg`.
fn monomials_of_degree(weights: &[u32], deg: u32) -> Vec<Monomial> {
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left / weights[i] {
            cur[i] = e;
            rec(weights, i + 1, left - e * weights[i], cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(weights, 0, deg, &mut vec![0; weights.len()], &mut out);
    out
}

fn drop_var(p: &Poly, i: usize) -> Poly {
    Poly::from_terms(
        p.nvars() - 1,
        p.terms().map(|(m, c)| {
            let mut m = m.clone();
            m.remove(i);
            (m, c.clone())
        }),
    )
}

#[derive(Serialize, Deserialize)]
struct DataFile {
    dim: u32,
    rank: u32,
    #[serde(default)]
    params: Vec<String>,
    values: BTreeMap<String, toml::Value>,
}

impl NumericalBaseData {
    pub fn new(dim: u32, rank: u32, params: Vec<String>, values: BTreeMap<Monomial, Poly>) -> Result<Self> {
        if dim == 0 || rank == 0 {
            return Err(Error::invalid("dimension and rank must be positive"));
        }
        let data = NumericalBaseData { dim, rank, params, values };
        let ring = data.ring();
        for (m, v) in &data.values {
            if m.len() != ring.len() || ring.degree(m) != dim {
                return Err(Error::invalid(format!("key {m:?} is not a top-degree monomial")));
            }
            if v.nvars() != data.params.len() {
                return Err(Error::invalid("value polynomial does not match the parameter list"));
            }
        }
        Ok(data)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// The ring `c_1..c_m, v_1..v_r` of the base.
    pub fn ring(&self) -> Arc<Ring> {
        Ring::base(self.dim + self.rank - 1, self.dim)
    }

    pub fn value(&self, m: &[u32]) -> Option<&Poly> {
        self.values.get(m)
    }

    /// Integrates a class on the base: only its top-degree part contributes.
    pub fn evaluate(&self, class: &GradedClass) -> Result<Poly> {
        let ring = self.ring();
        if **class.ring() != *ring {
            return Err(Error::RingMismatch { left: format!("{:?}", class.ring().names()), right: format!("{:?}", ring.names()) });
        }
        let names = ring.names();
        let mut missing = Vec::new();
        let mut acc = Poly::zero(self.params.len());
        for (m, c) in class.poly().terms() {
            if ring.degree(m) != self.dim {
                continue;
            }
            match self.values.get(m) {
                Some(v) => acc = &acc + &v.scale(c),
                None => missing.push(crate::poly::fmt_monomial(m, &names)),
            }
        }
        if !missing.is_empty() {
            missing.sort();
            return Err(Error::IncompleteData { missing });
        }
        Ok(acc)
    }

    /// Degree of the scroll, `d = pi_*(L^n)`, evaluated on this base.
    pub fn scroll_degree(&self) -> Result<Poly> {
        let d = self.evaluate(&scroll_degree(self.dim + self.rank - 1, self.dim)?)?;
        if d.is_constant() && d.constant_term() <= Rat::from_integer(0.into()) {
            log::warn!("scroll degree {} is not positive; the data cannot come from an embedded scroll", d.constant_term());
        }
        Ok(d)
    }

    /// Substitutes values for some parameters; the remaining ones stay symbolic.
    pub fn bind(&self, assignments: &[(&str, Rat)]) -> Result<NumericalBaseData> {
        let mut values: Vec<Poly> = self.values.values().cloned().collect();
        let mut params = self.params.clone();
        for (name, val) in assignments {
            let i = params.iter().position(|p| p == name).ok_or_else(|| Error::invalid(format!("unknown parameter '{name}'")))?;
            values = values.iter().map(|p| drop_var(&p.specialize(i, val), i)).collect();
            params.remove(i);
        }
        let values = self.values.keys().cloned().zip(values).collect();
        NumericalBaseData::new(self.dim, self.rank, params, values)
    }

    /// Replaces the parameters by polynomials in `new_params`; parameters
    /// without an image must occur in `new_params` under the same name.
    pub fn reparametrize(&self, new_params: &[&str], images: &[(&str, &str)]) -> Result<NumericalBaseData> {
        let subs = self
            .params
            .iter()
            .map(|p| match images.iter().find(|(n, _)| n == p) {
                Some((_, src)) => parse_poly(src, new_params),
                None => new_params
                    .iter()
                    .position(|q| q == p)
                    .map(|i| Poly::var(new_params.len(), i))
                    .ok_or_else(|| Error::invalid(format!("parameter '{p}' has no image"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let values = self.values.iter().map(|(m, v)| (m.clone(), v.substitute(&subs))).collect();
        NumericalBaseData::new(self.dim, self.rank, new_params.iter().map(|s| s.to_string()).collect(), values)
    }

    pub fn from_toml(src: &str) -> Result<NumericalBaseData> {
        let file: DataFile = toml::from_str(src).map_err(|e| Error::Parse { pos: e.span().map_or(0, |s| s.start), msg: e.message().to_string() })?;
        let ring = Ring::base(file.dim + file.rank - 1, file.dim);
        let names = ring.names();
        let mut values = BTreeMap::new();
        for (key, val) in &file.values {
            let m = parse_monomial(key, &names)?;
            let v = match val {
                toml::Value::Integer(i) => Poly::constant(file.params.len(), int(*i)),
                toml::Value::String(s) => parse_poly(s, &file.params)?,
                other => return Err(Error::invalid(format!("value for '{key}' must be an integer or a string, got {other}"))),
            };
            values.insert(m, v);
        }
        NumericalBaseData::new(file.dim, file.rank, file.params, values)
    }

    pub fn to_toml(&self) -> String {
        let ring = self.ring();
        let names = ring.names();
        let values = self
            .values
            .iter()
            .map(|(m, v)| {
                let key = crate::poly::fmt_monomial(m, &names);
                let val = match crate::poly::rat_to_i64(&v.constant_term()) {
                    Some(i) if v.is_constant() => toml::Value::Integer(i),
                    _ => toml::Value::String(v.display(&self.params).to_string()),
                };
                (key, val)
            })
            .collect();
        let file = DataFile { dim: self.dim, rank: self.rank, params: self.params.clone(), values };
        toml::to_string(&file).expect("serializable")
    }
}

/// A presentation of (the numerical part of) the Chow ring of a base `Y`.
#[derive(Clone, Debug)]
pub struct ChowModel {
    pub name: String,
    dim: u32,
    generators: Vec<(String, u32)>,
    params: Vec<String>,
    /// top-degree generator monomial -> value in the parameters
    integrals: BTreeMap<Monomial, Poly>,
    /// `c_1(T_Y) .. c_m(T_Y)` and `c_1(V) ..` as polynomials in generators then parameters
    tangent: Vec<Poly>,
    bundle: Vec<Poly>,
}

/// Parameter-free description used by [`ChowModel::preset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `P^m` with `c(V) = 1 + x H + y H^2 + z H^3`.
    ProjectiveSpace(u32),
    /// Smooth quadric threefold with `c(V) = 1 + x h + (y/2) h^2 + (z/2) h^3`.
    Quadric3,
    /// Hirzebruch surface `F_e`; `None` keeps `e` as a parameter.
    Hirzebruch(Option<i64>),
    /// `B x P^1` with `B` of genus `q`; `None` keeps `q` as a parameter.
    CurveTimesLine(Option<i64>),
    AbelianSurface,
    AbelianThreefold,
    K3,
    /// `P(F)` over a curve of genus `q`, with `deg F` and `c_1(V) = alpha xi + beta f`.
    RuledSurface,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a.parse::<i64>().map_err(|_| Error::invalid(format!("bad preset argument in '{s}'")))?)),
            None => (s, None),
        };
        let p = match head.to_ascii_lowercase().as_str() {
            "p1" => Preset::ProjectiveSpace(1),
            "p2" => Preset::ProjectiveSpace(2),
            "p3" => Preset::ProjectiveSpace(3),
            "q3" => Preset::Quadric3,
            "fe" => Preset::Hirzebruch(arg),
            "bxp1" => Preset::CurveTimesLine(arg),
            "abelian2" | "abelian-surface" => Preset::AbelianSurface,
            "abelian3" | "abelian-threefold" => Preset::AbelianThreefold,
            "k3" => Preset::K3,
            "ruled" => Preset::RuledSurface,
            _ => return Err(Error::invalid(format!("unknown base preset '{s}'"))),
        };
        Ok(p)
    }

    pub fn names() -> &'static [&'static str] {
        &["P1", "P2", "P3", "Q3", "Fe[:e]", "BxP1[:q]", "abelian2", "abelian3", "K3", "ruled"]
    }
}

impl ChowModel {
    pub fn new(
        name: impl Into<String>,
        dim: u32,
        generators: &[(&str, u32)],
        params: &[&str],
        integrals: &[(&str, &str)],
        tangent: &[&str],
        bundle: &[&str],
    ) -> Result<ChowModel> {
        let gnames: Vec<&str> = generators.iter().map(|g| g.0).collect();
        let mut all: Vec<&str> = gnames.clone();
        all.extend_from_slice(params);
        let mut table = BTreeMap::new();
        for (mono, val) in integrals {
            table.insert(parse_monomial(mono, &gnames)?, parse_poly(val, params)?);
        }
        let weights: Vec<u32> = generators.iter().map(|g| g.1).collect();
        for m in monomials_of_degree(&weights, dim) {
            if !table.contains_key(&m) {
                return Err(Error::invalid(format!("integral of {} is not given", crate::poly::fmt_monomial(&m, &gnames))));
            }
        }
        let parse_all = |xs: &[&str]| xs.iter().map(|s| parse_poly(s, &all)).collect::<Result<Vec<_>>>();
        Ok(ChowModel {
            name: name.into(),
            dim,
            generators: generators.iter().map(|(n, w)| (n.to_string(), *w)).collect(),
            params: params.iter().map(|s| s.to_string()).collect(),
            integrals: table,
            tangent: parse_all(tangent)?,
            bundle: parse_all(bundle)?,
        })
    }

    pub fn preset(p: Preset) -> ChowModel {
        let built = match p {
            Preset::ProjectiveSpace(m) => {
                let names = ["x", "y", "z"];
                let c: Vec<String> = (1..=m).map(|i| format!("{}*H^{i}", binomial(m as i64 + 1, i as i64))).collect();
                let v: Vec<String> = (1..=m).map(|i| format!("{}*H^{i}", names[i as usize - 1])).collect();
                let top = format!("H^{m}");
                ChowModel::new(
                    format!("P{m}"),
                    m,
                    &[("H", 1)],
                    &names[..m as usize],
                    &[(&top, "1")],
                    &c.iter().map(String::as_str).collect::<Vec<_>>(),
                    &v.iter().map(String::as_str).collect::<Vec<_>>(),
                )
            }
            Preset::Quadric3 => ChowModel::new(
                "Q3",
                3,
                &[("h", 1)],
                &["x", "y", "z"],
                &[("h^3", "2")],
                &["3*h", "4*h^2", "2*h^3"],
                &["x*h", "y/2*h^2", "z/2*h^3"],
            ),
            Preset::Hirzebruch(e) => {
                let e = e.map_or("e".to_string(), |e| format!("({e})"));
                let s2 = format!("-{e}");
                let c1 = format!("2*s + (2 + {e})*f");
                let params: &[&str] = if e == "e" { &["a", "b", "y", "e"] } else { &["a", "b", "y"] };
                ChowModel::new(
                    "Fe",
                    2,
                    &[("s", 1), ("f", 1), ("pt", 2)],
                    params,
                    &[("s^2", &s2), ("s*f", "1"), ("f^2", "0"), ("pt", "1")],
                    &[&c1, "4*pt"],
                    &["a*s + b*f", "y*pt"],
                )
            }
            Preset::CurveTimesLine(q) => {
                let q = q.map_or("q".to_string(), |q| format!("({q})"));
                let c1 = format!("2*s + (2 - 2*{q})*f");
                let c2 = format!("4*(1 - {q})*pt");
                let params: &[&str] = if q == "q" { &["a", "b", "y", "q"] } else { &["a", "b", "y"] };
                ChowModel::new(
                    "BxP1",
                    2,
                    &[("s", 1), ("f", 1), ("pt", 2)],
                    params,
                    &[("s^2", "0"), ("s*f", "1"), ("f^2", "0"), ("pt", "1")],
                    &[&c1, &c2],
                    &["a*s + b*f", "y*pt"],
                )
            }
            Preset::AbelianSurface => ChowModel::new(
                "abelian2",
                2,
                &[("D", 1), ("P", 2)],
                &["w", "y"],
                &[("D^2", "w"), ("P", "1")],
                &["0", "0"],
                &["D", "y*P"],
            ),
            Preset::AbelianThreefold => ChowModel::new(
                "abelian3",
                3,
                &[("D", 1), ("E", 2), ("P", 3)],
                &["t", "u", "z"],
                &[("D^3", "t"), ("D*E", "u"), ("P", "1")],
                &["0", "0", "0"],
                &["D", "E", "z*P"],
            ),
            Preset::K3 => ChowModel::new(
                "K3",
                2,
                &[("D", 1), ("P", 2)],
                &["w", "y"],
                &[("D^2", "w"), ("P", "1")],
                &["0", "24*P"],
                &["D", "y*P"],
            ),
            Preset::RuledSurface => ChowModel::new(
                "ruled",
                2,
                &[("xi", 1), ("f", 1), ("pt", 2)],
                &["alpha", "beta", "y", "q", "F"],
                &[("xi^2", "F"), ("xi*f", "1"), ("f^2", "0"), ("pt", "1")],
                &["2*xi - (2*q - 2 + F)*f", "4*(1 - q)*pt"],
                &["alpha*xi + beta*f", "y*pt"],
            ),
        };
        built.expect("bundled presets are well formed")
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    fn integrate(&self, p: &Poly) -> Poly {
        let ng = self.generators.len();
        let weights: Vec<u32> = self.generators.iter().map(|g| g.1).collect();
        let mut out = Poly::zero(self.params.len());
        for (m, c) in p.terms() {
            let (g, rest) = m.split_at(ng);
            if crate::poly::weighted(g, &weights) != self.dim {
                continue;
            }
            let param_part = Poly::monomial(rest.to_vec(), c.clone());
            out = &out + &(&param_part * &self.integrals[g]);
        }
        out
    }

    /// Table of all top-degree monomials for a bundle of the given rank.
    pub fn data(&self, rank: u32) -> NumericalBaseData {
        let m = self.dim;
        let ring = Ring::base(m + rank - 1, m);
        let nv = self.generators.len() + self.params.len();
        let images: Vec<Poly> = (1..=m)
            .map(|i| self.tangent.get(i as usize - 1).cloned().unwrap_or_else(|| Poly::zero(nv)))
            .chain((1..=rank).map(|i| self.bundle.get(i as usize - 1).cloned().unwrap_or_else(|| Poly::zero(nv))))
            .collect();
        let values = monomials_of_degree(&ring.weights(), m)
            .into_iter()
            .map(|mono| {
                let p = Poly::monomial(mono.clone(), int(1)).substitute(&images);
                (mono, self.integrate(&p))
            })
            .collect();
        NumericalBaseData::new(m, rank, self.params.clone(), values).expect("consistent model")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_plane_table() {
        let data = ChowModel::preset(Preset::ProjectiveSpace(2)).data(2);
        let ring = data.ring();
        let p = |s: &str| parse_poly(s, &["x", "y"]).unwrap();
        let key = |s: &str| parse_monomial(s, &ring.names()).unwrap();
        assert_eq!(data.value(&key("c1^2")), Some(&p("9")));
        assert_eq!(data.value(&key("c2")), Some(&p("3")));
        assert_eq!(data.value(&key("c1*v1")), Some(&p("3*x")));
        assert_eq!(data.scroll_degree().unwrap(), p("x^2 - y"));
    }

    #[test]
    fn hirzebruch_canonical_square_is_eight() {
        let data = ChowModel::preset(Preset::Hirzebruch(None)).data(2);
        let ring = data.ring();
        let k = parse_monomial("c1^2", &ring.names()).unwrap();
        assert_eq!(data.value(&k), Some(&Poly::constant(4, int(8))));
        let q = ChowModel::preset(Preset::Quadric3).data(2);
        let ring = q.ring();
        let m = parse_monomial("v1*v2", &ring.names()).unwrap();
        assert_eq!(q.value(&m), Some(&parse_poly("x*y", &["x", "y", "z"]).unwrap()));
    }

    #[test]
    fn toml_roundtrip_and_missing_keys() {
        let data = ChowModel::preset(Preset::ProjectiveSpace(2)).data(2);
        let back = NumericalBaseData::from_toml(&data.to_toml()).unwrap();
        assert_eq!(back, data);
        let partial = "dim = 2\nrank = 2\n[values]\n\"c1^2\" = 9\n";
        let d = NumericalBaseData::from_toml(partial).unwrap();
        let cls = GradedClass::parse(&d.ring(), 2, "c1^2 + c2 + v1^2").unwrap();
        match d.evaluate(&cls) {
            Err(Error::IncompleteData { missing }) => assert_eq!(missing, vec!["c2".to_string(), "v1^2".to_string()]),
            other => panic!("expected incomplete data, got {other:?}"),
        }
        assert!(NumericalBaseData::from_toml("dim = 2\nrank = 2\n[values]\n\"c1\" = 1\n").is_err());
    }

    #[test]
    fn binding_parameters() {
        let data = ChowModel::preset(Preset::ProjectiveSpace(2)).data(2);
        let bound = data.bind(&[("x", int(4)), ("y", int(4))]).unwrap();
        assert!(bound.params().is_empty());
        assert_eq!(bound.scroll_degree().unwrap(), Poly::constant(0, int(12)));
    }
}
