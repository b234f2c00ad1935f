//! Truncated graded rings and formal vector bundles.
//!
//! A [`Ring`] is an ordered list of weighted variables. Some of them may be
//! flagged as pulled back from a base of dimension `base_dim`; monomials whose
//! base part exceeds that dimension vanish. A [`GradedClass`] is a polynomial in
//! a ring with everything above its truncation degree discarded.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{binomial, int, Monomial, Poly, Rat};
use crate::symmetric::{self, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedVariable {
    pub name: String,
    pub weight: u32,
    /// Pulled back from the base; subject to the ring's `base_dim` bound.
    #[serde(default)]
    pub base: bool,
}

impl GradedVariable {
    pub fn new(name: impl Into<String>, weight: u32) -> Self {
        GradedVariable { name: name.into(), weight, base: false }
    }

    pub fn base(name: impl Into<String>, weight: u32) -> Self {
        GradedVariable { name: name.into(), weight, base: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    vars: Vec<GradedVariable>,
    #[serde(default)]
    base_dim: Option<u32>,
}

impl Ring {
    pub fn new(vars: Vec<GradedVariable>, base_dim: Option<u32>) -> Result<Arc<Ring>> {
        for (i, v) in vars.iter().enumerate() {
            if v.weight == 0 {
                return Err(Error::invalid(format!("variable '{}' has weight 0", v.name)));
            }
            let ok = v.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::invalid(format!("'{}' is not a valid identifier", v.name)));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::invalid(format!("duplicate variable '{}'", v.name)));
            }
        }
        Ok(Arc::new(Ring { vars, base_dim }))
    }

    /// Ring of the total space of `P(V) -> Y` with `dim Y = m`, `rank V = n - m + 1`:
    /// variables `L, C1..Cm, V1..Vr`.
    pub fn total_space(n: u32, m: u32) -> Arc<Ring> {
        let r = n - m + 1;
        let mut vars = vec![GradedVariable::new("L", 1)];
        vars.extend((1..=m).map(|i| GradedVariable::base(format!("C{i}"), i)));
        vars.extend((1..=r).map(|i| GradedVariable::base(format!("V{i}"), i)));
        Ring::new(vars, Some(m)).expect("well-formed ring")
    }

    /// Ring of the base `Y`: variables `c1..cm, v1..vr`.
    pub fn base(n: u32, m: u32) -> Arc<Ring> {
        let r = n - m + 1;
        let mut vars: Vec<_> = (1..=m).map(|i| GradedVariable::base(format!("c{i}"), i)).collect();
        vars.extend((1..=r).map(|i| GradedVariable::base(format!("v{i}"), i)));
        Ring::new(vars, Some(m)).expect("well-formed ring")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[GradedVariable] {
        &self.vars
    }

    pub fn base_dim(&self) -> Option<u32> {
        self.base_dim
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vars.iter().map(|v| v.weight).collect()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.vars).map(|(e, v)| e * v.weight).sum()
    }

    fn base_degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.vars).filter(|(_, v)| v.base).map(|(e, v)| e * v.weight).sum()
    }

    /// Whether the monomial survives in a class truncated at `truncation`.
    pub fn admits(&self, m: &[u32], truncation: u32) -> bool {
        self.degree(m) <= truncation && self.base_dim.map_or(true, |b| self.base_degree(m) <= b)
    }

    fn describe(&self) -> String {
        format!("[{}]", self.names().join(", "))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedClass {
    ring: Arc<Ring>,
    truncation: u32,
    poly: Poly,
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedClass(t={}, {})", self.truncation, self)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ring.names();
        let weights = self.ring.weights();
        write!(f, "{}", self.poly.display_weighted(&names, &weights))
    }
}

impl GradedClass {
    /// Builds a class from a polynomial, discarding every monomial the ring kills
    /// at this truncation.
    pub fn from_poly(ring: &Arc<Ring>, truncation: u32, poly: Poly) -> Result<Self> {
        if poly.nvars() != ring.len() {
            return Err(Error::invalid(format!(
                "polynomial has {} variables, ring {} has {}",
                poly.nvars(),
                ring.describe(),
                ring.len()
            )));
        }
        let poly = Poly::from_terms(ring.len(), poly.into_terms().into_iter().filter(|(m, _)| ring.admits(m, truncation)));
        Ok(GradedClass { ring: ring.clone(), truncation, poly })
    }

    fn wrap(&self, poly: Poly) -> Self {
        GradedClass { ring: self.ring.clone(), truncation: self.truncation, poly }
    }

    pub fn zero(ring: &Arc<Ring>, truncation: u32) -> Self {
        GradedClass { ring: ring.clone(), truncation, poly: Poly::zero(ring.len()) }
    }

    pub fn one(ring: &Arc<Ring>, truncation: u32) -> Self {
        GradedClass::constant(ring, truncation, Rat::one())
    }

    pub fn constant(ring: &Arc<Ring>, truncation: u32, c: Rat) -> Self {
        GradedClass { ring: ring.clone(), truncation, poly: Poly::constant(ring.len(), c) }
    }

    pub fn var(ring: &Arc<Ring>, truncation: u32, name: &str) -> Result<Self> {
        let i = ring.index(name).ok_or_else(|| Error::invalid(format!("no variable '{name}' in {}", ring.describe())))?;
        GradedClass::from_poly(ring, truncation, Poly::var(ring.len(), i))
    }

    pub fn parse(ring: &Arc<Ring>, truncation: u32, src: &str) -> Result<Self> {
        let poly = crate::parse::parse_poly(src, &ring.names())?;
        GradedClass::from_poly(ring, truncation, poly)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Highest weighted degree present; `None` for the zero class.
    pub fn degree(&self) -> Option<u32> {
        self.poly.weighted_degree(&self.ring.weights())
    }

    pub fn constant_term(&self) -> Rat {
        self.poly.constant_term()
    }

    /// Coefficient of a monomial written as a string, e.g. `"C1*L^2"`.
    pub fn coeff_of(&self, monomial: &str) -> Result<Rat> {
        let m = crate::parse::parse_monomial(monomial, &self.ring.names())?;
        Ok(self.poly.coeff(&m))
    }

    pub fn coeff(&self, m: &[u32]) -> Rat {
        self.poly.coeff(m)
    }

    /// Degree-`k` homogeneous component.
    pub fn part(&self, k: u32) -> GradedClass {
        let ring = &self.ring;
        self.wrap(Poly::from_terms(
            ring.len(),
            self.poly.terms().filter(|(m, _)| ring.degree(m) == k).map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// Homogeneous components `0..=truncation`.
    pub fn parts(&self) -> Vec<GradedClass> {
        let mut out: Vec<Poly> = (0..=self.truncation).map(|_| Poly::zero(self.ring.len())).collect();
        for (m, c) in self.poly.terms() {
            out[self.ring.degree(m) as usize].add_term(m.clone(), c.clone());
        }
        out.into_iter().map(|p| self.wrap(p)).collect()
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.poly.terms().all(|(m, _)| self.ring.degree(m) == k)
    }

    /// Same polynomial with a different truncation. Lowering discards terms.
    pub fn retruncate(&self, truncation: u32) -> GradedClass {
        GradedClass::from_poly(&self.ring, truncation, self.poly.clone()).expect("same ring")
    }

    fn compatible(&self, other: &GradedClass) -> Result<()> {
        if !Arc::ptr_eq(&self.ring, &other.ring) && self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.describe(), right: other.ring.describe() });
        }
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch { left: self.truncation, right: other.truncation });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &GradedClass) -> Result<GradedClass> {
        self.compatible(other)?;
        Ok(self.wrap(&self.poly + &other.poly))
    }

    pub fn checked_sub(&self, other: &GradedClass) -> Result<GradedClass> {
        self.compatible(other)?;
        Ok(self.wrap(&self.poly - &other.poly))
    }

    pub fn checked_mul(&self, other: &GradedClass) -> Result<GradedClass> {
        self.compatible(other)?;
        let (ring, t) = (&self.ring, self.truncation);
        Ok(self.wrap(self.poly.mul_filtered(&other.poly, |m| ring.admits(m, t))))
    }

    pub fn scale(&self, c: &Rat) -> GradedClass {
        self.wrap(self.poly.scale(c))
    }

    pub fn pow(&self, e: u32) -> GradedClass {
        let mut acc = GradedClass::one(&self.ring, self.truncation);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse of a class with constant term 1.
    pub fn series_inverse(&self) -> Result<GradedClass> {
        if !self.constant_term().is_one() {
            return Err(Error::invalid(format!("series inverse needs constant term 1, got {}", self.constant_term())));
        }
        let x = self.parts();
        let mut y: Vec<GradedClass> = vec![GradedClass::one(&self.ring, self.truncation)];
        for k in 1..=self.truncation as usize {
            let mut acc = GradedClass::zero(&self.ring, self.truncation);
            for i in 1..=k {
                if !x[i].is_zero() && !y[k - i].is_zero() {
                    acc = &acc - &(&x[i] * &y[k - i]);
                }
            }
            y.push(acc);
        }
        Ok(y.iter().fold(GradedClass::zero(&self.ring, self.truncation), |a, b| &a + b))
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[GradedClass]) -> Result<GradedClass> {
        if images.len() != self.ring.len() {
            return Err(Error::invalid("one image per variable is required"));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for img in images {
            first.compatible(img)?;
        }
        Ok(eval_in(&self.poly, images, &first.ring, first.truncation))
    }

    /// Structured form: ring descriptor plus `(exponents, numerator, denominator)` triples.
    pub fn to_record(&self) -> ClassRecord {
        ClassRecord {
            ring: (*self.ring).clone(),
            truncation: self.truncation,
            terms: self
                .poly
                .sorted_terms(Some(&self.ring.weights()))
                .into_iter()
                .map(|(m, c)| TermRecord(m.clone(), c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }

    pub fn from_record(rec: &ClassRecord) -> Result<GradedClass> {
        let ring = Ring::new(rec.ring.vars.clone(), rec.ring.base_dim)?;
        let mut poly = Poly::zero(ring.len());
        for TermRecord(m, n, d) in &rec.terms {
            if m.len() != ring.len() {
                return Err(Error::invalid("exponent vector length does not match the ring"));
            }
            let n: BigInt = n.parse().map_err(|_| Error::invalid(format!("bad numerator '{n}'")))?;
            let d: BigInt = d.parse().map_err(|_| Error::invalid(format!("bad denominator '{d}'")))?;
            if d.is_zero() {
                return Err(Error::invalid("zero denominator"));
            }
            if !ring.admits(m, rec.truncation) {
                return Err(Error::invalid("term above truncation"));
            }
            poly.add_term(m.clone(), Rat::new(n, d));
        }
        Ok(GradedClass { ring, truncation: rec.truncation, poly })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("serializable")
    }

    pub fn from_json(src: &str) -> Result<GradedClass> {
        let rec: ClassRecord = serde_json::from_str(src).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
        GradedClass::from_record(&rec)
    }
}

/// Evaluates `poly` with variable `i` replaced by `images[i]`, truncating as it goes.
pub(crate) fn eval_in(poly: &Poly, images: &[GradedClass], ring: &Arc<Ring>, truncation: u32) -> GradedClass {
    let mut powers: Vec<Vec<GradedClass>> =
        images.iter().map(|g| vec![GradedClass::one(ring, truncation), g.clone()]).collect();
    let mut acc = GradedClass::zero(ring, truncation);
    for (m, c) in poly.terms() {
        let mut t = GradedClass::constant(ring, truncation, c.clone());
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap() * &images[i];
                powers[i].push(next);
            }
            t = &t * &powers[i][e as usize];
            if t.is_zero() {
                break;
            }
        }
        acc = &acc + &t;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord(pub Monomial, pub String, pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub ring: Ring,
    pub truncation: u32,
    pub terms: Vec<TermRecord>,
}

macro_rules! forward_op {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl $tr for &GradedClass {
            type Output = GradedClass;
            /// Panics on ring or truncation mismatch; use the `checked_*` form to handle it.
            fn $f(self, rhs: &GradedClass) -> GradedClass {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        self.wrap(-&self.poly)
    }
}

/// A rank together with a total Chern class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalBundle {
    rank: u32,
    chern: GradedClass,
}

impl FormalBundle {
    pub fn new(rank: u32, chern: GradedClass) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("bundle rank must be positive"));
        }
        if !chern.constant_term().is_one() {
            return Err(Error::invalid("total Chern class must have constant term 1"));
        }
        Ok(FormalBundle { rank, chern })
    }

    pub fn trivial(ring: &Arc<Ring>, truncation: u32, rank: u32) -> Self {
        FormalBundle { rank, chern: GradedClass::one(ring, truncation) }
    }

    /// Line bundle with first Chern class `c1`.
    pub fn line(c1: &GradedClass) -> Result<Self> {
        if !c1.is_homogeneous(1) {
            return Err(Error::invalid("first Chern class must be homogeneous of degree 1"));
        }
        let one = GradedClass::one(c1.ring(), c1.truncation());
        FormalBundle::new(1, &one + c1)
    }

    /// Bundle whose Chern classes are the ring variables `{prefix}1 .. {prefix}rank`
    /// (variables the ring does not have are taken as zero).
    pub fn from_variables(ring: &Arc<Ring>, truncation: u32, rank: u32, prefix: &str) -> Result<Self> {
        let mut c = GradedClass::one(ring, truncation);
        for i in 1..=rank {
            if let Some(idx) = ring.index(&format!("{prefix}{i}")) {
                if ring.vars()[idx].weight != i {
                    return Err(Error::invalid(format!("{prefix}{i} must have weight {i}")));
                }
                c = &c + &GradedClass::from_poly(ring, truncation, Poly::var(ring.len(), idx))?;
            }
        }
        FormalBundle::new(rank, c)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn total_chern(&self) -> &GradedClass {
        &self.chern
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.chern.ring()
    }

    pub fn truncation(&self) -> u32 {
        self.chern.truncation()
    }

    /// `c_i` as a homogeneous class.
    pub fn c(&self, i: u32) -> GradedClass {
        self.chern.part(i)
    }

    pub fn dual(&self) -> FormalBundle {
        let ring = self.chern.ring().clone();
        let poly = Poly::from_terms(
            ring.len(),
            self.chern.poly().terms().map(|(m, c)| {
                let c = if ring.degree(m) % 2 == 1 { -c.clone() } else { c.clone() };
                (m.clone(), c)
            }),
        );
        FormalBundle { rank: self.rank, chern: self.chern.wrap(poly) }
    }

    pub fn direct_sum(&self, other: &FormalBundle) -> Result<FormalBundle> {
        Ok(FormalBundle { rank: self.rank + other.rank, chern: self.chern.checked_mul(&other.chern)? })
    }

    /// Twist by the line bundle with first Chern class `sign * l`.
    pub fn tensor_line(&self, l: &GradedClass, sign: i32) -> Result<FormalBundle> {
        if sign != 1 && sign != -1 {
            return Err(Error::invalid("sign must be +1 or -1"));
        }
        if !l.is_homogeneous(1) {
            return Err(Error::invalid("line class must be homogeneous of degree 1"));
        }
        self.chern.compatible(l)?;
        let t = l.scale(&int(sign as i64));
        let pw: Vec<GradedClass> = (0..=self.rank).map(|j| t.pow(j)).collect();
        let mut total = GradedClass::zero(self.ring(), self.truncation());
        for k in 0..=self.rank.min(self.truncation()) {
            for i in 0..=k {
                let b = binomial((self.rank - i) as i64, (k - i) as i64);
                if b == 0 {
                    continue;
                }
                let term = &self.c(i) * &pw[(k - i) as usize];
                total = &total + &term.scale(&int(b));
            }
        }
        FormalBundle::new(self.rank, total)
    }

    pub fn tensor(&self, other: &FormalBundle) -> Result<FormalBundle> {
        self.tensor_with(other, Strategy::Roots)
    }

    pub fn tensor_with(&self, other: &FormalBundle, strategy: Strategy) -> Result<FormalBundle> {
        self.chern.compatible(&other.chern)?;
        let rank = self.rank * other.rank;
        if rank > symmetric::RANK_GUARD {
            return Err(Error::Resource(format!("tensor product of rank {rank} exceeds {}", symmetric::RANK_GUARD)));
        }
        let chern = match strategy {
            Strategy::Roots => symmetric::tensor_roots(self, other)?,
            Strategy::Newton => symmetric::tensor_newton(self, other),
        };
        FormalBundle::new(rank, chern)
    }

    pub fn sym_power(&self, k: u32) -> Result<FormalBundle> {
        self.sym_power_with(k, Strategy::Roots)
    }

    pub fn sym_power_with(&self, k: u32, strategy: Strategy) -> Result<FormalBundle> {
        if k == 0 {
            return Ok(FormalBundle::trivial(self.ring(), self.truncation(), 1));
        }
        let rank = binomial((self.rank + k - 1) as i64, k as i64);
        if rank > symmetric::RANK_GUARD as i64 {
            return Err(Error::Resource(format!("symmetric power of rank {rank} exceeds {}", symmetric::RANK_GUARD)));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let chern = match strategy {
            Strategy::Roots => symmetric::sym_power_roots(self, k)?,
            Strategy::Newton => symmetric::sym_power_newton(self, k),
        };
        FormalBundle::new(rank as u32, chern)
    }

    /// Pullback along a ring homomorphism given by variable images.
    pub fn pullback(&self, images: &[GradedClass]) -> Result<FormalBundle> {
        FormalBundle::new(self.rank, self.chern.substitute(images)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[(&str, u32)], t: u32) -> (Arc<Ring>, u32) {
        let vars = names.iter().map(|(n, w)| GradedVariable::new(*n, *w)).collect();
        (Ring::new(vars, None).unwrap(), t)
    }

    fn cls(r: &(Arc<Ring>, u32), s: &str) -> GradedClass {
        GradedClass::parse(&r.0, r.1, s).unwrap()
    }

    #[test]
    fn ring_rejects_duplicates_and_zero_weight() {
        assert!(Ring::new(vec![GradedVariable::new("a", 1), GradedVariable::new("a", 2)], None).is_err());
        assert!(Ring::new(vec![GradedVariable::new("a", 0)], None).is_err());
    }

    #[test]
    fn truncation_discards_high_terms() {
        let r = ring(&[("x", 1), ("y", 2)], 3);
        let a = cls(&r, "1 + x + y");
        let sq = &a * &a;
        assert_eq!(sq, cls(&r, "1 + 2*x + 2*y + x^2 + 2*x*y"));
        assert_eq!(sq.degree(), Some(3));
        assert_eq!(GradedClass::zero(&r.0, 3).degree(), None);
    }

    #[test]
    fn base_dimension_kills_base_monomials() {
        let x = Ring::total_space(3, 2);
        let c = GradedClass::parse(&x, 3, "C1^3 + C1^2*L + V1*C2 + L^3").unwrap();
        assert_eq!(c.to_string(), "L^3 + L*C1^2");
    }

    #[test]
    fn mismatched_truncation_is_an_error() {
        let r = ring(&[("x", 1)], 3);
        let a = cls(&r, "x");
        let b = a.retruncate(2);
        assert_eq!(a.checked_add(&b), Err(Error::TruncationMismatch { left: 3, right: 2 }));
        let other = ring(&[("z", 1)], 3);
        assert!(matches!(a.checked_mul(&cls(&other, "z")), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn inverse_of_rank_three_total_class() {
        let r = ring(&[("b1", 1), ("b2", 2), ("b3", 3)], 3);
        let inv = cls(&r, "1 + b1 + b2 + b3").series_inverse().unwrap();
        assert_eq!(inv, cls(&r, "1 - b1 + b1^2 - b2 - b1^3 + 2*b1*b2 - b3"));
        assert!(cls(&r, "2 + b1").series_inverse().is_err());
        let one = cls(&r, "1");
        assert_eq!(one.series_inverse().unwrap(), one);
    }

    #[test]
    fn inverse_binomial_coefficients() {
        let r = ring(&[("L", 1)], 4);
        let inv = cls(&r, "(1 - L)^3").series_inverse().unwrap();
        let got: Vec<Rat> = (0..=4).map(|j| inv.coeff(&[j])).collect();
        assert_eq!(got, [1, 3, 6, 10, 15].map(int));
    }

    #[test]
    fn dual_and_segre_of_rank_two() {
        let b = Ring::base(3, 2);
        let v = FormalBundle::from_variables(&b, 2, 2, "v").unwrap();
        let s = v.dual().total_chern().series_inverse().unwrap();
        assert_eq!(s, GradedClass::parse(&b, 2, "1 + v1 + v1^2 - v2").unwrap());
        assert_eq!(v.dual().dual(), v);
    }

    #[test]
    fn twist_of_sym_square_by_inverse_tautological() {
        let x = Ring::total_space(3, 2);
        let t = FormalBundle::from_variables(&x, 3, 2, "C").unwrap();
        let s2 = t.sym_power(2).unwrap();
        let l = GradedClass::var(&x, 3, "L").unwrap();
        let tw = s2.tensor_line(&l, -1).unwrap();
        let expect = GradedClass::parse(
            &x,
            3,
            "1 + (3*C1 - 3*L) + (2*C1^2 + 4*C2 - 6*C1*L + 3*L^2) - ((2*C1^2 + 4*C2)*L - 3*C1*L^2 + L^3)",
        )
        .unwrap();
        assert_eq!(tw.total_chern(), &expect);
        let zero = GradedClass::zero(&x, 3);
        assert_eq!(s2.tensor_line(&zero, 1).unwrap(), s2);
        assert!(s2.tensor_line(&GradedClass::parse(&x, 3, "L + L^2").unwrap(), 1).is_err());
    }

    #[test]
    fn twist_rank_three() {
        let x = Ring::total_space(4, 3);
        let t = FormalBundle::from_variables(&x, 4, 3, "C").unwrap();
        let l = GradedClass::var(&x, 4, "L").unwrap();
        let tw = t.sym_power(2).unwrap().tensor_line(&l, -1).unwrap();
        assert_eq!(tw.c(1), GradedClass::parse(&x, 4, "4*C1 - 6*L").unwrap());
        assert_eq!(tw.c(2), GradedClass::parse(&x, 4, "5*(C1^2 + C2) - 20*C1*L + 15*L^2").unwrap());
    }

    #[test]
    fn record_roundtrip() {
        let x = Ring::total_space(3, 2);
        let c = GradedClass::parse(&x, 3, "3/2*L^2 - 5*C1 + V2*L - 7").unwrap();
        let back = GradedClass::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(GradedClass::from_json("{\"ring\":1}").is_err());
    }
}
