//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are positional; names live with the caller (a [`crate::chern::Ring`],
//! a jet-probe chart, a scan's unknowns). Terms are kept in a `BTreeMap` keyed by
//! exponent vectors, so the last entry is the lexicographic leading term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;
pub type Monomial = Vec<u32>;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer value of an exact rational, if it is one.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// Binomial coefficient with a possibly negative upper argument, `n(n-1)..(n-k+1)/k!`.
pub fn binomial_signed(n: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * int(n - i) / int(i + 1);
    }
    rat_to_i64(&acc).expect("binomial coefficient is an integer")
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "Poly({})", self.display(&names))
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Rat::one())
    }

    pub fn monomial(exps: Monomial, c: Rat) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rat> {
        self.terms
    }

    pub fn coeff(&self, m: &[u32]) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product keeping only the monomials accepted by `keep`.
    pub fn mul_filtered(&self, other: &Poly, keep: impl Fn(&[u32]) -> bool) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        let mut buf = vec![0u32; self.nvars];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                for i in 0..self.nvars {
                    buf[i] = ma[i] + mb[i];
                }
                if keep(&buf) {
                    out.add_term(buf.clone(), ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|m| weighted(m, weights)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn derivative(&self, var: usize, order: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[var] < order {
                continue;
            }
            let mut factor = Rat::one();
            for j in 0..order {
                factor *= int((m[var] - j) as i64);
            }
            let mut m2 = m.clone();
            m2[var] -= order;
            out.add_term(m2, c * factor);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces variable `i` by `images[i]`; all images share one target variable count.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.nvars), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Substitutes a value for one variable, keeping the variable count.
    pub fn specialize(&self, var: usize, value: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2[var];
            m2[var] = 0;
            out.add_term(m2, c * num_traits::pow::pow(value.clone(), e as usize));
        }
        out
    }

    /// Reinterprets the polynomial in a larger ring; `map[i]` is the new index of variable `i`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            if !m.iter().zip(&lm).all(|(a, b)| a >= b) {
                return None;
            }
            let qm: Monomial = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = c / &lc;
            for (dm, dc) in &d.terms {
                let mm: Monomial = dm.iter().zip(&qm).map(|(a, b)| a + b).collect();
                rem.add_term(mm, -(dc * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut acc = first.clone();
        for m in it {
            for (a, &b) in acc.iter_mut().zip(m) {
                *a = (*a).min(b);
            }
        }
        acc
    }

    /// Divides out the rational content so that coefficients are coprime integers
    /// and the leading coefficient is positive.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut scale = Rat::new(den_lcm, num_gcd);
        if self.leading().unwrap().1.is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    /// Scales so the lexicographic leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    fn coeffs_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2[var];
            m2[var] = 0;
            out.entry(e).or_insert_with(|| Poly::zero(self.nvars)).add_term(m2, c.clone());
        }
        out
    }

    fn shift(&self, var: usize, by: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2[var] += by;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// Gcd of the coefficients of `self` viewed as a polynomial in `var`.
    fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(var).into_values() {
            g = Poly::gcd(&g, &c);
            if g.is_constant() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of `a` by `b` with respect to `var`.
    fn prem(a: &Poly, b: &Poly, var: usize) -> Poly {
        let db = b.degree_in(var);
        let bc = b.coeffs_in(var);
        let lb = bc[&db].clone();
        let mut r = a.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lr = r.coeffs_in(var).remove(&dr).unwrap();
            // r = lb * r - lr * x^(dr-db) * b
            r = &(&r * &lb) - &(&lr * &b.shift(var, dr - db));
        }
        r
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        assert_eq!(a.nvars, b.nvars);
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one(a.nvars);
        }
        // Pull out the common monomial factor first; it is cheap and common.
        let ma = a.monomial_content();
        let mb = b.monomial_content();
        let common: Monomial = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
        let a = a.div_exact(&Poly::monomial(ma.clone(), Rat::one())).unwrap();
        let b = b.div_exact(&Poly::monomial(mb.clone(), Rat::one())).unwrap();
        let rest = Poly::gcd_no_monomial(&a, &b);
        (&rest * &Poly::monomial(common, Rat::one())).monic()
    }

    fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
        if a.is_constant() || b.is_constant() {
            return Poly::one(a.nvars);
        }
        let var = (0..a.nvars)
            .rev()
            .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
            .expect("non-constant polynomial has a variable");
        let (da, db) = (a.degree_in(var), b.degree_in(var));
        if da == 0 {
            return Poly::gcd(a, &b.content_in(var));
        }
        if db == 0 {
            return Poly::gcd(&a.content_in(var), b);
        }
        let ca = a.content_in(var);
        let cb = b.content_in(var);
        let c = Poly::gcd(&ca, &cb);
        let mut p = a.div_exact(&ca).expect("content divides");
        let mut q = b.div_exact(&cb).expect("content divides");
        if p.degree_in(var) < q.degree_in(var) {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            let r = Poly::prem(&p, &q, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var) == 0 {
                q = Poly::one(a.nvars);
                break;
            }
            let cr = r.content_in(var);
            p = q;
            q = r.div_exact(&cr).expect("content divides").primitive();
        }
        let cq = q.content_in(var);
        let g = q.div_exact(&cq).expect("content divides");
        (&c * &g).monic()
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names, weights: None }
    }

    pub fn display_weighted<'a, S: AsRef<str>>(&'a self, names: &'a [S], weights: &'a [u32]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names, weights: Some(weights) }
    }

    /// Terms in graded-lex order (highest weighted degree first, then lex descending).
    pub fn sorted_terms(&self, weights: Option<&[u32]>) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let (da, db) = match weights {
                Some(w) => (weighted(a, w), weighted(b, w)),
                None => (a.iter().sum(), b.iter().sum()),
            };
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

pub fn weighted(m: &[u32], weights: &[u32]) -> u32 {
    m.iter().zip(weights).map(|(e, w)| e * w).sum()
}

pub struct PolyDisplay<'a, S> {
    poly: &'a Poly,
    names: &'a [S],
    weights: Option<&'a [u32]>,
}

pub(crate) fn fmt_monomial<S: AsRef<str>>(m: &[u32], names: &[S]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].as_ref().to_string()),
            _ => parts.push(format!("{}^{}", names[i].as_ref(), e)),
        }
    }
    parts.join("*")
}

impl<S: AsRef<str>> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.sorted_terms(self.weights).into_iter().enumerate() {
            let mono = fmt_monomial(m, self.names);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_filtered(rhs, |_| true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str, names: &[&str]) -> Poly {
        crate::parse::parse_poly(src, names).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial_signed(-3, 2), 6);
        assert_eq!(binomial_signed(4, 0), 1);
    }

    #[test]
    fn exact_division_roundtrip() {
        let n = ["x", "y", "z"];
        let a = p("x^2*y - 3*z + y", &n);
        let b = p("x*z + 2*y^2 - 1", &n);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(prod.div_exact(&p("x + z + 5", &n)).is_none());
    }

    #[test]
    fn gcd_finds_common_factor() {
        let n = ["x", "y", "w"];
        let g = p("x*y - w^2 + 1", &n);
        let a = &g * &p("x^3 + y", &n);
        let b = &g * &p("y*w - 2*x", &n);
        assert_eq!(Poly::gcd(&a, &b), g.monic());
    }

    #[test]
    fn gcd_monomial_content() {
        let n = ["u", "v"];
        let a = p("v^3*u + v^4", &n);
        let b = p("2*v^3 - u*v^5", &n);
        assert_eq!(Poly::gcd(&a, &b), p("v^3", &n));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let n = ["x", "y"];
        assert_eq!(Poly::gcd(&p("x^2 + y", &n), &p("x + y^2 + 1", &n)), Poly::one(2));
    }

    #[test]
    fn derivative_and_eval() {
        let n = ["x", "y"];
        let f = p("x^3*y^2 + 4*x", &n);
        let fx2 = f.derivative(0, 2);
        assert_eq!(fx2, p("6*x*y^2", &n));
        assert_eq!(fx2.eval(&[int(2), rat(1, 2)]), int(3));
    }

    #[test]
    fn display_graded_lex() {
        let n = ["L", "C1", "V1"];
        let f = p("3*V1 + L^2 - 5*C1 + 3*L - 2", &n);
        assert_eq!(f.display(&n).to_string(), "L^2 + 3*L - 5*C1 + 3*V1 - 2");
    }
}
