//! Scrolls `X = P(V) -> Y`: rank bounds, the class of the inflectional locus,
//! Chern-Wu reduction and pushforward to the base.
//!
//! Classes on `X` live in [`Ring::total_space`] (variables `L, C_i, V_i`), classes
//! on `Y` in [`Ring::base`] (variables `c_i, v_i`). The class of the k-th
//! inflectional locus is computed under the standing hypotheses that the jet map
//! has maximal generic rank and that the locus has the expected codimension (or
//! is empty); checking those is the caller's business.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::NumericalBaseData;
use crate::chern::{FormalBundle, GradedClass, Ring};
use crate::error::{Error, Result};
use crate::poly::{binomial, int, Poly};

/// Maximal generic rank of the k-th jet map of an n-dimensional scroll over an m-dimensional base.
pub fn max_rank(n: u32, m: u32, k: u32) -> u64 {
    let (n, m, k) = (n as i64, m as i64, k as i64);
    ((n - m) * binomial(m + k - 1, k - 1) + binomial(m + k, k)) as u64
}

/// Number of non-vanishing derivatives of each order for a section linear in the fiber coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCount {
    pub order: u32,
    /// derivatives in base directions only
    pub base: u64,
    /// derivatives with exactly one fiber direction
    pub mixed: u64,
}

pub fn derivative_counts(n: u32, m: u32, k: u32) -> Vec<OrderCount> {
    let (nn, mm) = (n as i64, m as i64);
    (0..=k)
        .map(|h| {
            let h = h as i64;
            OrderCount {
                order: h as u32,
                base: binomial(mm - 1 + h, h) as u64,
                mixed: if h == 0 { 0 } else { ((nn - mm) * binomial(mm + h - 2, h - 1)) as u64 },
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScrollSetup {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codimension {
    pub ell: i64,
    /// `r_k - 1 <= N <= r_k + n - 2`
    pub in_range: bool,
}

impl ScrollSetup {
    pub fn new(n: u32, m: u32, k: u32, big_n: u32) -> Result<Self> {
        if m < 1 || m >= n {
            return Err(Error::invalid(format!("need 1 <= m < n, got n={n}, m={m}")));
        }
        if k < 1 {
            return Err(Error::invalid("osculation order k must be at least 1"));
        }
        Ok(ScrollSetup { n, m, k, big_n })
    }

    /// Setup whose expected codimension is `ell`.
    pub fn with_codim(n: u32, m: u32, k: u32, ell: u32) -> Result<Self> {
        let rk = max_rank(n, m, k) as i64;
        let big_n = ell as i64 + rk - 2;
        if big_n < 0 {
            return Err(Error::invalid("no ambient dimension realizes this codimension"));
        }
        ScrollSetup::new(n, m, k, big_n as u32)
    }

    pub fn rank_v(&self) -> u32 {
        self.n - self.m + 1
    }

    pub fn r_k(&self) -> u64 {
        max_rank(self.n, self.m, self.k)
    }

    pub fn codim(&self) -> Codimension {
        let rk = self.r_k() as i64;
        let big_n = self.big_n as i64;
        Codimension { ell: big_n + 2 - rk, in_range: rk - 1 <= big_n && big_n <= rk + self.n as i64 - 2 }
    }

    pub fn total_ring(&self) -> Arc<Ring> {
        Ring::total_space(self.n, self.m)
    }

    pub fn base_ring(&self) -> Arc<Ring> {
        Ring::base(self.n, self.m)
    }
}

struct Bundles {
    tangent: FormalBundle,
    v: FormalBundle,
    l: GradedClass,
}

fn bundles_on_total_space(s: &ScrollSetup, truncation: u32) -> Result<Bundles> {
    let x = s.total_ring();
    Ok(Bundles {
        tangent: FormalBundle::from_variables(&x, truncation, s.m, "C")?,
        v: FormalBundle::from_variables(&x, truncation, s.rank_v(), "V")?,
        l: GradedClass::var(&x, truncation, "L")?,
    })
}

fn total_chern_e_k_at(s: &ScrollSetup, truncation: u32) -> Result<GradedClass> {
    let b = bundles_on_total_space(s, truncation)?;
    let v_dual = b.v.dual();
    let mut acc = GradedClass::one(&s.total_ring(), truncation);
    for i in 1..=s.k {
        let f = b.tangent.sym_power(i - 1)?.tensor(&v_dual)?;
        acc = &acc * f.total_chern();
    }
    let last = b.tangent.sym_power(s.k)?.tensor_line(&b.l, -1)?;
    Ok(&acc * last.total_chern())
}

/// `c(E_k) = prod_{i=1..k} c(S^{i-1} T_Y (x) V^dual) * c(S^k T_Y (x) L^-1)` on `X`, truncated at `n`.
pub fn total_chern_e_k(s: &ScrollSetup) -> Result<GradedClass> {
    total_chern_e_k_at(s, s.n)
}

/// The same inverse total class written through Segre classes of the cotangent
/// side: `prod s(S^{i-1} Omega_Y (x) V) * s(S^k Omega_Y (x) L)`, where `s(G) = c(G^dual)^-1`.
pub fn inverse_via_segre(s: &ScrollSetup) -> Result<GradedClass> {
    let b = bundles_on_total_space(s, s.n)?;
    let omega = b.tangent.dual();
    let segre = |g: &FormalBundle| g.dual().total_chern().series_inverse();
    let mut acc = GradedClass::one(&s.total_ring(), s.n);
    for i in 1..=s.k {
        acc = &acc * &segre(&omega.sym_power(i - 1)?.tensor(&b.v)?)?;
    }
    Ok(&acc * &segre(&omega.sym_power(s.k)?.tensor_line(&b.l, 1)?)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inflection {
    pub setup: ScrollSetup,
    pub codim: Codimension,
    /// Homogeneous of degree `ell` on `X`, not Chern-Wu reduced.
    pub class: GradedClass,
}

impl Inflection {
    pub fn reduced(&self) -> Result<GradedClass> {
        chern_wu_reduce(&self.class, self.setup.rank_v())
    }
}

/// Class of the k-th inflectional locus: the degree-`ell` part of `c(E_k)^-1`.
/// Outside the valid range of `N` the formal value is still returned, with the flag cleared.
pub fn inflection_class(s: &ScrollSetup) -> Result<Inflection> {
    let codim = s.codim();
    if !codim.in_range {
        log::warn!("N={} is outside the range where the class formula is asserted", s.big_n);
    }
    let x = s.total_ring();
    let class = if codim.ell < 0 || codim.ell > s.n as i64 {
        GradedClass::zero(&x, s.n)
    } else {
        // Only degree ell is needed, so the expansion can stop there.
        let ell = codim.ell as u32;
        total_chern_e_k_at(s, ell)?.series_inverse()?.part(ell).retruncate(s.n)
    };
    Ok(Inflection { setup: *s, codim, class })
}

fn fiber_indices(ring: &Ring, r: u32) -> Result<(usize, Vec<Option<usize>>)> {
    let l = ring.index("L").ok_or_else(|| Error::invalid("class has no tautological variable L"))?;
    Ok((l, (1..=r).map(|i| ring.index(&format!("V{i}"))).collect()))
}

/// Rewrites `L^r` as `sum_{i=1..r} (-1)^(i+1) V_i L^(r-i)` until every term has L-degree below `r`.
pub fn chern_wu_reduce(x: &GradedClass, r: u32) -> Result<GradedClass> {
    let ring = x.ring().clone();
    let (li, vs) = fiber_indices(&ring, r)?;
    let t = x.truncation();
    let mut relation = Poly::zero(ring.len());
    for (i, v) in vs.iter().enumerate() {
        let Some(v) = v else { continue };
        let mut m = vec![0; ring.len()];
        m[*v] = 1;
        m[li] = r - 1 - i as u32;
        relation.add_term(m, if i % 2 == 0 { int(1) } else { int(-1) });
    }
    let mut done = Poly::zero(ring.len());
    let mut todo = x.poly().clone();
    while !todo.is_empty() {
        let mut next = Poly::zero(ring.len());
        for (m, c) in todo.terms() {
            if m[li] < r {
                done.add_term(m.clone(), c.clone());
                continue;
            }
            let mut rest = m.clone();
            rest[li] -= r;
            let rest = Poly::monomial(rest, c.clone());
            for (mm, cc) in rest.mul_filtered(&relation, |mm| ring.admits(mm, t)).terms() {
                next.add_term(mm.clone(), cc.clone());
            }
        }
        todo = next;
    }
    GradedClass::from_poly(&ring, t, done)
}

/// Integration along the fibers: after reduction, the coefficient of `L^(r-1)`,
/// with `C_i -> c_i` and `V_i -> v_i`.
pub fn pushforward(x: &GradedClass, r: u32) -> Result<GradedClass> {
    let reduced = chern_wu_reduce(x, r)?;
    let ring = x.ring();
    let li = ring.index("L").expect("checked by reduction");
    let base_vars: Vec<_> = ring
        .vars()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != li)
        .map(|(_, v)| {
            let mut v = v.clone();
            v.name = v.name.to_lowercase();
            v
        })
        .collect();
    let dim = ring.base_dim().ok_or_else(|| Error::invalid("ring has no base dimension"))?;
    let target = Ring::new(base_vars, Some(dim))?;
    let mut out = Poly::zero(target.len());
    for (m, c) in reduced.poly().terms() {
        if m[li] == r - 1 {
            let mut m2 = m.clone();
            m2.remove(li);
            out.add_term(m2, c.clone());
        }
    }
    GradedClass::from_poly(&target, dim, out)
}

/// `d = pi_*(L^n)`, the degree of the scroll as a polynomial in the Chern classes of `V`.
pub fn scroll_degree(n: u32, m: u32) -> Result<GradedClass> {
    let x = Ring::total_space(n, m);
    pushforward(&GradedClass::var(&x, n, "L")?.pow(n), n - m + 1)
}

/// Symbolic degree `pi_*([Phi_k] L^(n - ell))`, a top-degree class on `Y`.
pub fn degree_class(s: &ScrollSetup) -> Result<GradedClass> {
    let inf = inflection_class(s)?;
    degree_of_class(&inf.class, s)
}

fn degree_of_class(class: &GradedClass, s: &ScrollSetup) -> Result<GradedClass> {
    let ell = s.codim().ell.clamp(0, s.n as i64) as u32;
    let l = GradedClass::var(class.ring(), class.truncation(), "L")?;
    pushforward(&(class * &l.pow(s.n - ell)), s.rank_v())
}

/// Same as [`degree_class`] but reducing the class before multiplying by the hyperplane power.
pub fn degree_class_reduced_first(s: &ScrollSetup) -> Result<GradedClass> {
    let inf = inflection_class(s)?;
    degree_of_class(&inf.reduced()?, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub setup: ScrollSetup,
    pub codim: Codimension,
    /// Degree as a class on the base before evaluation.
    pub symbolic: GradedClass,
    /// Evaluated degree; constant unless the base data carries free parameters.
    pub value: Poly,
}

impl DegreeReport {
    pub fn integer(&self) -> Option<num_bigint::BigInt> {
        if self.value.is_constant() {
            let c = self.value.constant_term();
            c.is_integer().then(|| c.to_integer())
        } else {
            None
        }
    }
}

pub fn degree_of_inflection(s: &ScrollSetup, data: &NumericalBaseData) -> Result<DegreeReport> {
    if data.dim() != s.m || data.rank() != s.rank_v() {
        return Err(Error::invalid(format!(
            "base data is for dim {} / rank {}, setup needs dim {} / rank {}",
            data.dim(),
            data.rank(),
            s.m,
            s.rank_v()
        )));
    }
    let symbolic = degree_class(s)?;
    let value = data.evaluate(&symbolic)?;
    if value.is_constant() && !value.constant_term().is_integer() {
        return Err(Error::Integrality(format!("degree evaluated to {}", value.constant_term())));
    }
    Ok(DegreeReport { setup: *s, codim: s.codim(), symbolic, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_class(n: u32, m: u32, src: &str) -> GradedClass {
        GradedClass::parse(&Ring::total_space(n, m), n, src).unwrap()
    }

    #[test]
    fn rank_bound() {
        for n in 1..8 {
            assert_eq!(max_rank(n + 1, 1, 3), 3 * (n as u64 + 1) + 1);
        }
        assert_eq!(max_rank(3, 2, 2), 9);
        assert_eq!(max_rank(4, 3, 2), 14);
        let counts = derivative_counts(4, 3, 3);
        assert_eq!(counts.iter().map(|c| c.base + c.mixed).sum::<u64>(), max_rank(4, 3, 3));
    }

    #[test]
    fn codimension_and_range() {
        let s = ScrollSetup::new(3, 2, 2, 8).unwrap();
        assert_eq!(s.codim(), Codimension { ell: 1, in_range: true });
        let s = ScrollSetup::new(4, 3, 2, 13).unwrap();
        assert_eq!(s.codim(), Codimension { ell: 4 - 3, in_range: true });
        let s = ScrollSetup::new(4, 3, 2, 16).unwrap();
        assert_eq!(s.codim(), Codimension { ell: 4, in_range: true });
        let s = ScrollSetup::new(3, 2, 2, 11).unwrap();
        assert_eq!(s.codim(), Codimension { ell: 4, in_range: false });
        assert!(ScrollSetup::new(3, 3, 2, 8).is_err());
        assert!(ScrollSetup::new(3, 2, 0, 8).is_err());
    }

    #[test]
    fn threefold_over_surface_inverse() {
        let s = ScrollSetup::new(3, 2, 2, 10).unwrap();
        let inv = total_chern_e_k(&s).unwrap().series_inverse().unwrap();
        let parts = inv.parts();
        assert_eq!(parts[1], x_class(3, 2, "3*L + 3*V1 - 5*C1"));
        assert_eq!(
            parts[2],
            x_class(3, 2, "6*L^2 + 9*V1*L - 18*C1*L + 6*V1^2 - 3*V2 - 16*C1*V1 + 16*C1^2 - 6*C2")
        );
        assert_eq!(
            parts[3],
            x_class(
                3,
                2,
                "10*L^3 - 42*C1*L^2 + 18*V1*L^2 + 68*C1^2*L - 26*C2*L - 57*C1*V1*L + 18*V1^2*L - 9*V2*L"
            )
        );
        assert_eq!(inverse_via_segre(&s).unwrap(), inv);
    }

    #[test]
    fn chern_wu() {
        let l = x_class(3, 2, "L");
        assert_eq!(chern_wu_reduce(&l, 2).unwrap(), l);
        assert_eq!(chern_wu_reduce(&l.pow(2), 2).unwrap(), x_class(3, 2, "L*V1 - V2"));
        assert_eq!(chern_wu_reduce(&l.pow(3), 2).unwrap(), x_class(3, 2, "(V1^2 - V2)*L - V1*V2"));
    }

    #[test]
    fn pushforward_basics() {
        let l = x_class(4, 2, "L");
        let b = Ring::base(4, 2);
        assert_eq!(pushforward(&l.pow(2), 3).unwrap(), GradedClass::one(&b, 2));
        assert!(pushforward(&x_class(4, 2, "C1*L"), 3).unwrap().is_zero());
        assert_eq!(scroll_degree(4, 2).unwrap(), GradedClass::parse(&b, 2, "v1^2 - v2").unwrap());
        assert_eq!(scroll_degree(3, 2).unwrap(), GradedClass::parse(&Ring::base(3, 2), 2, "v1^2 - v2").unwrap());
        assert_eq!(
            scroll_degree(4, 3).unwrap(),
            GradedClass::parse(&Ring::base(4, 3), 3, "v1^3 - 2*v1*v2").unwrap()
        );
    }

    #[test]
    fn out_of_range_is_flagged_not_refused() {
        let s = ScrollSetup::new(3, 2, 2, 11).unwrap();
        let inf = inflection_class(&s).unwrap();
        assert!(!inf.codim.in_range);
        assert!(inf.class.is_zero());
    }
}
