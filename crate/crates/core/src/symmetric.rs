//! Splitting-principle computations for tensor products and symmetric powers.
//!
//! Two independent routes are provided. `Roots` expands the product of
//! `(1 + root sum)` factors over formal Chern roots and rewrites the result in
//! elementary symmetric functions by solving a small linear system; the
//! resulting universal polynomials are cached per shape. `Newton` passes
//! through power sums and never introduces roots.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::chern::{eval_in, FormalBundle, GradedClass};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{binomial, int, Poly, Rat};

pub const RANK_GUARD: u32 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    #[default]
    Roots,
    Newton,
}

/// Truncation that actually matters: classes built only from base variables
/// vanish above the base dimension.
fn effective_truncation(bundles: &[&FormalBundle]) -> u32 {
    let ring = bundles[0].ring();
    let t = bundles[0].truncation();
    let Some(b) = ring.base_dim() else { return t };
    let only_base = bundles.iter().all(|e| {
        e.total_chern()
            .poly()
            .terms()
            .all(|(m, _)| m.iter().zip(ring.vars()).all(|(&x, v)| x == 0 || v.base))
    });
    if only_base {
        t.min(b)
    } else {
        t
    }
}

/// Partitions of `n` into at most `max_len` parts, each at most `max_part`, parts non-increasing.
pub fn partitions(n: u32, max_part: u32, max_len: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max_part: u32, max_len: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if max_len == 0 {
            return;
        }
        for p in (1..=max_part.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, max_len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// Number of 0-1 matrices with the given row and column sums; this is the
/// coefficient of `x^cols` in `e_{rows[0]} e_{rows[1]} ...`.
fn zero_one_count(rows: &[u32], cols: &mut [u32]) -> i64 {
    let Some((&first, rest)) = rows.split_first() else {
        return i64::from(cols.iter().all(|&c| c == 0));
    };
    fn choose(start: usize, need: u32, rest: &[u32], cols: &mut [u32]) -> i64 {
        if need == 0 {
            return zero_one_count(rest, cols);
        }
        let mut total = 0;
        for j in start..cols.len() {
            if cols[j] > 0 {
                cols[j] -= 1;
                total += choose(j + 1, need - 1, rest, cols);
                cols[j] += 1;
            }
        }
        total
    }
    choose(0, first, rest, cols)
}

fn exponent_of(parts: &[u32], len: usize) -> Vec<u32> {
    let mut e = vec![0; len];
    for &p in parts {
        e[p as usize - 1] += 1;
    }
    e
}

fn padded(parts: &[u32], len: usize) -> Vec<u32> {
    let mut v = parts.to_vec();
    v.resize(len, 0);
    v
}

/// Every way to distribute degree `k` over the groups, with a family of
/// partitions per group chosen by `family(group_size, degree)`.
fn shapes(groups: &[usize], k: u32, family: impl Fn(u32, u32) -> Vec<Vec<u32>>) -> Vec<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for (gi, &g) in groups.iter().enumerate() {
        let mut next = Vec::new();
        for s in &out {
            let used: u32 = s.iter().flatten().sum();
            let range: Vec<u32> = if gi + 1 == groups.len() { vec![k - used] } else { (0..=k - used).collect() };
            for i in range {
                for lam in family(g as u32, i) {
                    let mut s2 = s.clone();
                    s2.push(lam);
                    next.push(s2);
                }
            }
        }
        out = next;
    }
    out
}

/// Rewrites a polynomial symmetric in each of several groups of root variables
/// as a polynomial in the elementary symmetric functions of every group.
/// `groups[g]` is the number of roots in group g; output variable `e_{g,j}`
/// (1 <= j <= groups[g]) sits at offset `sum(groups[..g]) + j - 1`.
fn to_elementary(product: &Poly, groups: &[usize], t: u32) -> Result<Vec<Poly>> {
    let nvars: usize = groups.iter().sum();
    let offsets: Vec<usize> = groups.iter().scan(0, |acc, &g| {
        let o = *acc;
        *acc += g;
        Some(o)
    }).collect();
    let mut out = Vec::with_capacity(t as usize + 1);
    for k in 0..=t {
        // Rows are root monomials x^lambda with lambda sorted (at most g parts per
        // group); columns are products e^alpha (parts at most g). Conjugation
        // matches the two index sets, so the system is square.
        let rows = shapes(groups, k, |g, i| partitions(i, i, g));
        let cols = shapes(groups, k, |g, i| partitions(i, g, i));
        let n = rows.len();
        let mut a = vec![vec![Rat::zero(); cols.len()]; n];
        let mut b = vec![Rat::zero(); n];
        for (ri, lam) in rows.iter().enumerate() {
            let mono: Vec<u32> = lam.iter().zip(groups).flat_map(|(l, &g)| padded(l, g)).collect();
            b[ri] = product.coeff(&mono);
            for (ci, alpha) in cols.iter().enumerate() {
                let mut v = 1i64;
                for (al, la) in alpha.iter().zip(lam) {
                    if al.iter().sum::<u32>() != la.iter().sum::<u32>() {
                        v = 0;
                        break;
                    }
                    v *= zero_one_count(al, &mut padded(la, la.len()));
                    if v == 0 {
                        break;
                    }
                }
                a[ri][ci] = int(v);
            }
        }
        let sol = linalg::solve_unique(&a, &b)
            .ok_or_else(|| Error::Inconsistent("symmetric reduction system is singular".into()))?;
        let mut poly = Poly::zero(nvars);
        for (alpha, c) in cols.iter().zip(sol) {
            let mut e = vec![0; nvars];
            for (g, al) in alpha.iter().enumerate() {
                for (j, x) in exponent_of(al, groups[g]).into_iter().enumerate() {
                    e[offsets[g] + j] = x;
                }
            }
            poly.add_term(e, c);
        }
        out.push(poly);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Shape {
    Tensor(u32, u32),
    Sym(u32, u32),
}

type Cache = Mutex<HashMap<(Shape, u32), Arc<Vec<Poly>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn truncated_product(factors: impl Iterator<Item = Poly>, nvars: usize, t: u32) -> Poly {
    let mut acc = Poly::one(nvars);
    for f in factors {
        acc = acc.mul_filtered(&f, |m| m.iter().sum::<u32>() <= t);
    }
    acc
}

/// `c_k(A (x) B)` for `k <= t` as polynomials in `c_i(A)` (first `min(a,t)` slots)
/// and `c_j(B)` (next `min(b,t)` slots).
fn universal_tensor(a: u32, b: u32, t: u32) -> Result<Arc<Vec<Poly>>> {
    let key = (Shape::Tensor(a, b), t);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    // Roots beyond the first t of each group cannot appear in a partition-shaped
    // monomial of degree <= t, so they are set to zero.
    let (ra, rb) = (a.min(t) as usize, b.min(t) as usize);
    let nv = ra + rb;
    let factors = (0..a as usize).flat_map(|i| (0..b as usize).map(move |j| (i, j))).map(|(i, j)| {
        let mut f = Poly::one(nv);
        if i < ra {
            f = &f + &Poly::var(nv, i);
        }
        if j < rb {
            f = &f + &Poly::var(nv, ra + j);
        }
        f
    });
    let prod = truncated_product(factors, nv, t);
    let u = Arc::new(to_elementary(&prod, &[ra, rb], t)?);
    cache().lock().unwrap().insert(key, u.clone());
    Ok(u)
}

fn multisets(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn rec(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn universal_sym(a: u32, k: u32, t: u32) -> Result<Arc<Vec<Poly>>> {
    let key = (Shape::Sym(a, k), t);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let ra = a.min(t) as usize;
    let factors = multisets(a, k).into_iter().map(|ms| {
        let mut f = Poly::one(ra);
        for i in ms {
            if (i as usize) < ra {
                f = &f + &Poly::var(ra, i as usize);
            }
        }
        f
    });
    let prod = truncated_product(factors, ra, t);
    let u = Arc::new(to_elementary(&prod, &[ra], t)?);
    cache().lock().unwrap().insert(key, u.clone());
    Ok(u)
}

fn apply(universal: &[Poly], images: &[GradedClass], like: &FormalBundle) -> GradedClass {
    let (ring, t) = (like.ring(), like.truncation());
    universal.iter().fold(GradedClass::zero(ring, t), |acc, u| &acc + &eval_in(u, images, ring, t))
}

pub(crate) fn tensor_roots(a: &FormalBundle, b: &FormalBundle) -> Result<GradedClass> {
    let t = effective_truncation(&[a, b]);
    let u = universal_tensor(a.rank(), b.rank(), t)?;
    let mut images: Vec<GradedClass> = (1..=a.rank().min(t)).map(|i| a.c(i)).collect();
    images.extend((1..=b.rank().min(t)).map(|j| b.c(j)));
    Ok(apply(&u, &images, a))
}

pub(crate) fn sym_power_roots(e: &FormalBundle, k: u32) -> Result<GradedClass> {
    let t = effective_truncation(&[e]);
    let u = universal_sym(e.rank(), k, t)?;
    let images: Vec<GradedClass> = (1..=e.rank().min(t)).map(|i| e.c(i)).collect();
    Ok(apply(&u, &images, e))
}

/// Power sums `p_0 .. p_t` of the Chern roots.
fn power_sums(e: &FormalBundle, t: u32) -> Vec<GradedClass> {
    let (ring, tr) = (e.ring(), e.truncation());
    let c: Vec<GradedClass> = (0..=t).map(|i| e.c(i)).collect();
    let mut p = vec![GradedClass::constant(ring, tr, int(e.rank() as i64))];
    for s in 1..=t as usize {
        let mut acc = c[s].scale(&int(if s % 2 == 1 { s as i64 } else { -(s as i64) }));
        for i in 1..s {
            let term = &c[i] * &p[s - i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        p.push(acc);
    }
    p
}

/// Total Chern class from power sums `p_0 .. p_t`.
fn from_power_sums(p: &[GradedClass], like: &FormalBundle) -> GradedClass {
    let (ring, tr) = (like.ring(), like.truncation());
    let mut e = vec![GradedClass::one(ring, tr)];
    for s in 1..p.len() {
        let mut acc = GradedClass::zero(ring, tr);
        for i in 1..=s {
            let term = &e[s - i] * &p[i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&Rat::new(1.into(), (s as i64).into())));
    }
    e.iter().fold(GradedClass::zero(ring, tr), |a, b| &a + b)
}

pub(crate) fn tensor_newton(a: &FormalBundle, b: &FormalBundle) -> GradedClass {
    let t = effective_truncation(&[a, b]);
    let (pa, pb) = (power_sums(a, t), power_sums(b, t));
    let p: Vec<GradedClass> = (0..=t as usize)
        .map(|s| {
            (0..=s).fold(GradedClass::zero(a.ring(), a.truncation()), |acc, i| {
                &acc + &(&pa[i] * &pb[s - i]).scale(&int(binomial(s as i64, i as i64)))
            })
        })
        .collect();
    from_power_sums(&p, a)
}

fn factorial(n: u32) -> Rat {
    (1..=n).fold(int(1), |acc, i| acc * int(i as i64))
}

pub(crate) fn sym_power_newton(e: &FormalBundle, k: u32) -> GradedClass {
    let t = effective_truncation(&[e]);
    let (ring, tr) = (e.ring(), e.truncation());
    let p = power_sums(e, t);
    // Adams operation on the Chern character: psi^j ch = sum_u j^u p_u / u!
    let adams: Vec<GradedClass> = (0..=k)
        .map(|j| {
            (0..=t).fold(GradedClass::zero(ring, tr), |acc, u| {
                let w = Rat::from_integer(num_bigint::BigInt::from(j).pow(u)) / factorial(u);
                &acc + &p[u as usize].scale(&w)
            })
        })
        .collect();
    let mut ch = GradedClass::zero(ring, tr);
    for lam in partitions(k, k, k) {
        let mut z = int(1);
        let mut prod = GradedClass::one(ring, tr);
        for part in 1..=k {
            let mult = lam.iter().filter(|&&x| x == part).count() as u32;
            z *= int(part.pow(mult) as i64) * factorial(mult);
        }
        for &part in &lam {
            prod = &prod * &adams[part as usize];
        }
        ch = &ch + &prod.scale(&z.recip());
    }
    let p_sym: Vec<GradedClass> = (0..=t).map(|s| ch.part(s).scale(&factorial(s))).collect();
    from_power_sums(&p_sym, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::Ring;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4, 4, 4).len(), 5);
        assert_eq!(partitions(4, 2, 4).len(), 3);
        assert_eq!(partitions(4, 4, 2).len(), 3);
        assert_eq!(partitions(0, 3, 3), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn zero_one_matrices() {
        // e1^2 = m2 + 2 m11
        assert_eq!(zero_one_count(&[1, 1], &mut [2]), 1);
        assert_eq!(zero_one_count(&[1, 1], &mut [1, 1]), 2);
        assert_eq!(zero_one_count(&[2], &mut [2]), 0);
    }

    #[test]
    fn sym_square_rank_two_and_three() {
        let b = Ring::base(3, 2);
        let t = FormalBundle::from_variables(&b, 2, 2, "c").unwrap();
        for s in [Strategy::Roots, Strategy::Newton] {
            let s2 = t.sym_power_with(2, s).unwrap();
            assert_eq!(s2.rank(), 3);
            assert_eq!(s2.total_chern(), &GradedClass::parse(&b, 2, "1 + 3*c1 + 2*c1^2 + 4*c2").unwrap());
        }
        let b = Ring::base(4, 3);
        let t = FormalBundle::from_variables(&b, 3, 3, "c").unwrap();
        let expect = GradedClass::parse(&b, 3, "1 + 4*c1 + 5*(c1^2 + c2) + 2*c1^3 + 11*c1*c2 + 7*c3").unwrap();
        for s in [Strategy::Roots, Strategy::Newton] {
            assert_eq!(t.sym_power_with(2, s).unwrap().total_chern(), &expect);
        }
    }

    #[test]
    fn dual_v_tensor_tangent() {
        for n in 3..=6u32 {
            let b = Ring::base(n, 2);
            let t = FormalBundle::from_variables(&b, 2, 2, "c").unwrap();
            let v = FormalBundle::from_variables(&b, 2, n - 1, "v").unwrap();
            let w = v.dual().tensor(&t).unwrap();
            let nn = n as i64;
            let c1 = format!("-2*v1 + {}*c1", nn - 1);
            let c2 = format!("v1^2 + 2*v2 - {}*v1*c1 + {}*c1^2 + {}*c2", 2 * nn - 3, binomial(nn - 1, 2), nn - 1);
            assert_eq!(w.c(1), GradedClass::parse(&b, 2, &c1).unwrap());
            assert_eq!(w.c(2), GradedClass::parse(&b, 2, &c2).unwrap());
            assert_eq!(v.dual().tensor_with(&t, Strategy::Newton).unwrap(), w);
        }
        let b = Ring::base(4, 3);
        let t = FormalBundle::from_variables(&b, 3, 3, "c").unwrap();
        let v = FormalBundle::from_variables(&b, 3, 2, "v").unwrap();
        let w = v.dual().tensor(&t).unwrap();
        assert_eq!(w.c(1), GradedClass::parse(&b, 3, "-3*v1 + 2*c1").unwrap());
        let c3 = "-v1^3 - 6*v1*v2 + 4*c1*(v1^2 + v2) - (2*c1^2 + 4*c2)*v1 + 2*c1*c2 + 2*c3";
        assert_eq!(w.c(3), GradedClass::parse(&b, 3, c3).unwrap());
    }

    #[test]
    fn line_tensor_line_adds() {
        let r = Ring::new(vec![crate::chern::GradedVariable::new("a", 1), crate::chern::GradedVariable::new("b", 1)], None)
            .unwrap();
        let a = FormalBundle::line(&GradedClass::var(&r, 3, "a").unwrap()).unwrap();
        let b = FormalBundle::line(&GradedClass::var(&r, 3, "b").unwrap()).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.total_chern(), &GradedClass::parse(&r, 3, "1 + a + b").unwrap());
        let tw = a.tensor_line(&GradedClass::var(&r, 3, "b").unwrap(), 1).unwrap();
        assert_eq!(tw, ab);
    }

    #[test]
    fn rank_guard() {
        let r = Ring::new(vec![crate::chern::GradedVariable::new("x", 1)], None).unwrap();
        let e = FormalBundle::trivial(&r, 2, 9);
        assert!(matches!(e.tensor(&e), Err(Error::Resource(_))));
        assert!(matches!(e.sym_power(3), Err(Error::Resource(_))));
    }
}
