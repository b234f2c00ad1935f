//! Exact linear algebra: Gaussian elimination over Q and fraction-free (Bareiss)
//! elimination over Q[x1..xn], which doubles as rank over the rational function field.

#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};

/// Rank of a dense rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..ncols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solves `a * x = b` for a consistent (possibly overdetermined) system with a
/// unique solution. Returns `None` if inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::with_capacity(ncols);
    let mut r = 0;
    for c in 0..ncols {
        let p = (r..nrows).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..=ncols {
            m[r][j] *= &inv;
        }
        for i in 0..nrows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=ncols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(r);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| m[i][ncols].clone()).collect())
}

fn pick_pivot(m: &[Vec<Poly>], from: usize, col: usize) -> Option<usize> {
    (from..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].len())
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn det_poly(matrix: &[Vec<Poly>]) -> Result<Poly> {
    let n = matrix.len();
    let nvars = matrix.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    if n == 0 {
        return Ok(Poly::one(nvars));
    }
    let mut m = matrix.to_vec();
    let mut prev = Poly::one(nvars);
    let mut negate = false;
    for k in 0..n {
        let Some(p) = pick_pivot(&m, k, k) else {
            return Ok(Poly::zero(nvars));
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Inconsistent("Bareiss division was not exact".into()))?;
            }
            m[i][k] = Poly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// Rank of a polynomial matrix over the field of rational functions.
pub fn rank_poly(matrix: &[Vec<Poly>]) -> Result<usize> {
    let mut m = matrix.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let nvars = m.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    let mut prev = Poly::one(nvars);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = pick_pivot(&m, r, c) else {
            continue;
        };
        m.swap(p, r);
        for i in (r + 1)..nrows {
            for j in (c + 1)..ncols {
                let num = &(&m[i][j] * &m[r][c]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Inconsistent("fraction-free elimination lost exactness".into()))?;
            }
            m[i][c] = Poly::zero(nvars);
        }
        prev = m[r][c].clone();
        r += 1;
    }
    Ok(r)
}

/// Identity-free helper used by tests: determinant of a rational matrix.
pub fn det(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut acc = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= &m[c][c];
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::int;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rational_rank_and_solve() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let a = q(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve_unique(&a, &[int(3), int(1), int(4)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve_unique(&a, &[int(3), int(1), int(5)]).is_none());
    }

    #[test]
    fn bareiss_matches_expansion() {
        let n = ["x", "y"];
        let p = |s: &str| parse_poly(s, &n).unwrap();
        let m = vec![
            vec![p("x"), p("y"), p("1")],
            vec![p("x^2"), p("x*y + 1"), p("y")],
            vec![p("0"), p("x"), p("x - y")],
        ];
        // cofactor expansion along the first column
        let minor = |a: &Poly, b: &Poly, c: &Poly, d: &Poly| &(a * d) - &(b * c);
        let expect = &(&m[0][0] * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            - &(&m[1][0] * &minor(&m[0][1], &m[0][2], &m[2][1], &m[2][2]));
        assert_eq!(det_poly(&m).unwrap(), expect);
        assert_eq!(rank_poly(&m).unwrap(), 3);
    }

    #[test]
    fn symbolic_rank_detects_dependency() {
        let n = ["u"];
        let p = |s: &str| parse_poly(s, &n).unwrap();
        let m = vec![vec![p("1"), p("u"), p("u^2")], vec![p("u"), p("u^2"), p("u^3")], vec![p("0"), p("1"), p("2*u")]];
        assert_eq!(rank_poly(&m).unwrap(), 2);
    }
}
