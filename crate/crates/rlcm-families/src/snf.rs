//! Smith normal form over the integers with unimodular transforms.

use rlcm_core::{Result, SemigroupError};

pub type Mat = Vec<Vec<i128>>;

fn overflow() -> SemigroupError {
    SemigroupError::Overflow("integer matrix arithmetic")
}

fn mul_add(acc: i128, a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b)
        .and_then(|p| acc.checked_add(p))
        .ok_or_else(overflow)
}

pub fn identity(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let d = a.len();
    let mut out = vec![vec![0i128; d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0i128;
            for k in 0..d {
                s = mul_add(s, a[i][k], b[k][j])?;
            }
            out[i][j] = s;
        }
    }
    Ok(out)
}

pub fn mat_vec(a: &Mat, v: &[i128]) -> Result<Vec<i128>> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .try_fold(0i128, |s, (x, y)| mul_add(s, *x, *y))
        })
        .collect()
}

/// Determinant by fraction-free elimination.
pub fn det(a: &Mat) -> Result<i128> {
    let d = a.len();
    if d == 0 {
        return Ok(1);
    }
    let mut m = a.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d - 1 {
        if m[k][k] == 0 {
            match (k + 1..d).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let x = m[i][j].checked_mul(m[k][k]).ok_or_else(overflow)?;
                let y = m[i][k].checked_mul(m[k][j]).ok_or_else(overflow)?;
                m[i][j] = x.checked_sub(y).ok_or_else(overflow)? / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[d - 1][d - 1])
}

/// Coefficients `c_0, .., c_d` of `det(x I - A)`, lowest first, for `d <= 3`.
pub fn char_poly(a: &Mat) -> Result<Option<Vec<i128>>> {
    let d = a.len();
    let tr = (0..d).map(|i| a[i][i]).sum::<i128>();
    Ok(match d {
        1 => Some(vec![-a[0][0], 1]),
        2 => Some(vec![det(a)?, -tr, 1]),
        3 => {
            let minor = |i: usize, j: usize| a[i][i] * a[j][j] - a[i][j] * a[j][i];
            let m2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
            Some(vec![-det(a)?, m2, -tr, 1])
        }
        _ => None,
    })
}

/// `L * M * R = diag(delta)` with `L`, `R` unimodular and `delta` positive,
/// each entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub l: Mat,
    pub l_inv: Mat,
    pub r: Mat,
    pub delta: Vec<i128>,
}

impl Snf {
    pub fn new(m: &Mat) -> Result<Snf> {
        let d = m.len();
        let mut a = m.clone();
        let mut l = identity(d);
        let mut l_inv = identity(d);
        let mut r = identity(d);

        for t in 0..d {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..d {
                    for j in t..d {
                        if a[i][j] != 0
                            && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return Err(SemigroupError::Precondition(
                        "singular matrix has no full-rank normal form".into(),
                    ));
                };
                if pi != t {
                    a.swap(pi, t);
                    l.swap(pi, t);
                    for row in l_inv.iter_mut() {
                        row.swap(pi, t);
                    }
                }
                if pj != t {
                    for row in a.iter_mut() {
                        row.swap(pj, t);
                    }
                    for row in r.iter_mut() {
                        row.swap(pj, t);
                    }
                }
                let p = a[t][t];
                let mut dirty = false;
                for i in t + 1..d {
                    let q = a[i][t] / p;
                    if q != 0 {
                        for j in 0..d {
                            a[i][j] = mul_add(a[i][j], -q, a[t][j])?;
                            l[i][j] = mul_add(l[i][j], -q, l[t][j])?;
                            l_inv[j][t] = mul_add(l_inv[j][t], q, l_inv[j][i])?;
                        }
                    }
                    dirty |= a[i][t] != 0;
                }
                for j in t + 1..d {
                    let q = a[t][j] / p;
                    if q != 0 {
                        for i in 0..d {
                            a[i][j] = mul_add(a[i][j], -q, a[i][t])?;
                            r[i][j] = mul_add(r[i][j], -q, r[i][t])?;
                        }
                    }
                    dirty |= a[t][j] != 0;
                }
                if dirty {
                    continue;
                }
                let bad = (t + 1..d).find(|&i| (t + 1..d).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in 0..d {
                            a[t][j] = a[t][j].checked_add(a[i][j]).ok_or_else(overflow)?;
                            l[t][j] = l[t][j].checked_add(l[i][j]).ok_or_else(overflow)?;
                            l_inv[j][i] =
                                l_inv[j][i].checked_sub(l_inv[j][t]).ok_or_else(overflow)?;
                        }
                    }
                    None => break,
                }
            }
            if a[t][t] < 0 {
                for i in 0..d {
                    a[i][t] = -a[i][t];
                    r[i][t] = -r[i][t];
                }
            }
        }
        Ok(Snf {
            l,
            l_inv,
            r,
            delta: (0..d).map(|i| a[i][i]).collect(),
        })
    }

    /// Index of the image lattice, `prod(delta)`.
    pub fn index(&self) -> Result<i128> {
        self.delta
            .iter()
            .try_fold(1i128, |acc, x| acc.checked_mul(*x).ok_or_else(overflow))
    }

    /// Least-nonnegative representative of `v` modulo the image lattice.
    pub fn reduce(&self, v: &[i128]) -> Result<Vec<i128>> {
        let lv = mat_vec(&self.l, v)?;
        let red: Vec<i128> = lv
            .iter()
            .zip(&self.delta)
            .map(|(x, d)| x.rem_euclid(*d))
            .collect();
        mat_vec(&self.l_inv, &red)
    }

    /// `M^{-1} v` when `v` lies in the image lattice.
    pub fn solve(&self, v: &[i128]) -> Result<Option<Vec<i128>>> {
        let lv = mat_vec(&self.l, v)?;
        if lv.iter().zip(&self.delta).any(|(x, d)| x % d != 0) {
            return Ok(None);
        }
        let scaled: Vec<i128> = lv.iter().zip(&self.delta).map(|(x, d)| x / d).collect();
        mat_vec(&self.r, &scaled).map(Some)
    }

    /// The digit set `{L^{-1} v : 0 <= v_i < delta_i}` in lexicographic order of `v`.
    pub fn digits(&self) -> Result<Vec<Vec<i128>>> {
        let mut vs: Vec<Vec<i128>> = vec![Vec::new()];
        for &d in &self.delta {
            let mut next = Vec::new();
            for v in &vs {
                for x in 0..d {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            vs = next;
        }
        vs.iter().map(|v| mat_vec(&self.l_inv, v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: Mat) {
        let s = Snf::new(&m).unwrap();
        let prod = mat_mul(&mat_mul(&s.l, &m).unwrap(), &s.r).unwrap();
        let d = m.len();
        for i in 0..d {
            for j in 0..d {
                assert_eq!(prod[i][j], if i == j { s.delta[i] } else { 0 }, "{m:?}");
            }
        }
        assert_eq!(mat_mul(&s.l, &s.l_inv).unwrap(), identity(d));
        assert!(s.delta.iter().all(|x| *x > 0));
        assert!(s.delta.windows(2).all(|w| w[1] % w[0] == 0));
        assert_eq!(s.index().unwrap(), det(&m).unwrap().abs());
    }

    #[test]
    fn normal_forms_of_small_matrices() {
        check(vec![vec![2]]);
        check(vec![vec![-3]]);
        check(vec![vec![1, 1], vec![-1, 1]]);
        check(vec![vec![2, 4], vec![6, 8]]);
        check(vec![vec![0, 2], vec![3, 0]]);
        check(vec![vec![2, 1, 0], vec![0, 2, 1], vec![1, 0, 2]]);
        check(vec![vec![4, 6, 9], vec![10, 15, 22], vec![1, 3, 7]]);
    }

    #[test]
    fn one_dimensional_transform_is_trivial_on_the_left() {
        let s = Snf::new(&vec![vec![-4]]).unwrap();
        assert_eq!(s.l, identity(1));
        assert_eq!(s.delta, vec![4]);
        assert_eq!(s.reduce(&[-1]).unwrap(), vec![3]);
        assert_eq!(s.solve(&[8]).unwrap(), Some(vec![-2]));
    }

    #[test]
    fn char_poly_matches_determinant() {
        let a = vec![vec![2, 1, 0], vec![0, 2, 1], vec![1, 0, 2]];
        let c = char_poly(&a).unwrap().unwrap();
        assert_eq!(c[0], -det(&a).unwrap());
        assert_eq!(c[2], -6);
    }
}
