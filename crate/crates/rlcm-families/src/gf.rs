//! Finite fields `GF(q)` and polynomials over them.
//!
//! Elements of `GF(p^k)` are encoded as integers `sum c_i p^i` of their
//! coefficient vectors modulo the least monic irreducible of degree `k`.

pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// `Some((p, k))` when `q = p^k` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, d| acc * p + d)
}

/// Remainder of `a` modulo the monic `m` over `Z/p`.
fn prime_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap_or(&0);
        let shift = r.len() - 1 - dm;
        for (i, c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn monic(k: u32, low: u32, p: u32) -> Vec<u32> {
    let mut c = digits(low, p, k);
    c.push(1);
    c
}

/// The monic irreducible of degree `k` over `Z/p` with the least encoding of
/// its lower coefficients.
pub fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = p.pow(k);
    (0..count)
        .map(|low| monic(k, low, p))
        .find(|f| {
            (1..=k / 2)
                .all(|j| (0..p.pow(j)).all(|low| !prime_rem(f, &monic(j, low, p), p).is_empty()))
        })
        .expect("an irreducible polynomial of every degree exists")
}

impl Field {
    pub fn new(q: u32) -> Option<Field> {
        if q > MAX_ORDER {
            return None;
        }
        let (p, k) = prime_power(q)?;
        let modulus = least_irreducible(p, k);
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for x in 0..q {
            let cx = digits(x, p, k);
            for y in 0..q {
                let cy = digits(y, p, k);
                let sum: Vec<u32> = cx.iter().zip(&cy).map(|(a, b)| (a + b) % p).collect();
                add[(x * q + y) as usize] = encode(&sum, p);
                let mut prod = vec![0u32; (2 * k) as usize];
                for (i, a) in cx.iter().enumerate() {
                    for (j, b) in cy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                while prod.last() == Some(&0) {
                    prod.pop();
                }
                let mut red = prime_rem(&prod, &modulus, p);
                red.resize(k as usize, 0);
                mul[(x * q + y) as usize] = encode(&red, p);
            }
        }
        let neg = (0..q)
            .map(|x| (0..q).find(|y| add[(x * q + y) as usize] == 0).unwrap_or(0))
            .collect();
        let inv = (0..q)
            .map(|x| (1..q).find(|y| mul[(x * q + y) as usize] == 1).unwrap_or(0))
            .collect();
        Some(Field {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + y) as usize]
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg[y as usize])
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[(x * self.q + y) as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    /// An additive basis: the encodings `p^i`.
    pub fn additive_basis(&self) -> Vec<u32> {
        let mut out = vec![1];
        while out.last().is_some_and(|b| b * self.p < self.q) {
            let b = out.last().copied().unwrap_or(1) * self.p;
            out.push(b);
        }
        out
    }
}

/// Polynomials as coefficient vectors, lowest first, without trailing zeros.
pub mod poly {
    use super::Field;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn mul(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(*x, *y));
            }
        }
        trim(out)
    }

    /// `(a div m, a mod m)` for nonzero `m`.
    pub fn divrem(f: &Field, a: &[u32], m: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]);
        let mut r = a.to_vec();
        let mut q = vec![0u32; a.len().saturating_sub(dm)];
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = f.mul(*r.last().unwrap_or(&0), lead_inv);
            q[shift] = c;
            for (i, x) in m.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, *x));
            }
            r.pop();
        }
        (trim(q), trim(r))
    }

    /// Integer value `sum c_i q^i`, the order used for transversals.
    pub fn value(f: &Field, a: &[u32]) -> u128 {
        a.iter()
            .rev()
            .fold(0u128, |acc, c| acc * u128::from(f.order()) + u128::from(*c))
    }

    pub fn from_value(f: &Field, mut v: u128) -> Vec<u32> {
        let q = u128::from(f.order());
        let mut out = Vec::new();
        while v > 0 {
            out.push((v % q) as u32);
            v /= q;
        }
        out
    }
}
