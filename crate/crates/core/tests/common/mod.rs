//! Brute-force reference for the total complex, sharing nothing with the
//! library beyond the stored structure constants.
//!
//! Generators are numbered by algebra index: `0..n` are `X_i`, `n..2n` are
//! `ω̄^i`. Elements map sorted generator lists to complex rationals. `∂̄` is
//! extended by the derivation rule and the bracket by the Leibniz rule,
//! recursively; ranks come from dense Gaussian elimination.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use nilpoisson::lie_algebra::AlgebraSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C(pub BigRational, pub BigRational);

impl C {
    pub fn zero() -> Self {
        C(BigRational::zero(), BigRational::zero())
    }
    pub fn one() -> Self {
        C(BigRational::one(), BigRational::zero())
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
    pub fn add(&self, o: &C) -> C {
        C(&self.0 + &o.0, &self.1 + &o.1)
    }
    pub fn neg(&self) -> C {
        C(-&self.0, -&self.1)
    }
    pub fn mul(&self, o: &C) -> C {
        C(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    pub fn conj(&self) -> C {
        C(self.0.clone(), -&self.1)
    }
    pub fn inv(&self) -> C {
        let d = &self.0 * &self.0 + &self.1 * &self.1;
        C(&self.0 / &d, -&self.1 / &d)
    }
}

pub type Elem = BTreeMap<Vec<usize>, C>;

fn add_term(e: &mut Elem, key: Vec<usize>, c: C) {
    if c.is_zero() {
        return;
    }
    let sum = e.get(&key).map_or(c.clone(), |old| old.add(&c));
    if sum.is_zero() {
        e.remove(&key);
    } else {
        e.insert(key, sum);
    }
}

fn add_elem(e: &mut Elem, o: &Elem, scale: &C) {
    for (k, c) in o {
        add_term(e, k.clone(), c.mul(scale));
    }
}

/// Sorts a generator word, returning `None` on a repeated generator and the
/// permutation parity otherwise.
fn normalize(mut word: Vec<usize>) -> Option<(bool, Vec<usize>)> {
    let mut odd = false;
    for i in 0..word.len() {
        for j in 0..word.len() - 1 - i {
            if word[j] > word[j + 1] {
                word.swap(j, j + 1);
                odd = !odd;
            } else if word[j] == word[j + 1] {
                return None;
            }
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((odd, word))
}

pub fn wedge(a: &Elem, b: &Elem) -> Elem {
    let mut out = Elem::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let word: Vec<usize> = ka.iter().chain(kb).copied().collect();
            if let Some((odd, key)) = normalize(word) {
                let c = ca.mul(cb);
                add_term(&mut out, key, if odd { c.neg() } else { c });
            }
        }
    }
    out
}

pub fn single(word: Vec<usize>) -> Elem {
    let mut e = Elem::new();
    if let Some((odd, key)) = normalize(word) {
        add_term(&mut e, key, if odd { C::one().neg() } else { C::one() });
    }
    e
}

pub struct Oracle {
    pub n: usize,
    a: BTreeMap<(usize, usize, usize), C>,
}

impl Oracle {
    pub fn new(spec: &AlgebraSpec) -> Self {
        let a = spec
            .constants()
            .map(|(&key, v)| (key, C(v.re().clone(), v.im().clone())))
            .collect();
        Oracle { n: spec.n(), a }
    }

    fn a(&self, k: usize, j: usize, m: usize) -> C {
        self.a.get(&(k, j, m)).cloned().unwrap_or_else(C::zero)
    }

    fn dbar_generator(&self, g: usize) -> Elem {
        let n = self.n;
        let mut out = Elem::new();
        if g >= n {
            return out;
        }
        for k in 0..n {
            for m in 0..n {
                let c = self.a(k, g, m);
                if !c.is_zero() {
                    add_elem(&mut out, &single(vec![n + k, m]), &c);
                }
            }
        }
        out
    }

    fn dbar_word(&self, word: &[usize]) -> Elem {
        let Some((&g, rest)) = word.split_first() else {
            return Elem::new();
        };
        let rest_e = single(rest.to_vec());
        let mut out = wedge(&self.dbar_generator(g), &rest_e);
        let tail = wedge(&single(vec![g]), &self.dbar_word(rest));
        add_elem(&mut out, &tail, &C::one().neg());
        out
    }

    pub fn dbar(&self, x: &Elem) -> Elem {
        let mut out = Elem::new();
        for (k, c) in x {
            add_elem(&mut out, &self.dbar_word(k), c);
        }
        out
    }

    fn bracket_generators(&self, p: usize, r: usize) -> Elem {
        let n = self.n;
        let (v, f, flip) = match (p < n, r < n) {
            (true, false) => (p, r - n, false),
            (false, true) => (r, p - n, true),
            _ => return Elem::new(),
        };
        let mut out = Elem::new();
        for b in 0..n {
            let c = self.a(v, b, f).conj().neg();
            add_elem(&mut out, &single(vec![n + b]), &if flip { c.neg() } else { c });
        }
        out
    }

    fn bracket_words(&self, a: &[usize], b: &[usize]) -> Elem {
        if a.is_empty() || b.is_empty() {
            return Elem::new();
        }
        if b.len() >= 2 {
            let (g, rest) = (b[0], &b[1..]);
            let mut out = wedge(&self.bracket_words(a, &[g]), &single(rest.to_vec()));
            let second = wedge(&single(vec![g]), &self.bracket_words(a, rest));
            let sign = if (a.len() - 1) % 2 == 1 {
                C::one().neg()
            } else {
                C::one()
            };
            add_elem(&mut out, &second, &sign);
            return out;
        }
        if a.len() >= 2 {
            let mut out = Elem::new();
            add_elem(&mut out, &self.bracket_words(b, a), &C::one().neg());
            return out;
        }
        self.bracket_generators(a[0], b[0])
    }

    pub fn bracket(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::new();
        for (ka, ca) in x {
            for (kb, cb) in y {
                add_elem(&mut out, &self.bracket_words(ka, kb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn basis(&self, deg: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, end: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..end {
                cur.push(i);
                rec(i + 1, end, k - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, 2 * self.n, deg, &mut Vec::new(), &mut out);
        out
    }

    /// Dense matrix of `x ↦ ∂̄x + [Λ, x]` from degree `deg` to `deg + 1`.
    pub fn total_matrix(&self, lambda: &Elem, deg: usize) -> Vec<Vec<C>> {
        let src = self.basis(deg);
        let tgt = self.basis(deg + 1);
        let index: BTreeMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut m = vec![vec![C::zero(); src.len()]; tgt.len()];
        for (col, word) in src.iter().enumerate() {
            let x = single(word.clone());
            let mut image = self.dbar(&x);
            add_elem(&mut image, &self.bracket(lambda, &x), &C::one());
            for (k, c) in image {
                m[index[&k]][col] = c;
            }
        }
        m
    }

    /// `dim H^d` of the total complex for `d ≤ max`.
    pub fn total_cohomology(&self, lambda: &Elem, max: usize) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=max)
            .map(|d| {
                if d >= 2 * self.n {
                    0
                } else {
                    dense_rank(self.total_matrix(lambda, d))
                }
            })
            .collect();
        (0..=max)
            .map(|d| self.basis(d).len() - ranks[d] - if d == 0 { 0 } else { ranks[d - 1] })
            .collect()
    }

    /// `V ∧ T` for algebra indices `v`, `t`.
    pub fn v_wedge_t(&self, v: usize, t: usize) -> Elem {
        single(vec![v, t])
    }
}

pub fn dense_rank(mut m: Vec<Vec<C>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        let pivot: Vec<C> = m[r].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.add(&y.mul(&f).neg());
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}
