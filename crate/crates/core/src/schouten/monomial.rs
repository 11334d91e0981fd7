use std::cmp::Ordering;

/// Maximum number of generators of L (vectors plus forms).
pub const MAX_GENERATORS: usize = 64;

/// A canonical exterior monomial `T_P ∧ ω̄_Q`, stored as a bitmask over
/// generator positions: positions `0..n` are the vectors, `n..2n` the
/// forms, so ascending bit order is the canonical wedge order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    mask: u64,
    n: u8,
}

impl Monomial {
    pub fn new(mask: u64, n: usize) -> Self {
        debug_assert!(2 * n <= MAX_GENERATORS);
        debug_assert!(n == 32 || mask >> (2 * n) == 0);
        Monomial { mask, n: n as u8 }
    }

    pub fn one(n: usize) -> Self {
        Monomial::new(0, n)
    }

    pub fn generator(position: usize, n: usize) -> Self {
        Monomial::new(1u64 << position, n)
    }

    /// Builds `T_P ∧ ω̄_Q` from vector and form positions (each in `0..n`).
    pub fn from_parts(vectors: &[usize], forms: &[usize], n: usize) -> Self {
        let mut mask = 0u64;
        for &v in vectors {
            mask |= 1 << v;
        }
        for &f in forms {
            mask |= 1 << (n + f);
        }
        Monomial::new(mask, n)
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    fn vector_mask(self) -> u64 {
        if self.n == 0 {
            0
        } else {
            self.mask & ((1u64 << self.n) - 1)
        }
    }

    fn form_mask(self) -> u64 {
        self.mask >> self.n
    }

    pub fn degree(self) -> usize {
        self.mask.count_ones() as usize
    }

    /// `(|P|, |Q|)`.
    pub fn bidegree(self) -> (usize, usize) {
        (
            self.vector_mask().count_ones() as usize,
            self.form_mask().count_ones() as usize,
        )
    }

    pub fn contains(self, position: usize) -> bool {
        self.mask >> position & 1 == 1
    }

    /// Vector positions `P`, ascending.
    pub fn vec_indices(self) -> Vec<usize> {
        bits(self.vector_mask()).collect()
    }

    /// Form positions `Q` (relative to the forms block), ascending.
    pub fn form_indices(self) -> Vec<usize> {
        bits(self.form_mask()).collect()
    }

    /// All generator positions in canonical order.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        bits(self.mask)
    }

    pub fn without(self, position: usize) -> Self {
        Monomial::new(self.mask & !(1u64 << position), self.n())
    }

    /// Number of generators strictly before `position`.
    pub fn rank_of(self, position: usize) -> usize {
        (self.mask & ((1u64 << position) - 1)).count_ones() as usize
    }

    /// `self ∧ other` as `(sign, monomial)`, or `None` when a generator
    /// repeats.
    pub fn wedge(self, other: Monomial) -> Option<(bool, Monomial)> {
        if self.mask & other.mask != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        for j in bits(other.mask) {
            inversions += (self.mask >> j).count_ones();
        }
        Some((inversions % 2 == 1, Monomial::new(self.mask | other.mask, self.n())))
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Lexicographic order of the ascending position lists of two sets of the
/// same size.
fn lex(a: u64, b: u64) -> Ordering {
    let d = a ^ b;
    if d == 0 {
        Ordering::Equal
    } else if a >> d.trailing_zeros() & 1 == 1 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Ord for Monomial {
    /// Total degree, then vector count, then the vector positions
    /// lexicographically, then the form positions.
    fn cmp(&self, other: &Self) -> Ordering {
        let (p1, q1) = self.bidegree();
        let (p2, q2) = other.bidegree();
        (p1 + q1)
            .cmp(&(p2 + q2))
            .then(p1.cmp(&p2))
            .then_with(|| lex(self.vector_mask(), other.vector_mask()))
            .then_with(|| lex(self.form_mask(), other.form_mask()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `k`-subsets of `0..n` as bitmasks, in lexicographic order of their
/// ascending element lists.
pub fn subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<u64>) {
        if current.len() == k {
            out.push(current.iter().fold(0u64, |m, &i| m | 1 << i));
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

/// The canonical basis of `B^{p,q}`, in [`Monomial`] order.
pub fn block_monomials(n: usize, p: usize, q: usize) -> Vec<Monomial> {
    let vecs = subsets(n, p);
    let forms = subsets(n, q);
    let mut out = Vec::with_capacity(vecs.len() * forms.len());
    for &v in &vecs {
        for &f in &forms {
            out.push(Monomial::new(v | f << n, n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        let n = 3;
        let t1 = Monomial::generator(0, n);
        let w1 = Monomial::generator(n, n);
        assert_eq!(t1.wedge(t1), None);
        // ω̄¹ ∧ T₁ = −T₁ ∧ ω̄¹
        assert_eq!(w1.wedge(t1), Some((true, Monomial::from_parts(&[0], &[0], n))));
        assert_eq!(t1.wedge(w1), Some((false, Monomial::from_parts(&[0], &[0], n))));
        // (V ∧ T₁) ∧ ω̄² with V at position 2: V∧T₁ = −T₁∧V
        let v = Monomial::generator(2, n);
        let (s, vt) = v.wedge(t1).unwrap();
        assert!(s);
        let (s2, m) = vt.wedge(Monomial::generator(n + 1, n)).unwrap();
        assert!(!s2);
        assert_eq!(m, Monomial::from_parts(&[0, 2], &[1], n));
    }

    #[test]
    fn block_sizes_and_order() {
        let b = block_monomials(4, 2, 1);
        assert_eq!(b.len(), 6 * 4);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.iter().all(|m| m.bidegree() == (2, 1)));
        assert_eq!(b[0].vec_indices(), vec![0, 1]);
        assert_eq!(b[0].form_indices(), vec![0]);
    }

    #[test]
    fn subsets_lexicographic() {
        assert_eq!(subsets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets(2, 0), vec![0]);
        assert!(subsets(2, 3).is_empty());
    }
}
