use rustc_hash::FxHashMap;

use super::monomial::{Factors, Monomial};
use super::{RingParams, SparsePoly};

/// Exponents of `x1..x64` packed into `W` words with `W` bits per exponent,
/// lowest variable in the low bits of word 0. Multiplying monomials is then
/// word-wise addition, valid while no exponent sum overflows its field.
type Key<const W: usize> = [u64; W];

/// Variables that packed keys can hold.
const PACKED_VARS: u16 = 64;

/// Moduli up to this size multiply through a lookup table.
const SMALL_Q: u64 = 16;

/// Products per slice in [`sum_of_products`]; sized so the live table stays
/// near the L2 cache.
const SLICE_WORK: usize = 1 << 18;
const MAX_SLICES: usize = 1 << 14;

const fn max_exp<const W: usize>() -> u32 {
    (1 << W) - 1
}

fn pack<const W: usize>(m: &Monomial) -> Option<Key<W>> {
    let per_word = 64 / W;
    let mut out = [0u64; W];
    for &(v, e) in m.factors() {
        if e > max_exp::<W>() || v > PACKED_VARS {
            return None;
        }
        let idx = v as usize - 1;
        out[idx / per_word] |= (e as u64) << ((idx % per_word) * W);
    }
    Some(out)
}

/// Calls `f(variable, exponent)` for every nonzero field, in variable order.
#[inline]
fn for_each_field<const W: usize>(k: &Key<W>, mut f: impl FnMut(usize, u64)) {
    let per_word = 64 / W;
    let mask = (1u64 << W) - 1;
    for (w, &word) in k.iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let slot = rest.trailing_zeros() as usize / W;
            f(w * per_word + slot + 1, (rest >> (slot * W)) & mask);
            rest &= !(mask << (slot * W));
        }
    }
}

fn unpack<const W: usize>(k: &Key<W>) -> Monomial {
    let mut factors = Factors::new();
    let mut degree = 0;
    for_each_field(k, |v, e| {
        factors.push((v as u16, e as u32));
        degree += e as u32;
    });
    Monomial::from_factors_unchecked(factors, degree)
}

#[inline]
fn add_keys<const W: usize>(a: &Key<W>, b: &Key<W>) -> Key<W> {
    let mut out = [0u64; W];
    for i in 0..W {
        out[i] = a[i] + b[i];
    }
    out
}

fn max_exponent(p: &SparsePoly) -> u32 {
    p.terms().iter().map(|(m, _)| m.max_exponent()).max().unwrap_or(0)
}

fn pack_terms<const W: usize>(p: &SparsePoly, coef: u64, q: u64) -> Vec<(Key<W>, u64)> {
    p.terms()
        .iter()
        .map(|(m, c)| (pack(m).expect("exponents checked"), c * coef % q))
        .filter(|&(_, c)| c != 0)
        .collect()
}

fn mul_table(q: u64) -> Option<Vec<u64>> {
    (q <= SMALL_Q).then(|| (0..q * q).map(|i| (i / q) * (i % q) % q).collect())
}

/// Adds every product of `pa` and `pb` into `map`. Callers guarantee the
/// exponent sums fit the key width.
fn add_products<const W: usize>(
    map: &mut FxHashMap<Key<W>, u64>,
    pa: &[(Key<W>, u64)],
    pb: &[(Key<W>, u64)],
    q: u64,
    table: Option<&[u64]>,
) {
    for (ka, ca) in pa {
        for (kb, cb) in pb {
            let c = match table {
                Some(t) => t[(ca * q + cb) as usize],
                None => ca * cb % q,
            };
            if c == 0 {
                continue;
            }
            let slot = map.entry(add_keys(ka, kb)).or_insert(0);
            let s = *slot + c;
            *slot = if s >= q { s - q } else { s };
        }
    }
}

fn drain_terms<const W: usize>(
    map: &mut FxHashMap<Key<W>, u64>,
    out: &mut Vec<(Monomial, u64)>,
) {
    out.extend(
        map.drain()
            .filter(|&(_, c)| c != 0)
            .map(|(k, c)| (unpack(&k), c)),
    );
}

enum Store {
    /// Rings with at most 64 variables while every exponent fits a byte.
    Packed(FxHashMap<Key<8>, u64>),
    Pairs(FxHashMap<Monomial, u64>),
}

/// Sums many terms and products; `finish` yields the canonical polynomial.
pub(crate) struct Accumulator {
    ring: RingParams,
    store: Store,
}

impl Accumulator {
    pub(crate) fn new(ring: RingParams) -> Self {
        let store = if ring.n <= PACKED_VARS {
            Store::Packed(FxHashMap::default())
        } else {
            Store::Pairs(FxHashMap::default())
        };
        Accumulator { ring, store }
    }

    fn switch_to_pairs(&mut self) {
        if let Store::Packed(map) = &mut self.store {
            let pairs = std::mem::take(map)
                .into_iter()
                .map(|(k, c)| (unpack(&k), c))
                .collect();
            self.store = Store::Pairs(pairs);
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u64) {
        let q = self.ring.q;
        if let Store::Packed(map) = &mut self.store {
            if let Some(k) = pack(&m) {
                let slot = map.entry(k).or_insert(0);
                *slot = (*slot + c) % q;
                return;
            }
            self.switch_to_pairs();
        }
        if let Store::Pairs(map) = &mut self.store {
            let slot = map.entry(m).or_insert(0);
            *slot = (*slot + c) % q;
        }
    }

    pub(crate) fn add_poly(&mut self, p: &SparsePoly, coef: u64) {
        let q = self.ring.q;
        for (m, c) in p.terms() {
            let c = c * coef % q;
            if c != 0 {
                self.add_term(m.clone(), c);
            }
        }
    }

    /// Adds `coef * a * b`.
    pub(crate) fn add_product(&mut self, a: &SparsePoly, b: &SparsePoly, coef: u64) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let q = self.ring.q;
        let coef = coef % q;
        if let Store::Packed(map) = &mut self.store {
            if max_exponent(a) + max_exponent(b) <= max_exp::<8>() {
                let pa = pack_terms::<8>(a, coef, q);
                let pb = pack_terms::<8>(b, 1, q);
                add_products(map, &pa, &pb, q, mul_table(q).as_deref());
                return;
            }
            self.switch_to_pairs();
        }
        for (ma, ca) in a.terms() {
            let ca = ca * coef % q;
            if ca == 0 {
                continue;
            }
            for (mb, cb) in b.terms() {
                let c = ca * cb % q;
                if c != 0 {
                    self.add_term(ma.mul(mb), c);
                }
            }
        }
    }

    pub(crate) fn finish(self) -> SparsePoly {
        let mut terms: Vec<(Monomial, u64)> = Vec::new();
        match self.store {
            Store::Packed(mut map) => drain_terms(&mut map, &mut terms),
            Store::Pairs(map) => terms.extend(map.into_iter().filter(|&(_, c)| c != 0)),
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        SparsePoly::from_sorted_unchecked(self.ring, terms)
    }
}

/// Fixed pseudo-random weight of a variable for the slicing grade.
fn grade_weight(v: usize) -> u64 {
    let mut z = (v as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `sum w(v)*e_v`. Additive under monomial multiplication modulo any power
/// of two.
fn grade<const W: usize>(k: &Key<W>) -> u64 {
    let mut g = 0u64;
    for_each_field(k, |v, e| g = g.wrapping_add(grade_weight(v).wrapping_mul(e)));
    g
}

/// Terms of one polynomial grouped by grade class, stored flat.
struct Buckets<const W: usize> {
    terms: Vec<(Key<W>, u64)>,
    /// Class `g` is `terms[start[g]..start[g + 1]]`.
    start: Vec<u32>,
    nonempty: Vec<u32>,
}

impl<const W: usize> Buckets<W> {
    fn new(p: &SparsePoly, q: u64, slices: usize) -> Self {
        let mask = slices as u64 - 1;
        let mut graded: Vec<(u32, (Key<W>, u64))> = pack_terms::<W>(p, 1, q)
            .into_iter()
            .map(|t| ((grade(&t.0) & mask) as u32, t))
            .collect();
        graded.sort_unstable_by_key(|&(g, _)| g);
        let mut start = vec![0u32; slices + 1];
        for &(g, _) in &graded {
            start[g as usize + 1] += 1;
        }
        for g in 0..slices {
            start[g + 1] += start[g];
        }
        let nonempty = (0..slices as u32)
            .filter(|&g| start[g as usize] < start[g as usize + 1])
            .collect();
        Buckets {
            terms: graded.into_iter().map(|(_, t)| t).collect(),
            start,
            nonempty,
        }
    }

    #[inline]
    fn class(&self, g: usize) -> &[(Key<W>, u64)] {
        &self.terms[self.start[g] as usize..self.start[g + 1] as usize]
    }
}

/// `sum_i a_i * b_i`.
///
/// Large sums are computed in slices: output monomials are partitioned by a
/// grade that is additive under multiplication, so every product lands in a
/// known slice and no product is formed twice. Peak memory then follows the
/// slice size instead of the number of distinct intermediate monomials,
/// which matters when most of the sum cancels.
pub(crate) fn sum_of_products(ring: RingParams, pairs: &[(&SparsePoly, &SparsePoly)]) -> SparsePoly {
    sum_of_products_sliced(ring, pairs, SLICE_WORK)
}

fn sum_of_products_sliced(
    ring: RingParams,
    pairs: &[(&SparsePoly, &SparsePoly)],
    slice_work: usize,
) -> SparsePoly {
    let pairs: Vec<_> = pairs
        .iter()
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .collect();
    let widest = pairs
        .iter()
        .map(|(a, b)| max_exponent(a) + max_exponent(b))
        .max()
        .unwrap_or(0);
    if ring.n <= PACKED_VARS && widest <= max_exp::<4>() {
        sliced::<4>(ring, &pairs, slice_work)
    } else if ring.n <= PACKED_VARS && widest <= max_exp::<8>() {
        sliced::<8>(ring, &pairs, slice_work)
    } else {
        let mut acc = Accumulator::new(ring);
        for (a, b) in pairs {
            acc.add_product(a, b, 1);
        }
        acc.finish()
    }
}

fn sliced<const W: usize>(
    ring: RingParams,
    pairs: &[&(&SparsePoly, &SparsePoly)],
    slice_work: usize,
) -> SparsePoly {
    let q = ring.q;
    let work: usize = pairs.iter().map(|(a, b)| a.sparsity() * b.sparsity()).sum();
    let slices = work.div_ceil(slice_work).next_power_of_two().min(MAX_SLICES);
    let mask = slices - 1;
    let table = mul_table(q);
    let buckets: Vec<(Buckets<W>, Buckets<W>)> = pairs
        .iter()
        .map(|(a, b)| (Buckets::new(a, q, slices), Buckets::new(b, q, slices)))
        .collect();
    let mut map: FxHashMap<Key<W>, u64> = FxHashMap::default();
    let mut terms = Vec::new();
    for s in 0..slices {
        for (ba, bb) in &buckets {
            // walk whichever side has fewer occupied classes
            let (outer, inner, swapped) = if ba.nonempty.len() <= bb.nonempty.len() {
                (ba, bb, false)
            } else {
                (bb, ba, true)
            };
            for &g in &outer.nonempty {
                let other = inner.class(s.wrapping_sub(g as usize) & mask);
                if other.is_empty() {
                    continue;
                }
                let mine = outer.class(g as usize);
                let (pa, pb) = if swapped { (other, mine) } else { (mine, other) };
                add_products(&mut map, pa, pb, q, table.as_deref());
            }
        }
        drain_terms(&mut map, &mut terms);
    }
    terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    SparsePoly::from_sorted_unchecked(ring, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip() {
        let m = Monomial::from_pairs([(1, 3), (9, 1), (64, 255)]);
        assert_eq!(unpack(&pack::<8>(&m).unwrap()), m);
        assert!(pack::<8>(&Monomial::pow(2, 256)).is_none());
        assert_eq!(unpack(&[0u64; 8]), Monomial::one());
        let m = Monomial::from_pairs([(1, 15), (17, 2), (64, 1)]);
        assert_eq!(unpack(&pack::<4>(&m).unwrap()), m);
        assert!(pack::<4>(&Monomial::pow(3, 16)).is_none());
    }

    #[test]
    fn grade_is_additive() {
        let a = pack::<4>(&Monomial::from_pairs([(1, 2), (7, 1), (64, 3)])).unwrap();
        let b = pack::<4>(&Monomial::from_pairs([(7, 4), (30, 1)])).unwrap();
        assert_eq!(grade(&add_keys(&a, &b)), grade(&a).wrapping_add(grade(&b)));
    }

    #[test]
    fn sliced_sum_matches_direct() {
        let ring = RingParams::new(6, 8).unwrap();
        // (1 + x1 + ... + x8)^3 has 165 terms; squaring it is 27225 products
        let mut s = SparsePoly::one(ring);
        for v in 1..=8 {
            s = s.add(&SparsePoly::var(ring, v).unwrap()).unwrap();
        }
        let cube = s.pow(3);
        let other = cube.add(&SparsePoly::var(ring, 2).unwrap()).unwrap();
        let pairs = [(&cube, &other), (&other, &s)];
        let mut acc = Accumulator::new(ring);
        for (a, b) in pairs {
            acc.add_product(a, b, 1);
        }
        let direct = acc.finish();
        for slice_work in [1usize << 14, 1 << 10, 100] {
            assert_eq!(sum_of_products_sliced(ring, &pairs, slice_work), direct);
        }
        // exponents past 15 take the byte-wide keys
        let big = SparsePoly::term(ring, Monomial::pow(1, 20), 5)
            .unwrap()
            .add(&s)
            .unwrap();
        let mut acc = Accumulator::new(ring);
        acc.add_product(&big, &cube, 1);
        assert_eq!(sum_of_products_sliced(ring, &[(&big, &cube)], 1000), acc.finish());
        assert_eq!(sum_of_products(ring, &pairs), direct);
    }

    #[test]
    fn overflow_falls_back_to_pairs() {
        let ring = RingParams::new(6, 2).unwrap();
        let p = SparsePoly::term(ring, Monomial::pow(1, 200), 1).unwrap();
        let mut acc = Accumulator::new(ring);
        acc.add_product(&p, &p, 1);
        acc.add_term(Monomial::var(2), 1);
        let r = acc.finish();
        assert_eq!(r.terms()[0].0, Monomial::pow(1, 400));
        assert_eq!(r.sparsity(), 2);
    }
}
