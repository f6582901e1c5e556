//! SHA-512 and the deterministic conversions from digests (and messages) to
//! polynomials.
//!
//! Bits are always read most-significant-first from the digest bytes. For
//! the default layout with `l = 5` the 512 digest bits split as
//!
//! ```text
//! | 300 bits: fifty 6-bit variable images | 5 x 40 bits: monomial blocks | 12 bits: coefficients |
//! ```
//!
//! Smaller `l` keeps the first two regions and widens the trailing
//! discarded region; coefficients always come from its last 12 bits.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha512};

use crate::error::{Error, Result};
use crate::linalg::PolyVector;
use crate::poly::{Monomial, RingParams, SparsePoly, Var};

pub const DIGEST_BITS: usize = 512;
const COEFF_BITS: usize = 3;

/// A 512-bit message digest.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Digest(pub [u8; 64]);

impl Digest {
    /// `len <= 64` bits starting at bit `offset`, most-significant-first.
    pub fn bits(&self, offset: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && offset + len <= DIGEST_BITS);
        (offset..offset + len).fold(0u64, |acc, i| {
            let bit = (self.0[i / 8] >> (7 - i % 8)) & 1;
            (acc << 1) | bit as u64
        })
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::parse("digest", e.to_string()))?;
        let arr: [u8; 64] = bytes
            .try_into()
            .map_err(|_| Error::parse("digest", "expected 64 bytes"))?;
        Ok(Digest(arr))
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

pub fn hash_message(m: &[u8]) -> Digest {
    let mut out = [0u8; 64];
    out.copy_from_slice(&Sha512::digest(m));
    Digest(out)
}

/// Bit layout for turning a digest into `l` sparse polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashVectorParams {
    pub l: usize,
    pub n: u16,
    pub discard: usize,
    pub map_src: usize,
    pub map_bits: usize,
    pub block_bits: usize,
    pub sub_block: usize,
    pub monomials_per_poly: usize,
}

impl HashVectorParams {
    /// The default layout: fifty 6-bit images, 40-bit blocks of four 10-bit
    /// monomials, with the unused tail discarded. Needs `1 <= l <= 5`.
    pub fn standard(l: usize, n: u16) -> Result<Self> {
        if l == 0 || l * 40 > 200 {
            return Err(Error::domain(format!(
                "standard hash layout supports 1..=5 polynomials, got {l}"
            )));
        }
        let p = HashVectorParams {
            l,
            n,
            discard: DIGEST_BITS - 300 - 40 * l,
            map_src: 50,
            map_bits: 6,
            block_bits: 40,
            sub_block: 10,
            monomials_per_poly: 4,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::domain(format!("invalid hash layout: {msg}")));
        if self.l == 0 || self.n == 0 {
            return bad("l and n must be positive".into());
        }
        if self.discard + self.map_src * self.map_bits + self.l * self.block_bits != DIGEST_BITS {
            return bad(format!(
                "{} + {}*{} + {}*{} != {DIGEST_BITS}",
                self.discard, self.map_src, self.map_bits, self.l, self.block_bits
            ));
        }
        if self.monomials_per_poly == 0 || self.block_bits != self.monomials_per_poly * self.sub_block {
            return bad("block_bits must equal monomials_per_poly * sub_block".into());
        }
        if self.map_src < self.block_bits {
            return bad("fewer mapped variables than bit positions in a block".into());
        }
        if self.discard < COEFF_BITS * self.monomials_per_poly {
            return bad("discarded region too small for the coefficients".into());
        }
        if self.map_bits == 0 || self.map_bits > 16 || self.sub_block > 64 {
            return bad("field widths out of range".into());
        }
        Ok(())
    }

    fn map_offset(&self) -> usize {
        0
    }

    fn blocks_offset(&self) -> usize {
        self.map_src * self.map_bits
    }

    fn coeff_offset(&self) -> usize {
        DIGEST_BITS - COEFF_BITS * self.monomials_per_poly
    }
}

/// Variable picked by a `map_bits`-wide value: `v -> x_v`, with `0 -> x_n`
/// and values above `n` wrapping around.
fn value_to_var(v: u64, n: u16) -> Var {
    if v == 0 {
        n
    } else {
        ((v - 1) % n as u64) as Var + 1
    }
}

/// The images `x_{i_1}, ..., x_{i_map_src}` selected by the first region.
pub fn map_variables(d: &Digest, p: &HashVectorParams) -> Vec<Var> {
    (0..p.map_src)
        .map(|i| value_to_var(d.bits(p.map_offset() + i * p.map_bits, p.map_bits), p.n))
        .collect()
}

/// Product of `vars[j]` over the 1-bits `j` of a `width`-bit field,
/// leftmost bit first.
pub fn bits_to_monomial(bits: u64, width: usize, vars: &[Var]) -> Monomial {
    Monomial::from_pairs(
        (0..width)
            .filter(|j| (bits >> (width - 1 - j)) & 1 == 1)
            .map(|j| (vars[j], 1)),
    )
}

/// The four coefficients from the trailing 12 bits, each reduced mod 6.
pub fn digest_coefficients(d: &Digest, count: usize) -> Vec<i64> {
    let start = DIGEST_BITS - COEFF_BITS * count;
    (0..count)
        .map(|i| (d.bits(start + COEFF_BITS * i, COEFF_BITS) % 6) as i64)
        .collect()
}

/// Converts a digest into `l` sparse polynomials of low degree.
pub fn digest_to_vector(d: &Digest, p: &HashVectorParams, ring: RingParams) -> Result<PolyVector> {
    p.validate()?;
    if ring.n != p.n {
        return Err(Error::domain(format!(
            "hash layout is for {} variables, ring has {}",
            p.n, ring.n
        )));
    }
    let mapped = map_variables(d, p);
    let coeffs = digest_coefficients(d, p.monomials_per_poly);
    debug_assert_eq!(p.coeff_offset(), DIGEST_BITS - 3 * coeffs.len());
    let mut polys = Vec::with_capacity(p.l);
    for b in 0..p.l {
        let block = p.blocks_offset() + b * p.block_bits;
        let terms = (0..p.monomials_per_poly).map(|s| {
            let bits = d.bits(block + s * p.sub_block, p.sub_block);
            let vars = &mapped[s * p.sub_block..(s + 1) * p.sub_block];
            (bits_to_monomial(bits, p.sub_block, vars), coeffs[s])
        });
        polys.push(SparsePoly::canonicalize(terms.collect::<Vec<_>>(), ring)?);
    }
    PolyVector::new(ring, polys)
}

/// Converts a digest into a sparse polynomial in the published variables
/// `published` (the `y`-variables, stored under their own indices). Uses the
/// same regions as [`digest_to_vector`]: 6-bit groups pick a published index
/// (reduced mod `k`), 10-bit sub-blocks build up to four monomials, and the
/// trailing 12 bits give the coefficients.
pub fn digest_to_scrap_poly(
    d: &Digest,
    ring: RingParams,
    published: &[Var],
    t: usize,
) -> Result<SparsePoly> {
    if published.is_empty() {
        return Err(Error::domain("no published variables"));
    }
    if t == 0 || t > 4 {
        return Err(Error::domain(format!("scrap hash supports 1..=4 monomials, got {t}")));
    }
    for &v in published {
        ring.check_var(v)?;
    }
    let k = published.len() as u64;
    let mapped: Vec<Var> = (0..50)
        .map(|i| published[(d.bits(i * 6, 6) % k) as usize])
        .collect();
    let coeffs = digest_coefficients(d, 4);
    let terms: Vec<(Monomial, i64)> = (0..t)
        .map(|s| {
            let bits = d.bits(300 + s * 10, 10);
            (bits_to_monomial(bits, 10, &mapped[s * 10..(s + 1) * 10]), coeffs[s])
        })
        .collect();
    SparsePoly::canonicalize(terms, ring)
}

/// Base-6 digits used for the length prefix; `6^13 > 2^32`.
const LEN_DIGITS: usize = 13;
const DIGITS_PER_BYTE: usize = 4;

/// A message encoded as `l` polynomials whose coefficients are base-6
/// digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedMessage {
    pub byte_len: usize,
    pub vector: PolyVector,
}

/// Monomials of degree `<= 2` in `n` variables, in the public enumeration
/// order `1, x1..xn, x1^2, x1x2, .., x1xn, x2^2, ..`.
fn slots_per_poly(n: u16) -> usize {
    let n = n as usize;
    1 + n + n * (n + 1) / 2
}

fn slot_monomial(slot: usize, n: u16) -> Monomial {
    let nn = n as usize;
    if slot == 0 {
        return Monomial::one();
    }
    if slot <= nn {
        return Monomial::var(slot as Var);
    }
    let mut rest = slot - 1 - nn;
    for i in 1..=nn {
        let row = nn - i + 1;
        if rest < row {
            return Monomial::from_pairs([(i as Var, 1), ((i + rest) as Var, 1)]);
        }
        rest -= row;
    }
    unreachable!("slot {slot} beyond enumeration")
}

fn monomial_slot(m: &Monomial, n: u16) -> Option<usize> {
    let nn = n as usize;
    match m.factors() {
        [] => Some(0),
        [(v, 1)] => Some(*v as usize),
        [(v, 2)] => Some(pair_slot(*v as usize, *v as usize, nn)),
        [(a, 1), (b, 1)] => Some(pair_slot(*a as usize, *b as usize, nn)),
        _ => None,
    }
}

fn pair_slot(i: usize, j: usize, n: usize) -> usize {
    // rows 1..i-1 hold n, n-1, .. entries
    let before: usize = (1..i).map(|a| n - a + 1).sum();
    1 + n + before + (j - i)
}

/// Largest message (in bytes) that fits in `l` polynomials over `n`
/// variables.
pub fn message_capacity(l: usize, n: u16) -> usize {
    (l * slots_per_poly(n)).saturating_sub(LEN_DIGITS) / DIGITS_PER_BYTE
}

/// Length prefix then 4 base-6 digits per byte; digit `p` becomes the
/// coefficient of slot `p / l` in polynomial `p % l`.
pub fn encode_message(m: &[u8], l: usize, ring: RingParams) -> Result<EncodedMessage> {
    if l == 0 {
        return Err(Error::domain("need at least one polynomial"));
    }
    if ring.q < 6 {
        return Err(Error::domain("message encoding needs q >= 6"));
    }
    let cap = message_capacity(l, ring.n);
    if m.len() > cap {
        return Err(Error::domain(format!(
            "message of {} bytes exceeds capacity {cap}",
            m.len()
        )));
    }
    let mut digits = Vec::with_capacity(LEN_DIGITS + DIGITS_PER_BYTE * m.len());
    push_digits(&mut digits, m.len() as u64, LEN_DIGITS);
    for &b in m {
        push_digits(&mut digits, b as u64, DIGITS_PER_BYTE);
    }
    let mut terms: Vec<Vec<(Monomial, i64)>> = vec![Vec::new(); l];
    for (p, &digit) in digits.iter().enumerate() {
        if digit != 0 {
            terms[p % l].push((slot_monomial(p / l, ring.n), digit as i64));
        }
    }
    let polys = terms
        .into_iter()
        .map(|t| SparsePoly::canonicalize(t, ring))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedMessage {
        byte_len: m.len(),
        vector: PolyVector::new(ring, polys)?,
    })
}

fn push_digits(out: &mut Vec<u8>, mut value: u64, width: usize) {
    let start = out.len();
    out.resize(start + width, 0);
    for i in (0..width).rev() {
        out[start + i] = (value % 6) as u8;
        value /= 6;
    }
}

/// Inverse of [`encode_message`]. Rejects any vector that is not exactly
/// the encoding of some message.
pub fn decode_message(u: &PolyVector) -> Result<Vec<u8>> {
    let l = u.len();
    let ring = u.ring();
    if l == 0 {
        return Err(Error::Decryption("empty vector".into()));
    }
    let per_poly = slots_per_poly(ring.n);
    let mut digits = vec![0u8; l * per_poly];
    for (i, poly) in u.entries().iter().enumerate() {
        for (m, c) in poly.terms() {
            let slot = monomial_slot(m, ring.n).ok_or_else(|| {
                Error::Decryption(format!("monomial {m} outside the encoding alphabet"))
            })?;
            if *c >= 6 {
                return Err(Error::Decryption(format!("coefficient {c} is not a base-6 digit")));
            }
            digits[slot * l + i] = *c as u8;
        }
    }
    let read = |from: usize, width: usize| {
        digits[from..from + width]
            .iter()
            .fold(0u64, |acc, &d| acc * 6 + d as u64)
    };
    let len = read(0, LEN_DIGITS) as usize;
    let cap = message_capacity(l, ring.n);
    if len > cap {
        return Err(Error::Decryption(format!("length field {len} exceeds capacity {cap}")));
    }
    let data_end = LEN_DIGITS + DIGITS_PER_BYTE * len;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let v = read(LEN_DIGITS + DIGITS_PER_BYTE * i, DIGITS_PER_BYTE);
        if v > 255 {
            return Err(Error::Decryption(format!("digit group {i} encodes {v} > 255")));
        }
        out.push(v as u8);
    }
    if digits[data_end..].iter().any(|&d| d != 0) {
        return Err(Error::Decryption("nonzero digits after the message".into()));
    }
    Ok(out)
}

impl EncodedMessage {
    pub fn decode(&self) -> Result<Vec<u8>> {
        let bytes = decode_message(&self.vector)?;
        if bytes.len() != self.byte_len {
            return Err(Error::Decryption("length field disagrees with declared length".into()));
        }
        Ok(bytes)
    }
}
