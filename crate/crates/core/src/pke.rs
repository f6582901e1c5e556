//! Public-key encryption from the same key material as the matrix
//! signatures, with the roles swapped: `L` (`l x k`) is public and `M`
//! (`k x l`) is private. A message is encoded as a vector `U`, encrypted as
//! `V = U * L` and decrypted as `V * M = U`.
//!
//! Encryption is deterministic and carries no security claim; it exists to
//! exercise the construction.

use crate::error::{Error, Result};
use crate::hash_encode::{decode_message, encode_message, message_capacity};
use crate::linalg::{PolyMatrix, PolyVector};
use crate::matrix_sig::{generate_pair, MatrixSigParams};
use crate::sampling::RngStream;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkePublicKey {
    pub l: PolyMatrix,
    pub params: MatrixSigParams,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkePrivateKey {
    pub m: PolyMatrix,
    pub params: MatrixSigParams,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PkeKeyPair {
    pub public: PkePublicKey,
    pub private: PkePrivateKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub v: PolyVector,
    /// Plaintext length in bytes, as declared by the sender.
    pub message_len: usize,
}

/// Same construction as signature keys; `l == k` is allowed and gives
/// `L = M^-1`.
pub fn pke_keygen(rng: &RngStream, params: &MatrixSigParams) -> Result<PkeKeyPair> {
    params.validate_dims()?;
    let (public, private) = generate_pair(rng, params)?;
    Ok(PkeKeyPair {
        public: PkePublicKey {
            l: private.l,
            params: *params,
        },
        private: PkePrivateKey {
            m: public.m,
            params: *params,
        },
    })
}

impl PkePublicKey {
    /// Largest plaintext in bytes.
    pub fn capacity(&self) -> usize {
        message_capacity(self.params.l, self.params.ring.n)
    }
}

pub fn encrypt(key: &PkePublicKey, m: &[u8]) -> Result<Ciphertext> {
    let u = encode_message(m, key.params.l, key.params.ring)?;
    Ok(Ciphertext {
        v: u.vector.mul_matrix(&key.l)?,
        message_len: m.len(),
    })
}

pub fn decrypt(key: &PkePrivateKey, c: &Ciphertext) -> Result<Vec<u8>> {
    if c.v.len() != key.m.rows() {
        return Err(Error::Decryption(format!(
            "ciphertext has {} components, key expects {}",
            c.v.len(),
            key.m.rows()
        )));
    }
    if c.v.ring() != key.m.ring() {
        return Err(Error::Decryption("ciphertext ring differs from key ring".into()));
    }
    let bytes = decode_message(&c.v.mul_matrix(&key.m)?)?;
    if bytes.len() != c.message_len {
        return Err(Error::Decryption(format!(
            "decoded {} bytes, ciphertext declares {}",
            bytes.len(),
            c.message_len
        )));
    }
    Ok(bytes)
}
