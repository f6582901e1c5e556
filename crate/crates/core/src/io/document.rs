//! Canonical JSON documents for keys, signatures and ciphertexts.
//!
//! Every document is an object with sorted keys and no whitespace:
//!
//! ```text
//! {"format":"polysig","params":{..},"payload":{..},"role":"public","scheme":"matrix-sig","version":1}
//! ```
//!
//! A polynomial is its term list in canonical order, each term
//! `[coefficient, [[var, exp], ..]]`. Matrices are `{"cols","entries","rows"}`
//! with `entries` row-major as nested arrays. Parsing rejects anything that
//! would not be reproduced byte for byte by serialization.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hash_encode::HashVectorParams;
use crate::linalg::{ElementaryFactor, FactoredInvertible, Permutation, PolyMatrix, PolyVector};
use crate::matrix_sig::{MatrixPrivateKey, MatrixPublicKey, MatrixSigParams, MatrixSignature};
use crate::pke::{Ciphertext, PkePrivateKey, PkePublicKey};
use crate::poly::{Monomial, RingParams, SparsePoly, Var};
use crate::scrap::{AutoWord, ElementaryAuto, ScrapParams, ScrapPrivateKey, ScrapPublicKey, ScrapSignature};

pub const FORMAT: &str = "polysig";
pub const VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    MatrixPublic(MatrixPublicKey),
    MatrixPrivate(MatrixPrivateKey),
    MatrixSignature(MatrixSignature),
    ScrapPublic(ScrapPublicKey),
    ScrapPrivate(ScrapPrivateKey),
    ScrapSignature(ScrapSignature),
    PkePublic(PkePublicKey),
    PkePrivate(PkePrivateKey),
    Ciphertext(Ciphertext),
}

impl Artifact {
    pub fn scheme(&self) -> &'static str {
        match self {
            Artifact::MatrixPublic(_) | Artifact::MatrixPrivate(_) | Artifact::MatrixSignature(_) => {
                "matrix-sig"
            }
            Artifact::ScrapPublic(_) | Artifact::ScrapPrivate(_) | Artifact::ScrapSignature(_) => {
                "scrap-auto"
            }
            Artifact::PkePublic(_) | Artifact::PkePrivate(_) | Artifact::Ciphertext(_) => "pke",
        }
    }

    pub fn role(&self) -> &'static str {
        match self {
            Artifact::MatrixPublic(_) | Artifact::ScrapPublic(_) | Artifact::PkePublic(_) => "public",
            Artifact::MatrixPrivate(_) | Artifact::ScrapPrivate(_) | Artifact::PkePrivate(_) => {
                "private"
            }
            Artifact::MatrixSignature(_) | Artifact::ScrapSignature(_) => "signature",
            Artifact::Ciphertext(_) => "ciphertext",
        }
    }
}

// ---------------------------------------------------------------- encoding

pub fn poly_to_json(p: &SparsePoly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!([c, m.factors().iter().map(|&(v, e)| json!([v, e])).collect::<Vec<_>>()]))
            .collect(),
    )
}

fn vector_to_json(v: &PolyVector) -> Value {
    Value::Array(v.entries().iter().map(poly_to_json).collect())
}

fn matrix_to_json(m: &PolyMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array(m.row(r).iter().map(poly_to_json).collect()))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": rows})
}

fn factors_to_json(f: &FactoredInvertible) -> Value {
    let list = |fs: &[ElementaryFactor]| -> Value {
        fs.iter()
            .map(|f| json!({"row": f.row, "col": f.col, "entry": poly_to_json(&f.entry)}))
            .collect()
    };
    json!({
        "dim": f.dim(),
        "upper": list(f.upper()),
        "p1": f.p1().images(),
        "lower": list(f.lower()),
        "p2": f.p2().images(),
    })
}

fn word_to_json(w: &AutoWord) -> Value {
    w.elements()
        .iter()
        .map(|e| match e {
            ElementaryAuto::TriangularSub { target, h } => {
                json!({"kind": "triangular", "target": target, "h": poly_to_json(h)})
            }
            ElementaryAuto::VarPermutation { perm } => json!({"kind": "permutation", "perm": perm}),
        })
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("parameter blocks serialize")
}

fn matrix_params(p: &MatrixSigParams, layout: &HashVectorParams) -> Value {
    let mut v = to_value(p);
    v.as_object_mut()
        .expect("struct")
        .insert("layout".into(), to_value(layout));
    v
}

fn ring_params(r: RingParams) -> Value {
    json!({"ring": to_value(&r)})
}

pub fn to_document(a: &Artifact) -> Value {
    let (params, payload) = match a {
        Artifact::MatrixPublic(k) => (matrix_params(&k.params, &k.layout), json!({"m": matrix_to_json(&k.m)})),
        Artifact::MatrixPrivate(k) => (
            matrix_params(&k.params, &k.layout),
            json!({
                "l": matrix_to_json(&k.l),
                "removed": k.removed,
                "factors": k.factors.as_ref().map(factors_to_json),
            }),
        ),
        Artifact::MatrixSignature(s) => (ring_params(s.v.ring()), json!({"v": vector_to_json(&s.v)})),
        Artifact::ScrapPublic(k) => (
            to_value(&k.params),
            json!({
                "indices": k.indices,
                "images": k.images.iter().map(poly_to_json).collect::<Vec<_>>(),
            }),
        ),
        Artifact::ScrapPrivate(k) => (
            to_value(&k.params),
            json!({
                "inverse": word_to_json(&k.inverse),
                "forward": k.forward.as_ref().map(word_to_json),
            }),
        ),
        Artifact::ScrapSignature(s) => (ring_params(s.s.ring()), json!({"s": poly_to_json(&s.s)})),
        Artifact::PkePublic(k) => (to_value(&k.params), json!({"l": matrix_to_json(&k.l)})),
        Artifact::PkePrivate(k) => (to_value(&k.params), json!({"m": matrix_to_json(&k.m)})),
        Artifact::Ciphertext(c) => (
            ring_params(c.v.ring()),
            json!({"v": vector_to_json(&c.v), "message_len": c.message_len}),
        ),
    };
    json!({
        "format": FORMAT,
        "version": VERSION,
        "scheme": a.scheme(),
        "role": a.role(),
        "params": params,
        "payload": payload,
    })
}

/// Canonical serialized form.
pub fn serialize(a: &Artifact) -> String {
    serde_json::to_string(&to_document(a)).expect("documents serialize")
}

// ---------------------------------------------------------------- decoding

#[derive(Clone, Copy)]
struct At<'a> {
    v: &'a Value,
    path: &'a str,
}

fn err(path: &str, reason: impl Into<String>) -> Error {
    Error::parse(if path.is_empty() { "$" } else { path }, reason)
}

impl<'a> At<'a> {
    fn fail(&self, reason: impl Into<String>) -> Error {
        err(self.path, reason)
    }

    fn obj(&self) -> Result<&'a Map<String, Value>> {
        self.v.as_object().ok_or_else(|| self.fail("expected an object"))
    }

    fn arr(&self) -> Result<&'a Vec<Value>> {
        self.v.as_array().ok_or_else(|| self.fail("expected an array"))
    }

    fn u64(&self) -> Result<u64> {
        self.v.as_u64().ok_or_else(|| self.fail("expected a non-negative integer"))
    }

    fn usize(&self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| self.fail("integer too large"))
    }

    fn var(&self) -> Result<Var> {
        Var::try_from(self.u64()?).map_err(|_| self.fail("variable index too large"))
    }

    fn str(&self) -> Result<&'a str> {
        self.v.as_str().ok_or_else(|| self.fail("expected a string"))
    }
}

/// Runs `f` on a child value, giving it the extended path.
fn with<T>(parent: At<'_>, key: &str, f: impl FnOnce(At<'_>) -> Result<T>) -> Result<T> {
    let path = format!("{}.{key}", if parent.path.is_empty() { "$" } else { parent.path });
    let v = parent
        .obj()?
        .get(key)
        .ok_or_else(|| err(&path, "missing field"))?;
    f(At { v, path: &path })
}

fn each<T>(parent: At<'_>, mut f: impl FnMut(At<'_>) -> Result<T>) -> Result<Vec<T>> {
    parent
        .arr()?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let path = format!("{}[{i}]", parent.path);
            f(At { v, path: &path })
        })
        .collect()
}

fn typed<T: DeserializeOwned>(at: At<'_>) -> Result<T> {
    serde_json::from_value(at.v.clone()).map_err(|e| at.fail(e.to_string()))
}

fn poly_from_json(at: At<'_>, ring: RingParams) -> Result<SparsePoly> {
    let terms = each(at, |term| {
        let parts = term.arr()?;
        if parts.len() != 2 {
            return Err(term.fail("a term is [coefficient, factors]"));
        }
        let c = At { v: &parts[0], path: term.path }.u64()?;
        if c == 0 || c >= ring.q {
            return Err(term.fail(format!("coefficient {c} not in 1..{}", ring.q)));
        }
        let factors = each(At { v: &parts[1], path: term.path }, |f| {
            let pair = f.arr()?;
            if pair.len() != 2 {
                return Err(f.fail("a factor is [var, exp]"));
            }
            let v = At { v: &pair[0], path: f.path }.var()?;
            let e = At { v: &pair[1], path: f.path }.u64()?;
            ring.check_var(v).map_err(|e| f.fail(e.to_string()))?;
            let e = u32::try_from(e).map_err(|_| f.fail("exponent too large"))?;
            Ok((v, e))
        })?;
        let m = Monomial::from_canonical(&factors).map_err(|e| term.fail(e.to_string()))?;
        Ok((m, c))
    })?;
    for (i, w) in terms.windows(2).enumerate() {
        if w[0].0 >= w[1].0 {
            return Err(err(
                &format!("{}[{}]", at.path, i + 1),
                "terms not in canonical order",
            ));
        }
    }
    SparsePoly::from_canonical_terms(ring, terms).map_err(|e| at.fail(e.to_string()))
}

fn vector_from_json(at: At<'_>, ring: RingParams) -> Result<PolyVector> {
    PolyVector::new(ring, each(at, |p| poly_from_json(p, ring))?).map_err(|e| at.fail(e.to_string()))
}

fn matrix_from_json(at: At<'_>, ring: RingParams) -> Result<PolyMatrix> {
    let rows = with(at, "rows", |a| a.usize())?;
    let cols = with(at, "cols", |a| a.usize())?;
    let entries = with(at, "entries", |e| {
        let rs = each(e, |row| each(row, |p| poly_from_json(p, ring)))?;
        if rs.len() != rows || rs.iter().any(|r| r.len() != cols) {
            return Err(e.fail(format!("entries are not {rows} x {cols}")));
        }
        Ok(rs)
    })?;
    if rows == 0 || cols == 0 {
        return Err(at.fail("matrix dimensions must be positive"));
    }
    PolyMatrix::from_rows(ring, entries).map_err(|e| at.fail(e.to_string()))
}

fn factors_from_json(at: At<'_>, ring: RingParams) -> Result<FactoredInvertible> {
    let dim = with(at, "dim", |a| a.usize())?;
    let list = |key: &str| {
        with(at, key, |l| {
            each(l, |f| {
                Ok(ElementaryFactor {
                    row: with(f, "row", |a| a.usize())?,
                    col: with(f, "col", |a| a.usize())?,
                    entry: with(f, "entry", |a| poly_from_json(a, ring))?,
                })
            })
        })
    };
    let perm = |key: &str| {
        with(at, key, |p| {
            Permutation::new(each(p, |i| i.usize())?).map_err(|e| p.fail(e.to_string()))
        })
    };
    let upper = list("upper")?;
    let lower = list("lower")?;
    let (p1, p2) = (perm("p1")?, perm("p2")?);
    FactoredInvertible::new(ring, dim, upper, p1, lower, p2).map_err(|e| at.fail(e.to_string()))
}

fn word_from_json(at: At<'_>, ring: RingParams) -> Result<AutoWord> {
    let elements = each(at, |e| match with(e, "kind", |k| Ok(k.str()?.to_string()))?.as_str() {
        "triangular" => {
            let target = with(e, "target", |a| a.var())?;
            let h = with(e, "h", |a| poly_from_json(a, ring))?;
            ElementaryAuto::triangular(target, h).map_err(|x| e.fail(x.to_string()))
        }
        "permutation" => {
            let perm = with(e, "perm", |p| each(p, |i| i.var()))?;
            ElementaryAuto::permutation(perm, ring).map_err(|x| e.fail(x.to_string()))
        }
        other => Err(e.fail(format!("unknown element kind {other:?}"))),
    })?;
    AutoWord::new(ring, elements).map_err(|e| at.fail(e.to_string()))
}

fn optional<T>(at: At<'_>, key: &str, f: impl FnOnce(At<'_>) -> Result<T>) -> Result<Option<T>> {
    with(at, key, |a| if a.v.is_null() { Ok(None) } else { f(a).map(Some) })
}

fn matrix_params_from(at: At<'_>) -> Result<(MatrixSigParams, HashVectorParams)> {
    let layout: HashVectorParams = with(at, "layout", typed)?;
    let mut rest = at.obj()?.clone();
    rest.remove("layout");
    let params: MatrixSigParams = typed(At { v: &Value::Object(rest), path: at.path })?;
    params.validate_dims().map_err(|e| at.fail(e.to_string()))?;
    layout.validate().map_err(|e| at.fail(e.to_string()))?;
    Ok((params, layout))
}

fn ring_from(at: At<'_>) -> Result<RingParams> {
    let ring: RingParams = with(at, "ring", typed)?;
    ring.validate().map_err(|e| at.fail(e.to_string()))?;
    Ok(ring)
}

fn scrap_params_from(at: At<'_>) -> Result<ScrapParams> {
    let p: ScrapParams = typed(at)?;
    p.validate().map_err(|e| at.fail(e.to_string()))?;
    Ok(p)
}

fn pke_params_from(at: At<'_>) -> Result<MatrixSigParams> {
    let p: MatrixSigParams = typed(at)?;
    p.validate_dims().map_err(|e| at.fail(e.to_string()))?;
    Ok(p)
}

fn expect_shape(at: At<'_>, m: &PolyMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(at.fail(format!("matrix is {} x {}, parameters need {rows} x {cols}", m.rows(), m.cols())));
    }
    Ok(())
}

pub fn from_document(doc: &Value) -> Result<Artifact> {
    let root = At { v: doc, path: "$" };
    let format = with(root, "format", |a| Ok(a.str()?.to_string()))?;
    if format != FORMAT {
        return Err(err("$.format", format!("unknown format {format:?}")));
    }
    let version = with(root, "version", |a| a.u64())?;
    if version != VERSION {
        return Err(err("$.version", format!("unsupported version {version}")));
    }
    let scheme = with(root, "scheme", |a| Ok(a.str()?.to_string()))?;
    let role = with(root, "role", |a| Ok(a.str()?.to_string()))?;
    let params = |f: &dyn Fn(At<'_>) -> Result<Artifact>| with(root, "params", f);
    match (scheme.as_str(), role.as_str()) {
        ("matrix-sig", "public") => params(&|p| {
            let (params, layout) = matrix_params_from(p)?;
            with(root, "payload", |x| {
                let m = with(x, "m", |a| {
                    let m = matrix_from_json(a, params.ring)?;
                    expect_shape(a, &m, params.k, params.l)?;
                    Ok(m)
                })?;
                Ok(Artifact::MatrixPublic(MatrixPublicKey { m, params, layout }))
            })
        }),
        ("matrix-sig", "private") => params(&|p| {
            let (params, layout) = matrix_params_from(p)?;
            with(root, "payload", |x| {
                let l = with(x, "l", |a| {
                    let l = matrix_from_json(a, params.ring)?;
                    expect_shape(a, &l, params.l, params.k)?;
                    Ok(l)
                })?;
                let removed = with(x, "removed", |r| each(r, |i| i.usize()))?;
                let factors = optional(x, "factors", |f| factors_from_json(f, params.ring))?;
                Ok(Artifact::MatrixPrivate(MatrixPrivateKey {
                    l,
                    params,
                    layout,
                    removed,
                    factors,
                }))
            })
        }),
        ("matrix-sig", "signature") => params(&|p| {
            let ring = ring_from(p)?;
            with(root, "payload", |x| {
                let v = with(x, "v", |a| vector_from_json(a, ring))?;
                Ok(Artifact::MatrixSignature(MatrixSignature { v }))
            })
        }),
        ("scrap-auto", "public") => params(&|p| {
            let params = scrap_params_from(p)?;
            with(root, "payload", |x| {
                let indices = with(x, "indices", |a| {
                    let ix = each(a, |i| i.var())?;
                    if ix.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(a.fail("indices must be strictly increasing"));
                    }
                    for &i in &ix {
                        params.ring.check_var(i).map_err(|e| a.fail(e.to_string()))?;
                    }
                    Ok(ix)
                })?;
                let images = with(x, "images", |a| {
                    let im = each(a, |p| poly_from_json(p, params.ring))?;
                    if im.len() != indices.len() {
                        return Err(a.fail("one image per published index required"));
                    }
                    Ok(im)
                })?;
                Ok(Artifact::ScrapPublic(ScrapPublicKey {
                    indices,
                    images,
                    params,
                }))
            })
        }),
        ("scrap-auto", "private") => params(&|p| {
            let params = scrap_params_from(p)?;
            with(root, "payload", |x| {
                let inverse = with(x, "inverse", |a| word_from_json(a, params.ring))?;
                let forward = optional(x, "forward", |a| word_from_json(a, params.ring))?;
                Ok(Artifact::ScrapPrivate(ScrapPrivateKey {
                    inverse,
                    forward,
                    params,
                }))
            })
        }),
        ("scrap-auto", "signature") => params(&|p| {
            let ring = ring_from(p)?;
            with(root, "payload", |x| {
                let s = with(x, "s", |a| poly_from_json(a, ring))?;
                Ok(Artifact::ScrapSignature(ScrapSignature { s }))
            })
        }),
        ("pke", "public") => params(&|p| {
            let params = pke_params_from(p)?;
            with(root, "payload", |x| {
                let l = with(x, "l", |a| {
                    let l = matrix_from_json(a, params.ring)?;
                    expect_shape(a, &l, params.l, params.k)?;
                    Ok(l)
                })?;
                Ok(Artifact::PkePublic(PkePublicKey { l, params }))
            })
        }),
        ("pke", "private") => params(&|p| {
            let params = pke_params_from(p)?;
            with(root, "payload", |x| {
                let m = with(x, "m", |a| {
                    let m = matrix_from_json(a, params.ring)?;
                    expect_shape(a, &m, params.k, params.l)?;
                    Ok(m)
                })?;
                Ok(Artifact::PkePrivate(PkePrivateKey { m, params }))
            })
        }),
        ("pke", "ciphertext") => params(&|p| {
            let ring = ring_from(p)?;
            with(root, "payload", |x| {
                let v = with(x, "v", |a| vector_from_json(a, ring))?;
                let message_len = with(x, "message_len", |a| a.usize())?;
                Ok(Artifact::Ciphertext(Ciphertext { v, message_len }))
            })
        }),
        (s, r) => Err(err("$", format!("unknown document type {s:?}/{r:?}"))),
    }
}

/// Parses a document and checks that it is in canonical form.
pub fn deserialize(text: &str) -> Result<Artifact> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let artifact = from_document(&doc)?;
    if serialize(&artifact) != text {
        return Err(Error::parse(
            "$",
            "document is not canonical (key order, whitespace or extra fields)",
        ));
    }
    Ok(artifact)
}
