use polysig::cryptanalysis::{
    linearization_attack, public_scrap_forgery, span_forge, toy_forgery_layout, toy_forgery_params,
    ForgeOutcome, LinearizationOutcome, TOY_REACHABLE_DIMENSION,
};
use polysig::io::{deserialize, serialize, size_metric, Artifact};
use polysig::matrix_sig::{keygen, keygen_with_layout, sign, verify, verify_numeric, MatrixSigParams, RejectReason, Verdict};
use polysig::pke::{decrypt, encrypt, pke_keygen};
use polysig::sampling::DegreeMode;
use polysig::scrap::{apply_word, invert_word, scrap_keygen, scrap_sign, scrap_verify, sign_routes, ScrapParams};
use polysig::{PolyVector, RingParams, RngStream, SparsePoly};

fn small_matrix() -> MatrixSigParams {
    MatrixSigParams {
        ring: RingParams { q: 6, n: 16 },
        k: 4,
        l: 2,
        t: 2,
        degree_mode: DegreeMode::UpTo(2),
        numeric_reps: 16,
    }
}

fn small_scrap() -> ScrapParams {
    ScrapParams {
        ring: RingParams { q: 6, n: 10 },
        k: 5,
        t: 3,
        degree_mode: DegreeMode::UpTo(2),
        rounds: 6,
    }
}

#[test]
fn matrix_sign_verify_and_serialize() {
    for seed in 0..5u8 {
        let (pk, sk) = keygen(&RngStream::new(&[seed], "it"), &small_matrix()).unwrap();
        assert!(sk.l.mul(&pk.m).unwrap().is_identity());
        let sig = sign(&sk, b"integration").unwrap();
        assert_eq!(verify(&pk, b"integration", &sig).unwrap(), Verdict::Accept);
        assert!(!verify(&pk, b"other", &sig).unwrap().is_accept());

        let text = serialize(&Artifact::MatrixSignature(sig.clone()));
        let Artifact::MatrixSignature(back) = deserialize(&text).unwrap() else { panic!() };
        assert_eq!(back, sig);
        let Artifact::MatrixPublic(pk2) = deserialize(&serialize(&Artifact::MatrixPublic(pk.clone()))).unwrap() else {
            panic!()
        };
        assert!(verify(&pk2, b"integration", &back).unwrap().is_accept());
        assert!(size_metric(&sig).bytes > 0);
    }
}

#[test]
fn matrix_rejects_malformed_signatures() {
    let (pk, sk) = keygen(&RngStream::new(b"bad", "it"), &small_matrix()).unwrap();
    let sig = sign(&sk, b"m").unwrap();
    let ring = pk.m.ring();
    let mut short = sig.clone();
    short.v = PolyVector::zeros(ring, pk.m.rows() - 1);
    assert!(matches!(
        verify(&pk, b"m", &short).unwrap(),
        Verdict::Reject(RejectReason::WrongLength { .. })
    ));
    let mut entries = sig.v.clone().into_entries();
    entries[0] = entries[0].add(&SparsePoly::constant(ring, 1)).unwrap();
    let tampered = polysig::matrix_sig::MatrixSignature { v: PolyVector::new(ring, entries).unwrap() };
    assert!(!verify(&pk, b"m", &tampered).unwrap().is_accept());
    let mut rng = RngStream::new(b"pts", "numeric");
    let out = verify_numeric(&pk, b"m", &sig, &mut rng, 8).unwrap();
    assert_eq!((out.verdict, out.rejecting_rounds), (Verdict::Accept, 0));
}

#[test]
fn scrap_routes_agree_and_verify() {
    let params = small_scrap();
    for seed in 0..5u8 {
        let (pk, sk) = scrap_keygen(&RngStream::new(&[seed], "scrap-it"), &params).unwrap();
        let w = sk.forward.clone().unwrap();
        for i in 1..=params.ring.n {
            let x = SparsePoly::var(params.ring, i).unwrap();
            assert_eq!(apply_word(&invert_word(&w), &apply_word(&w, &x).unwrap()).unwrap(), x);
        }
        let (a, b) = sign_routes(&sk, &pk, b"hello").unwrap();
        assert_eq!(a, b);
        let sig = scrap_sign(&sk, &pk, b"hello").unwrap();
        assert!(scrap_verify(&pk, b"hello", &sig).unwrap().is_accept());
        assert!(!scrap_verify(&pk, b"bye", &sig).unwrap().is_accept());
        // anyone holding the public key produces the same signature
        assert_eq!(public_scrap_forgery(&pk, b"hello").unwrap(), sig);
    }
}

#[test]
fn pke_round_trips() {
    let pair = pke_keygen(&RngStream::new(b"pke", "it"), &small_matrix()).unwrap();
    for len in [0usize, 1, 5, pair.public.capacity()] {
        let m: Vec<u8> = (0..len).map(|i| (i * 31 + 7) as u8).collect();
        let c = encrypt(&pair.public, &m).unwrap();
        let text = serialize(&Artifact::Ciphertext(c));
        let Artifact::Ciphertext(c) = deserialize(&text).unwrap() else { panic!() };
        assert_eq!(decrypt(&pair.private, &c).unwrap(), m);
    }
}

#[test]
fn toy_span_forgery_verifies() {
    let (pk, sk) = keygen_with_layout(&RngStream::new(b"it", "toy"), &toy_forgery_params(), toy_forgery_layout()).unwrap();
    let mut calls = 0;
    let out = span_forge(
        &pk,
        |m| {
            calls += 1;
            sign(&sk, m)
        },
        b"an unqueried message",
        TOY_REACHABLE_DIMENSION + 10,
    )
    .unwrap();
    let ForgeOutcome::Forged { signature, queries, .. } = out else { panic!("{out:?}") };
    assert_eq!(queries, calls);
    assert!(verify(&pk, b"an unqueried message", &signature).unwrap().is_accept());
}

#[test]
fn linearization_on_a_toy_key() {
    let params = MatrixSigParams {
        ring: RingParams { q: 6, n: 2 },
        k: 2,
        l: 1,
        t: 1,
        degree_mode: DegreeMode::UpTo(1),
        numeric_reps: 4,
    };
    for seed in 0..5u8 {
        let (pk, _) = keygen(&RngStream::new(&[seed], "lin-it"), &params).unwrap();
        match linearization_attack(&pk, 2, 10_000).unwrap() {
            LinearizationOutcome::Recovered { inverse, .. } => assert!(inverse.mul(&pk.m).unwrap().is_identity()),
            LinearizationOutcome::NoSolution { .. } => {
                // a degree-2 inverse need not exist; a higher degree must then be tried
                assert!(matches!(
                    linearization_attack(&pk, 6, 10_000).unwrap(),
                    LinearizationOutcome::Recovered { .. }
                ));
            }
            other => panic!("{other:?}"),
        }
    }
}
