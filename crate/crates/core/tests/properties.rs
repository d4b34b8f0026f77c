mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use tisparse::format::{parse_instance, write_instance};
use tisparse::models::{Boundary, LatticeGeometry, ModelParams, ModelSpec};
use tisparse::numerics::{compare, encoded_len, Digit, FixedPrecisionReal};
use tisparse::reduction::sparsify::{audit_certificate, replay};
use tisparse::reduction::instance::gap_floor;
use tisparse::reduction::{sparsify, ProblemInstance, Verdict};

fn digit() -> impl Strategy<Value = Digit> {
    prop_oneof![Just(Digit::NegOne), Just(Digit::Zero), Just(Digit::One)]
}

/// Digit strings narrow enough for the `i128` oracle below.
fn fpr_strategy(max_int: usize, max_frac: usize) -> impl Strategy<Value = FixedPrecisionReal> {
    (
        prop::collection::vec(digit(), 0..=max_int),
        prop::collection::vec(digit(), 0..=max_frac),
    )
        .prop_map(|(i, f)| FixedPrecisionReal::new(i, f))
}

/// `x · 2^scale` summed digit by digit in machine integers.
fn scaled(x: &FixedPrecisionReal, scale: usize) -> i128 {
    let mut v = 0i128;
    for (i, d) in x.int_digits().iter().enumerate() {
        v += d.to_i8() as i128 * (1i128 << (i + scale));
    }
    for (i, d) in x.frac_digits().iter().enumerate() {
        v += d.to_i8() as i128 * (1i128 << (scale - 1 - i));
    }
    v
}

fn non_adjacent(x: &FixedPrecisionReal) -> bool {
    let all: Vec<i8> = x
        .frac_digits()
        .iter()
        .rev()
        .chain(x.int_digits())
        .map(|d| d.to_i8())
        .collect();
    all.windows(2).all(|w| w[0] == 0 || w[1] == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn compare_agrees_with_integer_oracle(x in fpr_strategy(40, 40), y in fpr_strategy(40, 40)) {
        prop_assert_eq!(compare(&x, &y), scaled(&x, 40).cmp(&scaled(&y, 40)));
        prop_assert_eq!(compare(&x, &x), Ordering::Equal);
        prop_assert_eq!(compare(&x, &y), compare(&y, &x).reverse());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn truncation_error_is_below_one_ulp(x in fpr_strategy(20, 60), width in 0usize..64) {
        let t = x.truncate_fraction(width);
        let err = (scaled(&x, 60) - scaled(&t, 60)).abs();
        prop_assert!(err < 1i128 << (60 - width.min(60)));
        prop_assert!(t.frac_width() <= width);
        prop_assert_eq!(t.int_digits(), x.int_digits());
    }

    #[test]
    fn canonical_form_is_unique_and_minimal(x in fpr_strategy(30, 30)) {
        let c = x.canonicalize();
        prop_assert_eq!(scaled(&c, 40), scaled(&x, 40));
        prop_assert!(non_adjacent(&c));
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(c.int_width() <= x.int_width() + 1);
        prop_assert!(c.frac_width() <= x.frac_width());
        // The negation of a canonical string is canonical.
        prop_assert_eq!(x.negate().canonicalize(), c.negate());
    }

    #[test]
    fn equal_values_share_a_canonical_form(x in fpr_strategy(12, 12), y in fpr_strategy(12, 12)) {
        let same = scaled(&x, 12) == scaled(&y, 12);
        prop_assert_eq!(same, x.canonicalize() == y.canonicalize());
    }

    #[test]
    fn wire_encoding_round_trips(x in fpr_strategy(200, 200)) {
        let bytes = x.encode().unwrap();
        prop_assert_eq!(bytes.len(), 4 + (2 * (x.int_width() + x.frac_width())).div_ceil(8));
        prop_assert_eq!(bytes.len(), encoded_len(x.int_width(), x.frac_width()));
        prop_assert_eq!(FixedPrecisionReal::decode(&bytes).unwrap(), x.clone());
        prop_assert_eq!(FixedPrecisionReal::from_hex(&x.to_hex().unwrap()).unwrap(), x);
    }

    #[test]
    fn truncated_bytes_are_rejected(x in fpr_strategy(20, 20), cut in 1usize..4) {
        let bytes = x.encode().unwrap();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(FixedPrecisionReal::decode(&bytes[..keep]).is_err());
    }
}

fn instance_strategy() -> impl Strategy<Value = ProblemInstance> {
    (2usize..=4, 1u32..=4, any::<u64>(), -30i64..30, 1i64..200).prop_map(|(n, c, seed, centre, width)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let j = dyadic_near(&mut rng, 0.5 + (seed % 1000) as f64 / 1000.0, 64);
        let alpha = dyadic_near(&mut rng, centre as f64 / 4.0, 64);
        let beta = dyadic_near(&mut rng, centre as f64 / 4.0 + width as f64 / 64.0, 64);
        ProblemInstance {
            model: ModelSpec {
                geometry: LatticeGeometry::square(n, Boundary::Open).unwrap(),
                params: ModelParams::Heisenberg { coupling: j },
            },
            alpha,
            beta,
            gap_exponent: c,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reduction_preserves_the_gap_promise(inst in instance_strategy()) {
        prop_assume!(inst.validate().is_ok());
        let sparse = sparsify(&inst).unwrap();
        let out = &sparse.instance;
        prop_assert!(out.gap() > gap_floor(out.side(), out.gap_exponent));
        for cert in &sparse.chain {
            prop_assert!(audit_certificate(cert, inst.side(), 2).is_empty());
            if cert.verdict == Verdict::Reduced {
                prop_assert!(cert.alpha_out.value() >= cert.alpha_in.value());
                prop_assert!(cert.beta_out.value() <= cert.beta_in.value());
            }
        }
        let replayed = replay(&inst, &sparse.chain).unwrap();
        prop_assert_eq!(replayed.last().unwrap(), out);
        // Sparsifying a fully reduced output changes nothing.
        if !sparse.exempt() && sparse.outcome == tisparse::reduction::Outcome::Reduced {
            prop_assert_eq!(&sparsify(out).unwrap().instance, out);
        }
    }

    #[test]
    fn instance_text_round_trips(inst in instance_strategy()) {
        let text = write_instance(&inst).unwrap();
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed, &inst);
        prop_assert_eq!(write_instance(&parsed).unwrap(), text);
    }
}
