mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use tisparse::format::{parse_document, write_document};
use tisparse::models::{Boundary, CouplingId, LatticeGeometry, ModelParams, ModelSpec, UnitCellSpec};
use tisparse::numerics::FixedPrecisionReal;
use tisparse::reduction::census::{count_for_side, enumerate_field, naf_count, CensusBudget};
use tisparse::reduction::sparsify::{apply_certificate, audit_certificate, replay};
use tisparse::reduction::steps::{
    coupling_int_limit, reduce_fractional_coupling, reduce_fractional_thresholds, reduce_integer_coupling,
    reduce_integer_thresholds, threshold_int_limit,
};
use tisparse::reduction::{sparsify, InstanceError, Outcome, ProblemInstance, ReductionError, Verdict};
use tisparse::reduction::certificate::StepKind;

const J: CouplingId = CouplingId::Key("J");

/// `num / 2^exp` as a canonical digit string.
fn long(num: i128, exp: u32) -> FixedPrecisionReal {
    let v = BigRational::new(BigInt::from(num), BigInt::one() << exp);
    FixedPrecisionReal::from_dyadic(&v).unwrap()
}

fn heisenberg(n: usize, j: FixedPrecisionReal, alpha: FixedPrecisionReal, beta: FixedPrecisionReal, c: u32) -> ProblemInstance {
    ProblemInstance {
        model: ModelSpec {
            geometry: LatticeGeometry::square(n, Boundary::Open).unwrap(),
            params: ModelParams::Heisenberg { coupling: j },
        },
        alpha,
        beta,
        gap_exponent: c,
    }
}

#[test]
fn fractional_coupling_constants_at_n3_c1() {
    // k = 2c + d = 4, L = 4·2 = 8, a = 6, eps = 6·9/81 = 2/3.
    let inst = heisenberg(3, long(0x1_5555_5555, 32), fpr(-20, 1), fpr(-19, 1), 1);
    let out = reduce_fractional_coupling(&inst, J);
    let cert = &out.certificate;
    assert_eq!(cert.k, Some(4));
    assert_eq!(cert.truncation_width, Some(8));
    assert_eq!(cert.norm_constant, Some(rat(6, 1)));
    assert_eq!(cert.epsilon, rat(2, 3));
    // N^c = 3 <= 2a + 1 = 13
    assert_eq!(cert.verdict, Verdict::PassThrough);
    assert_eq!(out.instance, inst);
}

#[test]
fn fractional_coupling_widens_by_dyadic_epsilon() {
    // N = 3, c = 3: k = 8, L = 16, eps = 6·9/3^8 = 2/243, rounded up to 540/2^16.
    let j = long(0x1_2345_6789_abcd, 48);
    let alpha = long(-10 * (1 << 40) - 12345, 40);
    let beta = long(-9 * (1 << 40) + 777, 40);
    let inst = heisenberg(3, j.clone(), alpha.clone(), beta.clone(), 3);
    inst.validate().unwrap();
    let out = reduce_fractional_coupling(&inst, J);
    let cert = &out.certificate;
    assert_eq!(cert.k, Some(8));
    assert_eq!(cert.truncation_width, Some(16));
    assert_eq!(cert.epsilon, rat(2, 243));
    assert_eq!(cert.widen, rat(540, 65536));
    assert_eq!(cert.verdict, Verdict::Reduced);
    assert_eq!(cert.gap_out, 6);
    let j_out = out.instance.model.coupling(J).unwrap();
    assert_eq!(j_out.frac_width(), 16);
    assert!((j.value() - j_out.value()) < rat(1, 65536));
    assert_eq!(out.instance.alpha.value(), alpha.value() + rat(540, 65536));
    assert_eq!(out.instance.beta.value(), beta.value() - rat(540, 65536));
    assert!(audit_certificate(cert, 3, 2).is_empty());
}

#[test]
fn short_coupling_is_an_identity_step() {
    let inst = heisenberg(3, fpr(5, 4), long(-10 * (1 << 40) - 1, 40), fpr(-9, 1), 3);
    let out = reduce_fractional_coupling(&inst, J);
    assert_eq!(out.instance, inst);
    assert_eq!(out.certificate.widen, BigRational::zero());
    assert_eq!(out.certificate.gap_out, 3);
}

#[test]
fn positive_coupling_never_truncates_to_zero() {
    // J = 2^-30 truncates to 0 at L = 16; the step substitutes 2^-16.
    let inst = heisenberg(3, long(1, 30), fpr(-1, 1), fpr(1, 1), 3);
    let out = reduce_fractional_coupling(&inst, J);
    assert_eq!(out.instance.model.coupling(J).unwrap().value(), rat(1, 65536));
}

#[test]
fn integer_coupling_canonicalizes_only_long_strings() {
    let inst = heisenberg(4, fpr(3, 1), fpr(-1, 1), fpr(1, 1), 1);
    assert_eq!(reduce_integer_coupling(&inst, J).instance, inst);
    // 3 as digits [1, 1] followed by zero padding past the limit.
    let limit = coupling_int_limit(&inst);
    let mut digits = vec![1i64, 1];
    digits.resize(limit + 4, 0);
    let padded = FixedPrecisionReal::from_digits(&digits, &[]).unwrap();
    let out = reduce_integer_coupling(&heisenberg(4, padded, fpr(-1, 1), fpr(1, 1), 1), J);
    let j = out.instance.model.coupling(J).unwrap();
    assert!(j.int_width() <= limit);
    assert_eq!(j.value(), rat(3, 1));
}

#[test]
fn integer_thresholds_force_answers() {
    // P = 3·2·4 = 24 for J = 1 on the open 2×2 plaquette.
    let no = reduce_integer_thresholds(&heisenberg(2, fpr(1, 1), fpr(-24, 1), fpr(-23, 1), 1));
    assert_eq!(no.certificate.verdict, Verdict::ForcedNo);
    assert_eq!(no.instance.alpha.value(), rat(-26, 1));
    assert_eq!(no.instance.beta.value(), rat(-25, 1));
    let yes = reduce_integer_thresholds(&heisenberg(2, fpr(1, 1), fpr(23, 1), fpr(24, 1), 1));
    assert_eq!(yes.certificate.verdict, Verdict::ForcedYes);
    assert_eq!(yes.instance.alpha.value(), rat(25, 1));
    assert_eq!(yes.instance.beta.value(), rat(26, 1));
    // The designated instance has unit couplings.
    let big_j = heisenberg(2, fpr(3, 1), fpr(-80, 1), fpr(-72, 1), 1);
    let forced = reduce_integer_thresholds(&big_j);
    assert_eq!(forced.certificate.verdict, Verdict::ForcedNo);
    assert_eq!(forced.instance.model.coupling(J).unwrap().value(), rat(1, 1));
    let inside = heisenberg(2, fpr(1, 1), fpr(-23, 1), fpr(23, 1), 1);
    assert_eq!(reduce_integer_thresholds(&inside).instance, inside);
    assert_eq!(threshold_int_limit(&rat(24, 1)), 6);
}

#[test]
fn fractional_thresholds_move_outward_by_one_ulp() {
    // N = 4, c = 2, long J: the coupling step doubles c to 4, so the
    // threshold step truncates at L = 2·4·2 = 16.
    let alpha = long(-3 * (1 << 50) - 0x1_2345_6789, 50);
    let beta = long(-2 * (1 << 50) + 0x9_8765_4321, 50);
    let inst = heisenberg(4, long(0x1_0000_0000_0001, 48), alpha.clone(), beta.clone(), 2);
    let sparse = sparsify(&inst).unwrap();
    let steps: Vec<_> = sparse.chain.iter().map(|c| c.step).collect();
    assert_eq!(
        steps,
        [StepKind::IntegerCoupling, StepKind::FractionalCoupling, StepKind::IntegerThresholds, StepKind::FractionalThresholds]
    );
    let coupling = &sparse.chain[1];
    assert_eq!(coupling.verdict, Verdict::Reduced);
    assert_eq!(coupling.gap_out, 4);
    let thresholds = &sparse.chain[3];
    assert_eq!(thresholds.truncation_width, Some(16));
    assert_eq!(thresholds.epsilon, rat(1, 65536));
    assert_eq!(thresholds.gap_out, 8);
    let (a_in, b_in) = (thresholds.alpha_in.value(), thresholds.beta_in.value());
    let (a_out, b_out) = (thresholds.alpha_out.value(), thresholds.beta_out.value());
    assert!(a_out >= a_in && a_out - &a_in <= rat(2, 65536));
    assert!(b_out <= b_in && &b_in - b_out.clone() <= rat(2, 65536));
    assert!(sparse.instance.alpha.frac_width() <= 16 && sparse.instance.beta.frac_width() <= 16);
    assert!(!sparse.exempt());
}

#[test]
fn short_thresholds_are_left_alone() {
    let inst = heisenberg(4, fpr(1, 1), fpr(-3, 2), fpr(-1, 1), 2);
    let out = reduce_fractional_thresholds(&inst);
    assert_eq!(out.instance, inst);
    assert_eq!(out.certificate.verdict, Verdict::Reduced);
}

#[test]
fn sparse_input_reduces_to_itself() {
    let inst = heisenberg(4, fpr(3, 4), fpr(-3, 2), fpr(-1, 1), 2);
    let sparse = sparsify(&inst).unwrap();
    assert_eq!(sparse.instance, inst);
    assert_eq!(sparse.outcome, Outcome::Reduced);
    assert!(!sparse.exempt());
}

#[test]
fn forced_outcome_stops_the_chain() {
    let inst = heisenberg(3, long(0x1_2345_6789_abcd, 48), long(-1 << 48, 40), long(-(1 << 48) + (1 << 39), 40), 3);
    let sparse = sparsify(&inst).unwrap();
    assert_eq!(sparse.outcome, Outcome::ForcedNo);
    assert_eq!(sparse.chain.last().unwrap().step, StepKind::IntegerThresholds);
    assert_eq!(sparse.chain.len(), 3);
}

#[test]
fn invalid_instances_are_refused() {
    let neg = heisenberg(3, fpr(-1, 1), fpr(-1, 1), fpr(1, 1), 1);
    assert!(matches!(
        sparsify(&neg),
        Err(ReductionError::Instance(InstanceError::NonPositive { .. }))
    ));
    let narrow = heisenberg(3, fpr(1, 1), fpr(0, 1), fpr(1, 4), 1);
    assert!(matches!(sparsify(&narrow), Err(ReductionError::Instance(InstanceError::Gap { .. }))));
    // |J| < N^4 = 16 at N = 2
    let huge = heisenberg(2, fpr(16, 1), fpr(0, 1), fpr(1, 1), 1);
    assert!(matches!(
        sparsify(&huge),
        Err(ReductionError::Instance(InstanceError::CouplingTooLarge { .. }))
    ));
}

fn model_zoo() -> Vec<ProblemInstance> {
    let g3 = LatticeGeometry::square(3, Boundary::Torus).unwrap();
    let g2 = LatticeGeometry::square(2, Boundary::Open).unwrap();
    let j = long(0x1_9999_9999_9999, 48);
    let k = long(0x3333_3333_3333, 48);
    let alpha = long(-5 * (1 << 44) - 0x1_2345, 44);
    let beta = long(-4 * (1 << 44) + 0x5_4321, 44);
    let model = |geometry, params| ModelSpec { geometry, params };
    let inst = |model, c| ProblemInstance {
        model,
        alpha: alpha.clone(),
        beta: beta.clone(),
        gap_exponent: c,
    };
    vec![
        inst(model(g3, ModelParams::Heisenberg { coupling: j.clone() }), 3),
        inst(
            model(
                g3,
                ModelParams::Ising {
                    coupling: j.clone(),
                    field: k.negate(),
                },
            ),
            3,
        ),
        inst(model(g3, ModelParams::UnitCell(UnitCellSpec::heisenberg_star(k.clone()))), 3),
        inst(
            model(
                g2,
                ModelParams::Hubbard {
                    hopping: j.clone(),
                    interaction: k.clone(),
                    electrons: 4,
                },
            ),
            5,
        ),
        inst(
            model(
                g2,
                ModelParams::TJ {
                    hopping: j.clone(),
                    exchange: k.clone(),
                    electrons: 3,
                },
            ),
            5,
        ),
    ]
}

#[test]
fn every_model_sparsifies_within_the_size_law() {
    for inst in model_zoo() {
        inst.validate().unwrap();
        let sparse = sparsify(&inst).unwrap();
        assert!(!sparse.exempt(), "{:?}", inst.kind());
        let out = &sparse.instance;
        let ell = 2;
        let c_out = out.gap_exponent as usize;
        for cpl in out.model.couplings() {
            assert!(cpl.value.int_width() <= coupling_int_limit(out), "{:?}", inst.kind());
            // L = (2c + d)·ℓ at the c each step saw, which is at most c_out
            assert!(cpl.value.frac_width() <= (2 * c_out + 2) * ell);
        }
        let t_int = threshold_int_limit(&out.norm_bound());
        for t in [&out.alpha, &out.beta] {
            assert!(t.int_width() <= t_int);
            assert!(t.frac_width() <= 2 * c_out * ell);
        }
        for cert in &sparse.chain {
            assert!(audit_certificate(cert, inst.side(), 2).is_empty(), "{cert:?}");
        }
    }
}

#[test]
fn replay_accepts_the_chain_and_rejects_corruption() {
    for inst in model_zoo() {
        let sparse = sparsify(&inst).unwrap();
        let instances = replay(&inst, &sparse.chain).unwrap();
        assert_eq!(instances.last().unwrap(), &sparse.instance);
        for (cert, pair) in sparse.chain.iter().zip(instances.windows(2)) {
            assert_eq!(apply_certificate(&pair[0], cert), pair[1]);
        }

        let idx = sparse
            .chain
            .iter()
            .position(|c| c.step == StepKind::FractionalCoupling && c.verdict == Verdict::Reduced)
            .expect("a widening step");
        let mut bad = sparse.chain.clone();
        bad[idx].epsilon = &bad[idx].epsilon / BigRational::from_integer(BigInt::from(2));
        assert!(matches!(
            replay(&inst, &bad),
            Err(ReductionError::Mismatch { field: "epsilon", .. })
        ));
        assert!(!audit_certificate(&bad[idx], inst.side(), 2).is_empty());

        let mut short = sparse.chain.clone();
        short.pop();
        assert!(matches!(replay(&inst, &short), Err(ReductionError::Length { .. })));
    }
}

#[test]
fn documents_round_trip() {
    for inst in model_zoo() {
        let sparse = sparsify(&inst).unwrap();
        let text = write_document(&inst, &sparse.chain).unwrap();
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.instance, inst);
        assert_eq!(doc.certificates, sparse.chain);
        assert_eq!(write_document(&doc.instance, &doc.certificates).unwrap(), text);
    }
}

#[test]
fn census_enumeration_matches_the_closed_form() {
    for n in 0..12 {
        // brute force over 3^n strings with no two adjacent non-zeros
        let mut count = 0u64;
        for code in 0..3u64.pow(n as u32) {
            let mut c = code;
            let mut prev = false;
            let mut ok = true;
            for _ in 0..n {
                let nz = c % 3 != 0;
                if nz && prev {
                    ok = false;
                    break;
                }
                prev = nz;
                c /= 3;
            }
            count += ok as u64;
        }
        assert_eq!(naf_count(n), count.into());
    }
    for side in 2..=8 {
        let one = CensusBudget {
            free_fields: 1,
            ..CensusBudget::STANDARD
        };
        assert_eq!(BigInt::from(enumerate_field(side, one)), BigInt::from(count_for_side(side, one)));
    }
}
