use cfdim::certify::{certify_dimension, certify_dimension_cached, Certificate, Params};
use cfdim::determinant::estimate_dimension;
use cfdim::mobius::DigitSet;
use cfdim::numerics::PrecisionContext;
use cfdim::Error;

const SMALL: Params = Params {
    p: 8,
    q: 12,
    m: 40,
    n: 60,
};

#[test]
fn small_certificate_round_trips_through_json() {
    let ctx = PrecisionContext::new(10).unwrap();
    let digits: DigitSet = "1,2".parse().unwrap();
    let cert = certify_dimension(&digits, &SMALL, &ctx).unwrap();
    assert!(cert.verdict);
    assert_eq!(cert.s_minus, "0.53128050626");
    assert_eq!(cert.s_plus, "0.53128050628");
    assert!(cert.endpoints.iter().all(|e| e.separated));
    let back = Certificate::from_json(&cert.to_json().unwrap()).unwrap();
    assert_eq!(back, cert);
    // Re-parsed decimals reproduce the stored strings.
    let d = back.d_p_minus.parse(&ctx).unwrap();
    assert!(d < 0);
}

#[test]
fn cached_and_fresh_certificates_agree() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = PrecisionContext::new(10).unwrap();
    let digits: DigitSet = "1,2".parse().unwrap();
    let fresh = certify_dimension(&digits, &SMALL, &ctx).unwrap();
    let first = certify_dimension_cached(&digits, &SMALL, &ctx, Some(dir.path())).unwrap();
    let second = certify_dimension_cached(&digits, &SMALL, &ctx, Some(dir.path())).unwrap();
    assert_eq!(fresh, first);
    assert_eq!(first, second);
}

#[test]
fn short_period_is_inconclusive() {
    let ctx = PrecisionContext::new(20).unwrap();
    let digits: DigitSet = "1,2".parse().unwrap();
    match certify_dimension(&digits, &SMALL, &ctx) {
        Err(Error::Inconclusive { certificate, .. }) => {
            assert!(!certificate.verdict);
            assert_eq!(certificate.widenings, cfdim::certify::MAX_WIDENINGS);
        }
        other => panic!("expected an inconclusive run, got {other:?}"),
    }
}

#[test]
fn three_digit_set_certifies() {
    let ctx = PrecisionContext::new(8).unwrap();
    let digits: DigitSet = "1,2,3".parse().unwrap();
    let cert = certify_dimension(
        &digits,
        &Params {
            p: 9,
            q: 12,
            m: 40,
            n: 60,
        },
        &ctx,
    )
    .unwrap();
    assert!(cert.verdict);
    // A longer-period estimate must land inside the certified interval.
    let finer = estimate_dimension(&digits, 11, &PrecisionContext::new(20).unwrap()).unwrap();
    let lo = ctx.parse(&cert.s_minus).unwrap();
    let hi = ctx.parse(&cert.s_plus).unwrap();
    assert!(lo < finer && finer < hi);
}
