//! Certified comparison of total Euclidean lengths.
//!
//! Each segment length is enclosed in a rational interval from integer square
//! roots at increasing precision; comparisons are decided once the enclosing
//! intervals separate.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::primitives::Segment;
use super::rational::Q;

/// `[lo, hi]` with `lo <= sqrt(v) <= hi`, at resolution `2^-bits`.
pub fn sqrt_bounds(v: &Q, bits: u32) -> (Q, Q) {
    if v.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let scale = BigInt::one() << (2 * bits);
    // floor(v * 4^bits) bounds v from below; +1 from above
    let scaled = (v * Q::from_integer(scale.clone())).floor().to_integer();
    let lo_root = scaled.sqrt();
    let hi_root = (&scaled + BigInt::one()).sqrt() + BigInt::one();
    let den = BigInt::one() << bits;
    (Q::new(lo_root, den.clone()), Q::new(hi_root, den))
}

/// Rational enclosure of the total length of `segs`.
pub fn length_bounds(segs: &[Segment], bits: u32) -> (Q, Q) {
    let mut lo = Q::zero();
    let mut hi = Q::zero();
    for s in segs {
        let (a, b) = sqrt_bounds(&s.len_sq(), bits);
        lo += a;
        hi += b;
    }
    (lo, hi)
}

fn exact_sqrt(v: &Q) -> Option<Q> {
    let (n, d) = (v.numer().sqrt(), v.denom().sqrt());
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| Q::new(n, d))
}

/// Total length when every segment length is rational.
fn exact_length(segs: &[Segment]) -> Option<Q> {
    segs.iter().try_fold(Q::zero(), |acc, s| Some(acc + exact_sqrt(&s.len_sq())?))
}

/// Compares total lengths; `None` if still undecided at the finest precision
/// (then the totals are equal or closer than `n · 2^-512`).
pub fn compare_lengths(a: &[Segment], b: &[Segment]) -> Option<Ordering> {
    for bits in [32u32, 64, 128, 256, 512] {
        let (alo, ahi) = length_bounds(a, bits);
        let (blo, bhi) = length_bounds(b, bits);
        if ahi < blo {
            return Some(Ordering::Less);
        }
        if bhi < alo {
            return Some(Ordering::Greater);
        }
    }
    if let (Some(x), Some(y)) = (exact_length(a), exact_length(b)) {
        return Some(x.cmp(&y));
    }
    // identical multisets of squared lengths are certainly equal
    let mut ka: Vec<Q> = a.iter().map(Segment::len_sq).filter(|v| !v.is_zero()).collect();
    let mut kb: Vec<Q> = b.iter().map(Segment::len_sq).filter(|v| !v.is_zero()).collect();
    ka.sort();
    kb.sort();
    (ka == kb).then_some(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qi, seg};

    #[test]
    fn bounds_enclose() {
        let (lo, hi) = sqrt_bounds(&qi(2), 40);
        assert!(&lo * &lo <= qi(2) && qi(2) <= &hi * &hi);
        assert!(hi - lo <= q(1, 1 << 38));
        assert_eq!(sqrt_bounds(&qi(9), 8).0, qi(3));
    }

    #[test]
    fn decides_close_sums() {
        // sqrt 2 + sqrt 5 = 3.650 against sqrt 13 = 3.606
        let a = [seg((0, 0), (1, 1)), seg((0, 0), (2, 1))];
        let b = [seg((0, 0), (3, 2))];
        assert_eq!(compare_lengths(&a, &b), Some(Ordering::Greater));
        assert_eq!(compare_lengths(&b, &a), Some(Ordering::Less));
        let c = [seg((0, 0), (0, 3)), seg((1, 1), (4, 5))];
        let d = [seg((5, 5), (5, 13))];
        assert_eq!(compare_lengths(&c, &d), Some(Ordering::Equal));
        let e = [seg((0, 0), (1, 1)), seg((0, 0), (2, 2))];
        let f = [seg((0, 0), (3, 3))];
        assert_eq!(compare_lengths(&e, &f), None);
    }
}
