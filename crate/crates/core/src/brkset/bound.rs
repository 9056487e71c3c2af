use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use crate::error::{Error, Result};

/// The lower bound `(q-1)^n / (ell + 1 - 2 ell / q)^n`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBound {
    pub value: BigRational,
    pub ceil: BigInt,
}

impl TheoremBound {
    /// The ceiling as a machine integer; sizes never exceed `usize`.
    pub fn ceil_usize(&self) -> usize {
        usize::try_from(&self.ceil).unwrap_or(usize::MAX)
    }
}

impl fmt::Display for TheoremBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} (ceil {})", self.value.numer(), self.value.denom(), self.ceil)
    }
}

impl Serialize for TheoremBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TheoremBound", 3)?;
        st.serialize_field("numerator", &self.value.numer().to_string())?;
        st.serialize_field("denominator", &self.value.denom().to_string())?;
        st.serialize_field("ceil", &self.ceil.to_string())?;
        st.end()
    }
}

/// `((q-1) q)^n / ((ell+1) q - 2 ell)^n` in lowest terms, with its ceiling.
pub fn theorem_bound(q: u32, n: u32, ell: u32) -> Result<TheoremBound> {
    if ell < 2 || ell >= q {
        return Err(Error::EllOutOfRange { ell, q });
    }
    if n < 2 {
        return Err(Error::InvalidInstance(format!("dimension {n} is below 2")));
    }
    let (q, l) = (BigInt::from(q), BigInt::from(ell));
    let num: BigInt = Pow::pow((&q - 1u32) * &q, n);
    let den: BigInt = Pow::pow((&l + 1u32) * &q - 2u32 * &l, n);
    let value = BigRational::new(num, den);
    let ceil = value.ceil().to_integer();
    Ok(TheoremBound { value, ceil })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProofParams {
    pub q: u32,
    pub ell: u32,
    pub k: u64,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "M")]
    pub m: u64,
}

/// First `w` in `0..k` with `ell (D - w) >= (M - w) q`, if any.
pub fn first_violation(q: u32, ell: u32, k: u64, d: u64, m: u64) -> Option<u64> {
    (0..k).find(|&w| {
        let lhs = ell as i128 * (d as i128 - w as i128);
        let rhs = (m as i128 - w as i128) * q as i128;
        lhs >= rhs
    })
}

/// `D = k(q-1) - 1` and `M = (ell+1) k - 2 ell k / q`, checked against
/// `ell (D - w) < (M - w) q` for every `0 <= w < k`.
pub fn proof_params(q: u32, ell: u32, k: u64) -> Result<ProofParams> {
    if ell < 2 || ell >= q {
        return Err(Error::EllOutOfRange { ell, q });
    }
    if k == 0 || !k.is_multiple_of(q as u64) {
        return Err(Error::NotMultipleOfQ { k, q });
    }
    let overflow = || Error::Overflow("proof parameters");
    let d = k
        .checked_mul(q as u64 - 1)
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(overflow)?;
    let m = (ell as u64 + 1)
        .checked_mul(k)
        .and_then(|x| x.checked_sub(2 * ell as u64 * (k / q as u64)))
        .ok_or_else(overflow)?;
    if let Some(w) = first_violation(q, ell, k, d, m) {
        return Err(Error::InequalityViolated(format!(
            "{ell}*({d}-{w}) >= ({m}-{w})*{q}"
        )));
    }
    Ok(ProofParams { q, ell, k, d, m })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        let b = theorem_bound(3, 2, 2).unwrap();
        assert_eq!(b.to_string(), "36/25 (ceil 2)");
        let b = theorem_bound(5, 2, 2).unwrap();
        assert_eq!(b.value, BigRational::new(1600.into(), 484.into()));
        assert_eq!(b.to_string(), "400/121 (ceil 4)");
        assert!(matches!(theorem_bound(3, 2, 3), Err(Error::EllOutOfRange { .. })));
        assert!(theorem_bound(3, 2, 1).is_err());
    }

    #[test]
    fn bound_grows_with_q() {
        for n in 2..5 {
            for ell in 2..6 {
                let mut prev = None;
                for q in ell + 1..=31 {
                    let b = theorem_bound(q, n, ell).unwrap().value;
                    if let Some(p) = prev {
                        assert!(b > p, "q={q} n={n} ell={ell}");
                    }
                    prev = Some(b);
                }
            }
        }
    }

    #[test]
    fn params_examples() {
        let p = proof_params(3, 2, 3).unwrap();
        assert_eq!((p.d, p.m), (5, 5));
        let p = proof_params(5, 2, 5).unwrap();
        assert_eq!((p.d, p.m), (19, 11));
        assert!(matches!(proof_params(3, 2, 4), Err(Error::NotMultipleOfQ { .. })));
        assert!(matches!(proof_params(3, 3, 3), Err(Error::EllOutOfRange { .. })));
    }

    #[test]
    fn params_always_satisfy_inequality() {
        for q in [3u32, 4, 5, 7, 8, 9, 11, 13] {
            for ell in 2..q {
                for mult in 1..6 {
                    let k = q as u64 * mult;
                    let p = proof_params(q, ell, k).unwrap();
                    for w in 0..k {
                        let lhs = ell as i128 * (p.d - w) as i128;
                        assert!(lhs < (p.m as i128 - w as i128) * q as i128);
                    }
                }
            }
        }
    }
}
