//! Hirzebruch–Jung continued fractions with exact rational evaluation.
//!
//! A string `[c_1, ..., c_m]` denotes `c_1 - 1/(c_2 - 1/(... - 1/c_m))`.
//! Evaluation is carried out right to left over arbitrary-precision
//! rationals; a string is *admissible* when every intermediate tail
//! `[c_i, ..., c_m]` with `i >= 2` is strictly positive.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact reduced fraction with positive denominator.
pub type Rational = BigRational;

/// A continued-fraction string of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CfString(Vec<u64>);

impl CfString {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation(
                "continued fraction must be non-empty".into(),
            ));
        }
        if entries.contains(&0) {
            return Err(Error::Validation(format!(
                "continued fraction entries must be positive: {entries:?}"
            )));
        }
        Ok(CfString(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    /// True when every entry is at least 2 (a Hirzebruch–Jung string).
    pub fn is_hj(&self) -> bool {
        self.0.iter().all(|&e| e >= 2)
    }
}

impl fmt::Display for CfString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Result of evaluating a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfValue {
    Value(Rational),
    NotAdmissible,
}

impl CfValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            CfValue::Value(v) => Some(v),
            CfValue::NotAdmissible => None,
        }
    }
}

/// Checks `p > q >= 1` and `gcd(p, q) = 1`.
pub fn validate_pair(p: u64, q: u64) -> Result<()> {
    if q == 0 || p <= q {
        return Err(Error::Validation(format!(
            "need p > q >= 1, got p={p}, q={q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Validation(format!(
            "p={p} and q={q} are not coprime"
        )));
    }
    Ok(())
}

/// Hirzebruch–Jung expansion of `p/q` (all entries >= 2).
pub fn hj_expand(p: u64, q: u64) -> Result<CfString> {
    validate_pair(p, q)?;
    let (mut num, mut den) = (p, q);
    let mut out = Vec::new();
    // num/den = c - 1/(den/(c*den - num)) with c = ceil(num/den)
    while den > 0 {
        let c = num.div_ceil(den);
        out.push(c);
        let rem = c * den - num;
        num = den;
        den = rem;
    }
    Ok(CfString(out))
}

/// Evaluates the string right to left. Any non-positive tail
/// `[c_i, ..., c_m]` with `i >= 2` makes the string not admissible.
pub fn cf_eval(t: &CfString) -> CfValue {
    eval_entries(t.entries())
}

pub(crate) fn eval_entries(entries: &[u64]) -> CfValue {
    let mut iter = entries.iter().rev();
    let Some(&last) = iter.next() else {
        return CfValue::NotAdmissible;
    };
    let mut acc = Rational::from_integer(BigInt::from(last));
    for &c in iter {
        if !acc.is_positive() {
            return CfValue::NotAdmissible;
        }
        acc = Rational::from_integer(BigInt::from(c)) - acc.recip();
    }
    CfValue::Value(acc)
}

/// True iff the string is admissible and evaluates to zero.
pub fn is_zero_cf(t: &CfString) -> bool {
    matches!(cf_eval(t), CfValue::Value(v) if v.is_zero())
}

/// Riemenschneider dual: if `t` is `p/q` the result is `p/(p-q)`.
///
/// Built by replaying the two elementary moves from the seed `[2]`:
/// incrementing the last entry dualizes to appending a 2, and appending a 2
/// dualizes to incrementing the last entry.
pub fn dual_string(t: &CfString) -> Result<CfString> {
    if !t.is_hj() {
        return Err(Error::Validation(format!(
            "dual string needs entries >= 2, got {t}"
        )));
    }
    let mut dual = vec![2u64];
    let entries = t.entries();
    for (idx, &a) in entries.iter().enumerate() {
        // position idx starts from 2 (either the seed or a freshly appended 2)
        if idx > 0 {
            *dual.last_mut().expect("non-empty") += 1;
        }
        dual.extend(std::iter::repeat_n(2, (a - 2) as usize));
    }
    Ok(CfString(dual))
}

/// Returns the chain of strings from `[2]` to `t` along the elementary moves
/// "increment last entry" and "append 2", including both endpoints.
pub fn elementary_chain(t: &CfString) -> Result<Vec<CfString>> {
    if !t.is_hj() {
        return Err(Error::Validation(format!(
            "chain needs entries >= 2, got {t}"
        )));
    }
    let mut chain = vec![t.clone()];
    let mut cur = t.0.clone();
    while cur != [2] {
        let last = *cur.last().expect("non-empty");
        if last > 2 {
            *cur.last_mut().expect("non-empty") -= 1;
        } else {
            cur.pop();
        }
        chain.push(CfString(cur.clone()));
    }
    chain.reverse();
    Ok(chain)
}

/// Numerator and denominator of an admissible positive value as `u64`.
pub fn to_pair(v: &Rational) -> Option<(u64, u64)> {
    use num_traits::ToPrimitive;
    Some((v.numer().to_u64()?, v.denom().to_u64()?))
}

/// `p/q` for a Hirzebruch–Jung string.
pub fn hj_value(t: &CfString) -> Option<(u64, u64)> {
    match cf_eval(t) {
        CfValue::Value(v) if v > Rational::one() => to_pair(&v),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(v: &[u64]) -> CfString {
        CfString::new(v.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn worked_expansions() {
        assert_eq!(hj_expand(56, 39).unwrap(), cf(&[2, 2, 5, 2, 3]));
        assert_eq!(hj_expand(56, 17).unwrap(), cf(&[4, 2, 2, 4, 2]));
        assert_eq!(hj_expand(2, 1).unwrap(), cf(&[2]));
    }

    #[test]
    fn expand_rejects_bad_pairs() {
        assert!(hj_expand(4, 2).is_err());
        assert!(hj_expand(3, 3).is_err());
        assert!(hj_expand(3, 5).is_err());
        assert!(hj_expand(3, 0).is_err());
    }

    #[test]
    fn eval_small_strings() {
        assert_eq!(cf_eval(&cf(&[2])), CfValue::Value(rat(2, 1)));
        assert_eq!(cf_eval(&cf(&[1, 1])), CfValue::Value(rat(0, 1)));
        assert_eq!(cf_eval(&cf(&[2, 1, 2])), CfValue::Value(rat(0, 1)));
        assert_eq!(cf_eval(&cf(&[2, 2])), CfValue::Value(rat(3, 2)));
        // tail [1,1] = 0 makes the outer denominator vanish
        assert_eq!(cf_eval(&cf(&[3, 1, 1])), CfValue::NotAdmissible);
        // tail [1,1,2] = 1 - 2 < 0
        assert_eq!(cf_eval(&cf(&[2, 1, 1, 2])), CfValue::NotAdmissible);
    }

    #[test]
    fn zero_strings() {
        assert!(is_zero_cf(&cf(&[1, 1])));
        assert!(is_zero_cf(&cf(&[2, 1, 2])));
        assert!(is_zero_cf(&cf(&[1, 2, 1])));
        assert!(is_zero_cf(&cf(&[2, 1, 4, 1, 2])));
        assert!(!is_zero_cf(&cf(&[2, 2])));
        assert!(!is_zero_cf(&cf(&[3, 1, 1])));
    }

    #[test]
    fn duals() {
        assert_eq!(
            dual_string(&cf(&[4, 2, 2, 4, 2])).unwrap(),
            cf(&[2, 2, 5, 2, 3])
        );
        assert_eq!(dual_string(&cf(&[2])).unwrap(), cf(&[2]));
        assert_eq!(dual_string(&cf(&[3])).unwrap(), cf(&[2, 2]));
        assert!(dual_string(&cf(&[1, 3])).is_err());
        // 3/1 dualizes to 3/2
        assert_eq!(cf_eval(&cf(&[2, 2])), CfValue::Value(rat(3, 2)));
    }

    #[test]
    fn chain_to_worked_string() {
        let chain = elementary_chain(&cf(&[4, 2, 2, 4, 2])).unwrap();
        assert_eq!(chain.first().unwrap(), &cf(&[2]));
        assert_eq!(chain.last().unwrap(), &cf(&[4, 2, 2, 4, 2]));
        for w in chain.windows(2) {
            let (a, b) = (w[0].entries(), w[1].entries());
            let inc = a.len() == b.len()
                && a[..a.len() - 1] == b[..b.len() - 1]
                && a[a.len() - 1] + 1 == b[b.len() - 1];
            let app = b.len() == a.len() + 1 && &b[..a.len()] == a && b[a.len()] == 2;
            assert!(inc || app, "{a:?} -> {b:?}");
        }
    }

    #[test]
    fn expansion_evaluates_back() {
        for p in 2..=200u64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let t = hj_expand(p, q).unwrap();
                assert!(t.is_hj());
                assert_eq!(
                    cf_eval(&t),
                    CfValue::Value(rat(p as i64, q as i64)),
                    "{p}/{q}"
                );
            }
        }
    }

    #[test]
    fn dual_matches_expansion_of_complement() {
        for p in 2..=120u64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let a = hj_expand(p, q).unwrap();
                let b = hj_expand(p, p - q).unwrap();
                assert_eq!(dual_string(&a).unwrap(), b, "{p}/{q}");
            }
        }
    }
}
