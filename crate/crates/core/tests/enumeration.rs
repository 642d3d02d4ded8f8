use std::collections::BTreeSet;

use lensforge::arith::hj_expand;
use lensforge::blowup::{all_sequences, canonical_sequence, enumerate_fillings, BlowupTuple};
use num_rational::Rational64;
use num_traits::Zero;

/// Zero continued fraction whose proper tails all evaluate to positive
/// values.
fn zero_cf(n: &[u64]) -> bool {
    let mut v = Rational64::from_integer(n[n.len() - 1] as i64);
    for &a in n[..n.len() - 1].iter().rev() {
        if v <= Rational64::zero() {
            return false;
        }
        v = Rational64::from_integer(a as i64) - v.recip();
    }
    v.is_zero()
}

fn boxed(b: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &bi in b {
        out = out
            .into_iter()
            .flat_map(|t| (1..=bi).map(move |x| [t.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

/// Fills entries right to left, pruning once a proper tail is not positive.
fn search(
    b: &[u64],
    suffix: &mut Vec<u64>,
    tail: Option<Rational64>,
    out: &mut BTreeSet<Vec<u64>>,
) {
    let i = b.len() - suffix.len();
    if i == 0 {
        if tail.is_some_and(|v| v.is_zero()) {
            out.insert(suffix.iter().rev().copied().collect());
        }
        return;
    }
    if tail.is_some_and(|v| v <= Rational64::zero()) {
        return;
    }
    for x in 1..=b[i - 1] {
        let v = match tail {
            None => Rational64::from_integer(x as i64),
            Some(t) => Rational64::from_integer(x as i64) - t.recip(),
        };
        suffix.push(x);
        search(b, suffix, Some(v), out);
        suffix.pop();
    }
}

#[test]
fn zero_cf_matches_blowup_membership() {
    for k in 2..=6 {
        for t in boxed(&vec![k as u64 + 1; k]) {
            assert_eq!(BlowupTuple::new(t.clone()).is_in_zk(), zero_cf(&t), "{t:?}");
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for p in 2..=40u64 {
        for q in 1..p {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let b = hj_expand(p, p - q).unwrap();
            let got: BTreeSet<Vec<u64>> = enumerate_fillings(p, q)
                .unwrap()
                .into_iter()
                .map(|f| f.n.entries().to_vec())
                .collect();
            let want: BTreeSet<Vec<u64>> = if b.len() == 1 {
                std::iter::once(vec![0]).collect()
            } else {
                let mut out = BTreeSet::new();
                search(b.entries(), &mut Vec::new(), None, &mut out);
                out
            };
            assert_eq!(got, want, "{p}/{q}");
        }
    }
}

#[test]
fn sequences_replay_to_their_tuple() {
    for p in 2..=25u64 {
        for q in 1..p {
            let Ok(fs) = enumerate_fillings(p, q) else {
                continue;
            };
            for f in fs {
                assert_eq!(canonical_sequence(&f.n).unwrap().replay().unwrap(), f.n);
                for s in all_sequences(&f.n, 4) {
                    assert_eq!(s.replay().unwrap(), f.n);
                }
            }
        }
    }
}
