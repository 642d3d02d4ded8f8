//! Blowups of tuples of positive integers, the sets `Z_k`, and the
//! parameterization of fillings by tuples bounded by the dual string.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, CfString};
use crate::error::{Error, Result};

/// Default cap on the tuple length accepted by [`enumerate_fillings`].
///
/// The bounded search keeps only tuples whose entries stay below the largest
/// entry of the dual string, so the frontier stays small even for long
/// strings such as `p/(p-1)`.
pub const DEFAULT_MAX_K: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlowupTuple(pub Vec<u64>);

impl BlowupTuple {
    pub fn new(entries: Vec<u64>) -> Self {
        BlowupTuple(entries)
    }

    /// The one-entry tuple `(0)`.
    pub fn zero() -> Self {
        BlowupTuple(vec![0])
    }

    pub fn is_zero_tuple(&self) -> bool {
        self.0 == [0]
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

    /// Membership in `Z_k`: `(0)` for `k = 1`, otherwise an admissible
    /// string of positive integers evaluating to zero.
    pub fn is_in_zk(&self) -> bool {
        if self.is_zero_tuple() {
            return true;
        }
        self.0.len() >= 2
            && CfString::new(self.0.clone())
                .map(|t| arith::is_zero_cf(&t))
                .unwrap_or(false)
    }
}

impl fmt::Display for BlowupTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A single blowup. `Interior(i)` is 1-based: it acts on the `i`-th and
/// `(i+1)`-st entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlowupStep {
    Initial,
    Interior(usize),
    Exterior,
}

impl BlowupStep {
    /// Rank used for the lexicographic order on sequences:
    /// `Initial < Exterior < Interior(1) < Interior(2) < ...`.
    fn rank(self) -> usize {
        match self {
            BlowupStep::Initial => 0,
            BlowupStep::Exterior => 1,
            BlowupStep::Interior(i) => 1 + i,
        }
    }
}

impl PartialOrd for BlowupStep {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BlowupStep {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for BlowupStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupStep::Initial => write!(f, "initial"),
            BlowupStep::Interior(i) => write!(f, "interior({i})"),
            BlowupStep::Exterior => write!(f, "exterior"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlowupSequence(pub Vec<BlowupStep>);

impl BlowupSequence {
    pub fn steps(&self) -> &[BlowupStep] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Replays the steps from `(0)`, returning every intermediate tuple
    /// (starting with `(0)`).
    pub fn stages(&self) -> Result<Vec<BlowupTuple>> {
        let mut cur = BlowupTuple::zero();
        let mut out = vec![cur.clone()];
        for &s in &self.0 {
            cur = apply_blowup(&cur, s)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Final tuple obtained by replaying from `(0)`.
    pub fn replay(&self) -> Result<BlowupTuple> {
        Ok(self.stages()?.pop().expect("stages is never empty"))
    }
}

impl fmt::Display for BlowupSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub fn apply_blowup(t: &BlowupTuple, s: BlowupStep) -> Result<BlowupTuple> {
    let n = &t.0;
    let r = n.len();
    let invalid = || Error::InvalidStep {
        step: s.to_string(),
        len: r,
    };
    match s {
        BlowupStep::Initial => {
            if !t.is_zero_tuple() {
                return Err(invalid());
            }
            Ok(BlowupTuple(vec![1, 1]))
        }
        _ if r < 2 || n.contains(&0) => Err(invalid()),
        BlowupStep::Interior(i) => {
            if i == 0 || i >= r {
                return Err(invalid());
            }
            let mut out = Vec::with_capacity(r + 1);
            out.extend_from_slice(&n[..i - 1]);
            out.push(n[i - 1] + 1);
            out.push(1);
            out.push(n[i] + 1);
            out.extend_from_slice(&n[i + 1..]);
            Ok(BlowupTuple(out))
        }
        BlowupStep::Exterior => {
            let mut out = n.clone();
            *out.last_mut().expect("r >= 2") += 1;
            out.push(1);
            Ok(BlowupTuple(out))
        }
    }
}

/// Inverse of [`apply_blowup`] at 1-based position `j` (the entry equal to 1).
pub fn apply_blowdown(t: &BlowupTuple, j: usize) -> Result<BlowupTuple> {
    let n = &t.0;
    let k = n.len();
    let bad = || Error::InvalidBlowdown {
        tuple: n.clone(),
        index: j,
    };
    if j < 2 || j > k || n[j - 1] != 1 {
        return Err(bad());
    }
    let mut out = n.clone();
    if j < k {
        if n[j - 2] < 2 || n[j] < 2 {
            return Err(bad());
        }
        out[j - 2] -= 1;
        out[j] -= 1;
    } else {
        if n[k - 2] < 2 {
            return Err(bad());
        }
        out[k - 2] -= 1;
    }
    out.remove(j - 1);
    Ok(BlowupTuple(out))
}

/// Blowup step undone by a blowdown at 1-based position `j` of a tuple of
/// length `k`.
fn step_for_blowdown(j: usize, k: usize) -> BlowupStep {
    if j == k {
        BlowupStep::Exterior
    } else {
        BlowupStep::Interior(j - 1)
    }
}

fn valid_blowdowns(t: &BlowupTuple) -> impl Iterator<Item = (usize, BlowupTuple)> + '_ {
    (2..=t.len()).filter_map(move |j| apply_blowdown(t, j).ok().map(|d| (j, d)))
}

fn is_initial_pair(t: &BlowupTuple) -> bool {
    t.0 == [1, 1]
}

/// All tuples reachable from `n` by blowdowns, down to `(1,1)`.
fn ancestors(n: &BlowupTuple) -> HashSet<BlowupTuple> {
    let mut seen = HashSet::new();
    let mut stack = vec![n.clone()];
    seen.insert(n.clone());
    while let Some(t) = stack.pop() {
        for (_, d) in valid_blowdowns(&t) {
            if seen.insert(d.clone()) {
                stack.push(d);
            }
        }
    }
    seen
}

fn candidate_steps(r: usize) -> impl Iterator<Item = BlowupStep> {
    std::iter::once(BlowupStep::Exterior).chain((1..r).map(BlowupStep::Interior))
}

/// Deterministic blowup sequence from `(0)` to `n`.
///
/// Among all sequences reaching `n`, returns the lexicographically least one
/// under `Initial < Exterior < Interior(1) < Interior(2) < ...`. The set of
/// tuples that blow down to `n` is computed first; the forward pass then
/// picks the least step that stays inside that set.
pub fn canonical_sequence(n: &BlowupTuple) -> Result<BlowupSequence> {
    if n.is_zero_tuple() {
        return Ok(BlowupSequence::default());
    }
    if n.len() < 2 || n.0.contains(&0) {
        return Err(Error::NotInZk(n.0.clone()));
    }
    let anc = ancestors(n);
    let start = BlowupTuple(vec![1, 1]);
    if !anc.contains(&start) {
        return Err(Error::NotInZk(n.0.clone()));
    }
    let mut steps = vec![BlowupStep::Initial];
    let mut cur = start;
    while cur != *n {
        let next = candidate_steps(cur.len())
            .find_map(|s| {
                let t = apply_blowup(&cur, s).ok()?;
                anc.contains(&t).then_some((s, t))
            })
            .ok_or_else(|| Error::NotInZk(n.0.clone()))?;
        steps.push(next.0);
        cur = next.1;
    }
    Ok(BlowupSequence(steps))
}

/// Up to `limit` distinct blowup sequences reaching `n`, in lexicographic
/// order of their forward steps.
pub fn all_sequences(n: &BlowupTuple, limit: usize) -> Vec<BlowupSequence> {
    fn walk(
        t: &BlowupTuple,
        suffix: &mut Vec<BlowupStep>,
        out: &mut BTreeSet<BlowupSequence>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if is_initial_pair(t) {
            let mut steps = vec![BlowupStep::Initial];
            steps.extend(suffix.iter().rev());
            out.insert(BlowupSequence(steps));
            return;
        }
        for (j, d) in valid_blowdowns(t) {
            suffix.push(step_for_blowdown(j, t.len()));
            walk(&d, suffix, out, limit);
            suffix.pop();
        }
    }
    if n.is_zero_tuple() {
        return vec![BlowupSequence::default()];
    }
    let mut out = BTreeSet::new();
    walk(n, &mut Vec::new(), &mut out, limit);
    out.into_iter().collect()
}

/// A filling of `L(p,q)`: the tuple `n`, its canonical sequence, the
/// dual string `b` and the twist multiplicities `m = b - n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filling {
    pub p: u64,
    pub q: u64,
    pub b: CfString,
    pub n: BlowupTuple,
    pub sequence: BlowupSequence,
    pub m: Vec<u64>,
}

impl Filling {
    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// Degenerate one-hole case `q = p - 1`.
    pub fn is_degenerate(&self) -> bool {
        self.b.len() == 1
    }

    /// Builds the filling record for a given tuple, validating membership.
    pub fn new(p: u64, q: u64, n: BlowupTuple) -> Result<Self> {
        let b = arith::hj_expand(p, p - validate_q(p, q)?)?;
        if n.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: b.len(),
                got: n.len(),
            });
        }
        if !n.is_in_zk() {
            return Err(Error::NotInZk(n.0.clone()));
        }
        if n.0.iter().zip(b.entries()).any(|(x, y)| x > y) {
            return Err(Error::Validation(format!("{n} is not bounded by {b}")));
        }
        let sequence = canonical_sequence(&n)?;
        let m = n.0.iter().zip(b.entries()).map(|(x, y)| y - x).collect();
        Ok(Filling {
            p,
            q,
            b,
            n,
            sequence,
            m,
        })
    }
}

fn validate_q(p: u64, q: u64) -> Result<u64> {
    arith::validate_pair(p, q)?;
    Ok(q)
}

#[derive(Debug, Clone, Copy)]
pub struct EnumConfig {
    pub max_k: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_k: DEFAULT_MAX_K,
        }
    }
}

/// All fillings of `L(p,q)`, sorted lexicographically by `n`.
pub fn enumerate_fillings(p: u64, q: u64) -> Result<Vec<Filling>> {
    enumerate_fillings_with(p, q, EnumConfig::default())
}

pub fn enumerate_fillings_with(p: u64, q: u64, cfg: EnumConfig) -> Result<Vec<Filling>> {
    arith::validate_pair(p, q)?;
    let b = arith::hj_expand(p, p - q)?;
    let k = b.len();
    if k > cfg.max_k {
        return Err(Error::LengthCap { k, cap: cfg.max_k });
    }
    if k == 1 {
        return Ok(vec![Filling::new(p, q, BlowupTuple::zero())?]);
    }
    let bound = *b.entries().iter().max().expect("non-empty");
    let first = b.entries()[0];
    // entries never decrease under blowups and the first entry never moves
    let keep = |t: &BlowupTuple| t.0[0] <= first && t.0.iter().all(|&e| e <= bound);

    let mut level: BTreeSet<BlowupTuple> = BTreeSet::new();
    level.insert(BlowupTuple(vec![1, 1]));
    for r in 2..k {
        let mut next = BTreeSet::new();
        for t in &level {
            for s in candidate_steps(r) {
                let u = apply_blowup(t, s)?;
                if keep(&u) {
                    next.insert(u);
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .filter(|n| n.0.iter().zip(b.entries()).all(|(x, y)| x <= y))
        .map(|n| Filling::new(p, q, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use BlowupStep::*;

    fn t(v: &[u64]) -> BlowupTuple {
        BlowupTuple(v.to_vec())
    }

    #[test]
    fn blowups() {
        assert_eq!(
            apply_blowup(&t(&[1, 1]), Interior(1)).unwrap(),
            t(&[2, 1, 2])
        );
        assert_eq!(apply_blowup(&t(&[1, 1]), Exterior).unwrap(), t(&[1, 2, 1]));
        assert_eq!(
            apply_blowup(&t(&[2, 1, 3, 1]), Interior(3)).unwrap(),
            t(&[2, 1, 4, 1, 2])
        );
        assert_eq!(apply_blowup(&t(&[0]), Initial).unwrap(), t(&[1, 1]));
    }

    #[test]
    fn blowup_errors() {
        assert!(apply_blowup(&t(&[1, 1]), Initial).is_err());
        assert!(apply_blowup(&t(&[1, 1]), Interior(2)).is_err());
        assert!(apply_blowup(&t(&[1, 1]), Interior(0)).is_err());
        assert!(apply_blowup(&t(&[0]), Exterior).is_err());
    }

    #[test]
    fn blowdowns() {
        assert_eq!(apply_blowdown(&t(&[2, 1, 2]), 2).unwrap(), t(&[1, 1]));
        assert_eq!(apply_blowdown(&t(&[1, 2, 1]), 3).unwrap(), t(&[1, 1]));
        assert_eq!(
            apply_blowdown(&t(&[2, 1, 4, 1, 2]), 4).unwrap(),
            t(&[2, 1, 3, 1])
        );
        assert!(apply_blowdown(&t(&[1, 1]), 2).is_err());
        assert!(apply_blowdown(&t(&[2, 1, 2]), 1).is_err());
        assert!(apply_blowdown(&t(&[2, 2, 2]), 2).is_err());
        assert!(apply_blowdown(&t(&[1, 2, 1]), 4).is_err());
    }

    #[test]
    fn blowdown_inverts_blowup() {
        let n = t(&[2, 1, 4, 1, 2]);
        for j in 2..=n.len() {
            if let Ok(d) = apply_blowdown(&n, j) {
                let s = step_for_blowdown(j, n.len());
                assert_eq!(apply_blowup(&d, s).unwrap(), n);
            }
        }
    }

    #[test]
    fn canonical_sequences() {
        assert_eq!(canonical_sequence(&t(&[1, 1])).unwrap().0, vec![Initial]);
        assert_eq!(
            canonical_sequence(&t(&[2, 1, 2])).unwrap().0,
            vec![Initial, Interior(1)]
        );
        assert_eq!(
            canonical_sequence(&t(&[2, 1, 4, 1, 2])).unwrap().0,
            vec![Initial, Exterior, Interior(1), Interior(3)]
        );
        assert!(canonical_sequence(&t(&[0])).unwrap().is_empty());
        assert!(canonical_sequence(&t(&[2, 2])).is_err());
        assert!(canonical_sequence(&t(&[1, 3, 1])).is_err());
    }

    #[test]
    fn canonical_is_least_of_all_sequences() {
        let n = t(&[2, 1, 4, 1, 2]);
        let all = all_sequences(&n, 100);
        assert_eq!(all.len(), 3);
        assert_eq!(all[0], canonical_sequence(&n).unwrap());
        for s in &all {
            assert_eq!(s.replay().unwrap(), n);
        }
    }

    #[test]
    fn worked_fillings() {
        let fs = enumerate_fillings(56, 17).unwrap();
        let find = |n: &[u64]| fs.iter().find(|f| f.n.0 == n).cloned();
        assert_eq!(find(&[2, 1, 4, 1, 2]).unwrap().m, vec![0, 1, 1, 1, 1]);
        assert_eq!(find(&[1, 2, 2, 2, 1]).unwrap().m, vec![1, 0, 3, 0, 2]);
        let mut sorted = fs.clone();
        sorted.sort_by(|a, b| a.n.cmp(&b.n));
        assert_eq!(sorted, fs);
    }

    #[test]
    fn four_one() {
        // b = (2,2,2): zero 3-tuples bounded by 2
        let ns: Vec<_> = enumerate_fillings(4, 1)
            .unwrap()
            .into_iter()
            .map(|f| f.n.0)
            .collect();
        assert_eq!(ns, vec![vec![1, 2, 1], vec![2, 1, 2]]);
    }

    #[test]
    fn degenerate_and_cap() {
        let fs = enumerate_fillings(5, 4).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(fs[0].n.is_zero_tuple());
        assert_eq!(fs[0].m, vec![5]);
        let err = enumerate_fillings_with(30, 1, EnumConfig { max_k: 14 }).unwrap_err();
        assert_eq!(err, Error::LengthCap { k: 29, cap: 14 });
        assert!(enumerate_fillings(4, 2).is_err());
    }
}
