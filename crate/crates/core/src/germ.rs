//! Resolution graphs, decorated curve germs and Artin-filling diagrams.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::arith::{self, CfString};
use crate::blowup::{BlowupSequence, BlowupStep};
use crate::error::{Error, Result};
use crate::incidence::{comb_equivalent, incidence_readoff, IncidenceMatrix};
use crate::wiring::{build_diagram, extend_diagram, EventLabel, WiringDiagram};

/// Chain of vertices `v_1 - ... - v_m` with weights `-a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub weights: Vec<i64>,
}

impl DualGraph {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        let a = arith::hj_expand(p, q)?;
        Ok(DualGraph {
            weights: a.entries().iter().map(|&x| -(x as i64)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Branch data of a decorated germ: intersection orders between branches
/// and the decorations `l_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedGerm {
    pub branches: usize,
    pub l: Vec<u64>,
    /// Symmetric; the diagonal is unused and set to 0.
    pub orders: Vec<Vec<u64>>,
}

/// The chain extended by `a_1 - 1` new vertices at `v_1` and `a_i - 2` at
/// every other `v_i`, each new vertex carrying one arrowhead (branch).
struct GermGraph {
    adj: Vec<Vec<usize>>,
    root: usize,
    leaves: Vec<usize>,
}

impl GermGraph {
    fn new(a: &[u64]) -> Self {
        let m = a.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in 1..m {
            adj[i - 1].push(i);
            adj[i].push(i - 1);
        }
        let mut leaves = Vec::new();
        for (i, &ai) in a.iter().enumerate() {
            let extra = if i == 0 { ai - 1 } else { ai - 2 };
            for _ in 0..extra {
                let v = adj.len();
                adj.push(vec![i]);
                adj[i].push(v);
                leaves.push(v);
            }
        }
        GermGraph {
            adj,
            root: m - 1,
            leaves,
        }
    }

    /// Vertices on the path from `v` to the root.
    fn geodesic(&self, v: usize) -> Vec<bool> {
        let mut prev = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([self.root]);
        prev[self.root] = self.root;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut on = vec![false; self.adj.len()];
        let mut cur = v;
        loop {
            on[cur] = true;
            if cur == self.root {
                break;
            }
            cur = prev[cur];
        }
        on
    }
}

/// Decorated germ of the cyclic quotient singularity `p/q`.
pub fn decorated_germ(p: u64, q: u64) -> Result<DecoratedGerm> {
    let a = arith::hj_expand(p, q)?;
    let g = GermGraph::new(a.entries());
    let paths: Vec<Vec<bool>> = g.leaves.iter().map(|&v| g.geodesic(v)).collect();
    let count = |x: &[bool]| x.iter().filter(|&&b| b).count() as u64;
    let l = paths.iter().map(|x| count(x)).collect();
    let n = paths.len();
    let orders = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0
                    } else {
                        paths[i]
                            .iter()
                            .zip(&paths[j])
                            .filter(|(x, y)| **x && **y)
                            .count() as u64
                    }
                })
                .collect()
        })
        .collect();
    Ok(DecoratedGerm {
        branches: n,
        l,
        orders,
    })
}

/// Tuple and twist multiplicities of the Artin filling.
pub fn artin_tuple(p: u64, q: u64) -> Result<(CfString, Vec<u64>, BlowupSequence)> {
    arith::validate_pair(p, q)?;
    let b = arith::hj_expand(p, p - q)?;
    let k = b.len();
    let (n, seq) = if k == 1 {
        (vec![0], BlowupSequence(Vec::new()))
    } else {
        let mut n = vec![2; k];
        n[0] = 1;
        n[k - 1] = 1;
        let mut steps = vec![BlowupStep::Initial];
        steps.extend(std::iter::repeat_n(BlowupStep::Exterior, k - 2));
        (n, BlowupSequence(steps))
    };
    let m = n.iter().zip(b.entries()).map(|(x, y)| y - x).collect();
    Ok((b, m, seq))
}

/// Diagram of the filling with `n = (1,2,...,2,1)`.
pub fn artin_diagram(p: u64, q: u64) -> Result<WiringDiagram> {
    let (_, m, seq) = artin_tuple(p, q)?;
    extend_diagram(&build_diagram(&seq)?, &m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScottStep {
    pub from: String,
    pub to: String,
    pub op: String,
    pub diagram_ok: bool,
    pub germ_ok: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScottReport {
    pub steps: Vec<ScottStep>,
}

impl ScottReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.diagram_ok && s.germ_ok)
    }

    pub fn first_failure(&self) -> Option<&ScottStep> {
        self.steps.iter().find(|s| !(s.diagram_ok && s.germ_ok))
    }
}

fn full_column(i: &IncidenceMatrix) -> Option<usize> {
    (0..i.n_cols())
        .rev()
        .find(|&j| i.column(j).iter().all(|&b| b == 1))
}

/// Expected matrix after incrementing the last entry: a new bottom wire
/// through the last full point, plus a free point on it.
fn grow_wire(old: &IncidenceMatrix) -> Option<IncidenceMatrix> {
    let j = full_column(old)?;
    let k = old.n_rows();
    let mut out = old.clone();
    out.rows.push(k + 1);
    out.bits
        .push((0..old.n_cols()).map(|c| u8::from(c == j)).collect());
    out.cols.push(EventLabel::X(k));
    for (r, row) in out.bits.iter_mut().enumerate() {
        row.push(u8::from(r == k));
    }
    Some(out)
}

/// Expected matrix after appending a 2: one more point through every wire.
fn grow_point(old: &IncidenceMatrix) -> IncidenceMatrix {
    let mut out = old.clone();
    let k = old.n_rows();
    let copy = old
        .cols
        .iter()
        .filter(|c| matches!(c, EventLabel::Y { s, .. } if *s == k))
        .count()
        + 1;
    out.cols.push(EventLabel::Y { s: k, copy });
    for row in out.bits.iter_mut() {
        row.push(1);
    }
    out
}

fn pair_of(t: &CfString) -> Result<(u64, u64)> {
    arith::hj_value(t).ok_or_else(|| Error::Validation(format!("{t} does not evaluate to p/q > 1")))
}

/// Replays the chain from `[2]` to the string of `p/q`, checking at each
/// step that the Artin diagram changes by the expected local move and that
/// appending a 2 raises every decoration and intersection order by one.
pub fn scott_induction_check(p: u64, q: u64) -> Result<ScottReport> {
    scott_chain_check(&arith::hj_expand(p, q)?)
}

pub fn scott_chain_check(target: &CfString) -> Result<ScottReport> {
    let chain = arith::elementary_chain(target)?;
    let mut report = ScottReport::default();
    for pair in chain.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let append = to.len() > from.len();
        let (p0, q0) = pair_of(from)?;
        let (p1, q1) = pair_of(to)?;
        let old = incidence_readoff(&artin_diagram(p0, q0)?);
        let new = incidence_readoff(&artin_diagram(p1, q1)?);
        let diagram_ok = if append {
            comb_equivalent(&grow_point(&old), &new)
        } else {
            grow_wire(&old).is_some_and(|e| comb_equivalent(&e, &new))
        };
        let g0 = decorated_germ(p0, q0)?;
        let g1 = decorated_germ(p1, q1)?;
        let germ_ok = if append {
            g1.branches == g0.branches
                && g1.l.iter().zip(&g0.l).all(|(x, y)| *x == y + 1)
                && (0..g0.branches).all(|i| {
                    (0..g0.branches).all(|j| i == j || g1.orders[i][j] == g0.orders[i][j] + 1)
                })
        } else {
            g1.branches == g0.branches + 1
        };
        report.steps.push(ScottStep {
            from: from.to_string(),
            to: to.to_string(),
            op: if append { "ii" } else { "i" }.to_string(),
            diagram_ok,
            germ_ok,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_germ() {
        let g = decorated_germ(2, 1).unwrap();
        assert_eq!(g.branches, 1);
        assert_eq!(g.l, vec![2]);
    }

    #[test]
    fn worked_germ() {
        let g = decorated_germ(56, 17).unwrap();
        assert_eq!(g.branches, 5);
        assert_eq!(
            DualGraph::new(56, 17).unwrap().weights,
            vec![-4, -2, -2, -4, -2]
        );
        // three branches at v_1, two at v_4
        assert_eq!(g.l, vec![6, 6, 6, 3, 3]);
        assert_eq!(g.orders[0][1], 5);
        assert_eq!(g.orders[0][3], 2);
        assert_eq!(g.orders[3][4], 2);
    }

    #[test]
    fn germ_matches_closed_form() {
        for p in 2..=40u64 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let a = arith::hj_expand(p, q).unwrap();
                let m = a.len() as u64;
                let at: Vec<u64> = a
                    .entries()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &ai)| {
                        std::iter::repeat_n(
                            i as u64 + 1,
                            (if i == 0 { ai - 1 } else { ai - 2 }) as usize,
                        )
                    })
                    .collect();
                let g = decorated_germ(p, q).unwrap();
                assert_eq!(g.l, at.iter().map(|&i| 1 + m - i + 1).collect::<Vec<_>>());
                for x in 0..at.len() {
                    for y in 0..at.len() {
                        if x != y {
                            assert_eq!(g.orders[x][y], m - at[x].max(at[y]) + 1);
                        }
                    }
                }
                let k = arith::hj_expand(p, p - q).unwrap().len();
                assert_eq!(g.branches, k);
            }
        }
    }

    #[test]
    fn artin_examples() {
        let w = artin_diagram(56, 17).unwrap();
        let labels: Vec<String> = w.events.iter().map(|e| e.label.to_string()).collect();
        assert_eq!(
            labels,
            ["x1", "x2", "x3", "x4", "y1.1", "y3.1", "y3.2", "y3.3", "y5.1", "y5.2"]
        );
        let w = artin_diagram(5, 4).unwrap();
        assert_eq!(w.k, 1);
        assert_eq!(w.events.len(), 5);
    }

    #[test]
    fn worked_chain() {
        let r = scott_induction_check(56, 17).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.steps.first().unwrap().from, "[2]");
        assert_eq!(r.steps.last().unwrap().to, "[4,2,2,4,2]");
        assert!(scott_induction_check(2, 1).unwrap().steps.is_empty());
    }
}
