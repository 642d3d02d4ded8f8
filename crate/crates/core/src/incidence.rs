//! Incidence matrices of wiring diagrams and the homology they determine.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupSequence, BlowupStep};
use crate::error::{Error, Result};
use crate::fgroup::FreeWord;
use crate::wiring::{EventLabel, WiringDiagram};

/// 0/1 matrix with wires as rows (right-edge order, top first) and marked
/// points as columns (right to left).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IncidenceMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<EventLabel>,
    pub bits: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        self.bits.iter().map(|r| r[j]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.cols {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
        for (w, row) in self.rows.iter().zip(&self.bits) {
            write!(out, "w{w}").unwrap();
            for b in row {
                write!(out, ",{b}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows.iter().map(|w| format!("w{w}")).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "bits": self.bits,
        })
    }

    /// Same matrix with rows in the opposite order.
    pub fn reversed_rows(&self) -> IncidenceMatrix {
        IncidenceMatrix {
            rows: self.rows.iter().rev().copied().collect(),
            cols: self.cols.clone(),
            bits: self.bits.iter().rev().cloned().collect(),
        }
    }

    fn as_integer(&self) -> Vec<Vec<BigInt>> {
        self.bits
            .iter()
            .map(|r| r.iter().map(|&b| BigInt::from(b)).collect())
            .collect()
    }
}

/// Tabulates the participants of every event of a diagram.
pub fn incidence_readoff(w: &WiringDiagram) -> IncidenceMatrix {
    let bits = w
        .right_order
        .iter()
        .map(|&wire| {
            w.events
                .iter()
                .map(|e| u8::from(e.contains(wire)))
                .collect()
        })
        .collect();
    IncidenceMatrix {
        rows: w.right_order.clone(),
        cols: w.events.iter().map(|e| e.label).collect(),
        bits,
    }
}

/// Builds the construction-stage matrix directly from a blowup sequence.
pub fn incidence_iterative(seq: &BlowupSequence) -> Result<IncidenceMatrix> {
    let steps = seq.steps();
    let Some((first, rest)) = steps.split_first() else {
        return Ok(IncidenceMatrix {
            rows: vec![1],
            cols: vec![],
            bits: vec![vec![]],
        });
    };
    if *first != BlowupStep::Initial {
        return Err(Error::InvalidStep {
            step: first.to_string(),
            len: 1,
        });
    }
    let mut m = IncidenceMatrix {
        rows: vec![1, 2],
        cols: vec![EventLabel::X(1)],
        bits: vec![vec![0], vec![1]],
    };
    for &step in rest {
        let r = m.n_rows();
        match step {
            BlowupStep::Exterior => {
                m.rows.push(r + 1);
                m.bits.push(vec![0; r - 1]);
                for (idx, row) in m.bits.iter_mut().enumerate() {
                    row.push(u8::from(idx == r));
                }
            }
            BlowupStep::Interior(i) if i >= 1 && i < r => {
                m.rows.insert(i + 1, r + 1);
                let copy = m.bits[i].clone();
                m.bits.insert(i + 1, copy);
                for (idx, row) in m.bits.iter_mut().enumerate() {
                    row.push(u8::from(idx < i || idx == i + 1));
                }
            }
            s => {
                return Err(Error::InvalidStep {
                    step: s.to_string(),
                    len: r,
                })
            }
        }
        m.cols.push(EventLabel::X(r));
    }
    Ok(m)
}

/// Appends `m_s` columns with `s` leading ones for each `s`.
pub fn extend_columns(i: &IncidenceMatrix, m: &[u64]) -> Result<IncidenceMatrix> {
    let k = i.n_rows();
    if m.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: m.len(),
        });
    }
    let mut out = i.clone();
    for (s, &ms) in (1..=k).zip(m) {
        for copy in 1..=ms as usize {
            out.cols.push(EventLabel::Y { s, copy });
            for (idx, row) in out.bits.iter_mut().enumerate() {
                row.push(u8::from(idx < s));
            }
        }
    }
    Ok(out)
}

/// Whether rows `v_i` satisfy `<v_i,v_j> = <v_i,v_i> - 1` for all `i < j`.
pub fn cqs_condition(i: &IncidenceMatrix) -> bool {
    let dot = |a: &[u8], b: &[u8]| a.iter().zip(b).map(|(x, y)| i64::from(x * y)).sum::<i64>();
    let rows = &i.bits;
    rows.len() >= 2
        && (0..rows.len()).all(|a| {
            let norm = dot(&rows[a], &rows[a]);
            (a + 1..rows.len()).all(|b| dot(&rows[a], &rows[b]) == norm - 1)
        })
}

/// CQS test on the row-reversed matrix.
pub fn is_cqs(i: &IncidenceMatrix) -> bool {
    cqs_condition(&i.reversed_rows())
}

/// Equality up to a permutation of columns.
pub fn comb_equivalent(a: &IncidenceMatrix, b: &IncidenceMatrix) -> bool {
    if a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() {
        return false;
    }
    let cols = |m: &IncidenceMatrix| {
        let mut v: Vec<Vec<u8>> = (0..m.n_cols()).map(|j| m.column(j)).collect();
        v.sort();
        v
    };
    cols(a) == cols(b)
}

/// Diagonal form `D = U A V` with `U`, `V` unimodular and
/// `d_1 | d_2 | ... | d_r` the nonzero diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n)
            .map(|i| self.d[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

/// Invariant factors and rank, as serialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// col_dst += f * col_src
fn add_col(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[src] * f;
        row[dst] += v;
    }
}

/// row_dst += f * row_src
fn add_row(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    let add: Vec<BigInt> = m[src].iter().map(|x| x * f).collect();
    for (x, y) in m[dst].iter_mut().zip(add) {
        *x += y;
    }
}

fn negate_row(m: &mut [Vec<BigInt>], r: usize) {
    for x in m[r].iter_mut() {
        *x = -x.clone();
    }
}

/// Smith normal form over the integers with the transforming matrices.
pub fn smith_decomposition(a: &[Vec<BigInt>]) -> SmithDecomposition {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !d[i][j].is_zero())
            .min_by(|&(i, j), &(x, y)| d[i][j].abs().cmp(&d[x][y].abs()));
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    add_row(&mut d, i, t, &-q.clone());
                    add_row(&mut u, i, t, &-q);
                    if !d[i][t].is_zero() {
                        d.swap(t, i);
                        u.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    add_col(&mut d, j, t, &-q.clone());
                    add_col(&mut v, j, t, &-q);
                    if !d[t][j].is_zero() {
                        swap_cols(&mut d, t, j);
                        swap_cols(&mut v, t, j);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-divisible entry into the pivot row
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    SmithDecomposition { d, u, v }
}

pub fn smith_form(i: &IncidenceMatrix) -> Result<SmithForm> {
    let diag = smith_decomposition(&i.as_integer()).diagonal();
    let rank = diag.len();
    let diagonal = diag
        .iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::Validation(format!("invariant factor {x} exceeds i64")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmithForm { diagonal, rank })
}

/// Finite presentation `<g_1..g_k | relators>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<FreeWord>,
}

/// Topology of the filling read from its Lefschetz handle structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingInvariants {
    pub euler: i64,
    /// Invariant factors of `H_1`; `0` stands for a free summand.
    pub h1: Vec<i64>,
    pub h2_rank: usize,
    pub smith: SmithForm,
    pub pi1: Presentation,
}

impl FillingInvariants {
    pub fn h1_trivial(&self) -> bool {
        self.h1.is_empty()
    }
}

/// `χ = 1 - k + N`; `H_1` is the cokernel of the map sending each point to
/// the sum of its wires, `H_2` the kernel.
pub fn filling_invariants(i: &IncidenceMatrix, relators: &[FreeWord]) -> Result<FillingInvariants> {
    let k = i.n_rows();
    let n = i.n_cols();
    let smith = smith_form(i)?;
    let mut h1: Vec<i64> = smith.diagonal.iter().copied().filter(|&d| d != 1).collect();
    h1.extend(std::iter::repeat_n(0, k - smith.rank));
    Ok(FillingInvariants {
        euler: 1 - k as i64 + n as i64,
        h1,
        h2_rank: n - smith.rank,
        smith,
        pi1: Presentation {
            generators: k,
            relators: relators.to_vec(),
        },
    })
}
