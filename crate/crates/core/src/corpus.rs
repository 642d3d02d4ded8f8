//! Whole-corpus verification over all coprime pairs up to a bound.

use serde::{Deserialize, Serialize};

use crate::blowup::{all_sequences, enumerate_fillings, BlowupTuple, Filling};
use crate::cycles::{
    check_lobes, ps_cycles, ps_cycles_shortcut, total_monodromy, verify_prop52, Conventions,
    FillingReport,
};
use crate::error::Result;
use crate::germ::artin_diagram;
use crate::incidence::{
    extend_columns, filling_invariants, incidence_iterative, incidence_readoff, is_cqs,
};
use crate::wiring::{build_diagram, check_lemma41, extend_diagram};

/// All `(p, q)` with `2 <= p <= pmax`, `1 <= q < p` and `gcd(p, q) = 1`.
pub fn coprime_pairs(pmax: u64) -> Vec<(u64, u64)> {
    (2..=pmax)
        .flat_map(|p| {
            (1..p)
                .filter(move |&q| num_integer::gcd(p, q) == 1)
                .map(move |q| (p, q))
        })
        .collect()
}

/// Every check run on one filling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingCheck {
    pub report: FillingReport,
    pub lemma41: bool,
    pub shortcut: bool,
    pub incidence: bool,
    pub cqs: bool,
    pub lobes: bool,
    pub euler: bool,
    pub hole_sets: bool,
    pub sequence_independent: bool,
}

impl FillingCheck {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.report.cycles.iter().all(|c| c.matches) {
            out.push("cycles");
        }
        for (ok, name) in [
            (self.report.monodromy_ok, "monodromy"),
            (self.lemma41, "lemma41"),
            (self.shortcut, "shortcut"),
            (self.incidence, "incidence"),
            (self.cqs, "cqs"),
            (self.lobes, "lobes"),
            (self.euler, "euler"),
            (self.hole_sets, "hole_sets"),
            (self.sequence_independent, "sequence_independent"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Checks for one `(p, q)`: every filling, monodromy agreement across
/// fillings and the Artin filling's homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub p: u64,
    pub q: u64,
    pub fillings: Vec<FillingCheck>,
    pub monodromy_consistent: bool,
    pub artin_homology: bool,
}

impl PairCheck {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in &self.fillings {
            for name in f.failures() {
                out.push(format!(
                    "{}/{} n={}: {name}",
                    self.p,
                    self.q,
                    BlowupTuple::new(f.report.n.clone())
                ));
            }
        }
        if !self.monodromy_consistent {
            out.push(format!(
                "{}/{}: total monodromy differs between fillings",
                self.p, self.q
            ));
        }
        if !self.artin_homology {
            out.push(format!("{}/{}: artin homology", self.p, self.q));
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Number of alternative blowup sequences compared per filling.
const ALT_SEQUENCES: usize = 3;

pub fn check_filling(f: &Filling, conv: Conventions) -> Result<FillingCheck> {
    let report = verify_prop52(f, conv)?;
    let bare = build_diagram(&f.sequence)?;
    let w = extend_diagram(&bare, &f.m)?;
    let ps = ps_cycles(&w, conv)?;
    let shortcut = ps_cycles_shortcut(&w, conv)?.classes() == ps.classes();
    let read = incidence_readoff(&w);
    let incidence = extend_columns(&incidence_iterative(&f.sequence)?, &f.m)? == read;
    let sum_m: u64 = f.m.iter().sum();
    let inv = filling_invariants(&read, &[])?;
    let euler = inv.euler == sum_m as i64;

    // each vanishing cycle encloses the holes at its wires' right-edge rows
    let blocks = w.all_blocks()?;
    let mut enclosed: Vec<Vec<usize>> = ps.cycles.iter().map(|c| c.enclosed_holes()).collect();
    let mut rows: Vec<Vec<usize>> = w
        .events
        .iter()
        .map(|e| {
            let mut v: Vec<usize> = e
                .participants
                .iter()
                .map(|p| 1 + w.right_order.iter().position(|x| x == p).expect("wire"))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    enclosed.sort();
    rows.sort();
    let hole_sets = enclosed == rows && blocks.len() == ps.len();

    let total = total_monodromy(&ps, conv);
    let mut sequence_independent = true;
    for seq in all_sequences(&f.n, ALT_SEQUENCES + 1)
        .into_iter()
        .filter(|s| *s != f.sequence)
        .take(ALT_SEQUENCES)
    {
        let alt = extend_diagram(&build_diagram(&seq)?, &f.m)?;
        sequence_independent &= total_monodromy(&ps_cycles(&alt, conv)?, conv) == total;
    }

    Ok(FillingCheck {
        report,
        lemma41: check_lemma41(&bare).passed(),
        shortcut,
        incidence,
        cqs: f.k() < 2 || is_cqs(&read),
        lobes: check_lobes(&bare, conv)?.passed(),
        euler,
        hole_sets,
        sequence_independent,
    })
}

pub fn check_pair(p: u64, q: u64, conv: Conventions) -> Result<PairCheck> {
    let fillings = enumerate_fillings(p, q)?;
    let mut checks = Vec::with_capacity(fillings.len());
    let mut totals = Vec::with_capacity(fillings.len());
    for f in &fillings {
        checks.push(check_filling(f, conv)?);
        let w = extend_diagram(&build_diagram(&f.sequence)?, &f.m)?;
        totals.push(total_monodromy(&ps_cycles(&w, conv)?, conv));
    }
    let monodromy_consistent =
        totals.windows(2).all(|t| t[0] == t[1]) && totals.iter().all(|t| t.preserves_boundary());
    let inv = filling_invariants(&incidence_readoff(&artin_diagram(p, q)?), &[])?;
    let a_len = crate::arith::hj_expand(p, q)?.len();
    let artin_homology = inv.h1_trivial() && inv.h2_rank == a_len;
    Ok(PairCheck {
        p,
        q,
        fillings: checks,
        monodromy_consistent,
        artin_homology,
    })
}
