//! Vanishing cycles from wiring diagrams and from the stabilization and
//! surgery algorithms, and their comparison.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::CfString;
use crate::blowup::{BlowupSequence, BlowupStep, Filling};
use crate::error::{Error, Result};
use crate::fgroup::{
    dehn_twist, mirror_involution, recognize, CurveClass, CurveForm, DiskAutomorphism, FreeWord,
    MappingWord, Move, Side, Sign,
};
use crate::wiring::{build_diagram, extend_diagram, EventLabel, WiringDiagram};

/// The two orientation conventions: which half-twist sign counts as
/// counterclockwise (and hence which Dehn twist is right-handed), and the
/// side on which the stabilization curves pass the skipped holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conventions {
    pub chirality: Sign,
    pub alpha_side: Side,
}

impl Conventions {
    pub const CALIBRATED: Conventions = Conventions {
        chirality: Sign::Plus,
        alpha_side: Side::Left,
    };

    pub fn with_chirality(self, chirality: Sign) -> Self {
        Conventions { chirality, ..self }
    }

    fn ccw(self, a: usize, b: usize) -> Move {
        Move::HalfTwist {
            a,
            b,
            sign: self.chirality,
        }
    }
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions::CALIBRATED
    }
}

/// A curve presented as the image `ψ(∂[a,b])` of a round curve, so that a
/// Dehn twist along it is available.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedCycle {
    pub label: String,
    pub run: (usize, usize),
    pub provenance: MappingWord,
    pub class: CurveClass,
}

impl MarkedCycle {
    pub fn new(label: impl Into<String>, run: (usize, usize), provenance: MappingWord) -> Self {
        let class = CurveClass::new(&provenance.apply_to_class(&FreeWord::run(run.0, run.1)));
        MarkedCycle {
            label: label.into(),
            run,
            provenance,
            class,
        }
    }

    pub fn convex(label: impl Into<String>, k: usize, a: usize, b: usize) -> Self {
        MarkedCycle::new(label, (a, b), MappingWord::identity(k))
    }

    /// Realizes a standard curve form by at most one half-twist of a run.
    pub fn from_form(label: impl Into<String>, k: usize, form: CurveForm) -> Self {
        match form {
            CurveForm::Convex { a, b } => MarkedCycle::convex(label, k, a, b),
            CurveForm::SideConvex {
                first: (a, b),
                second: (c, d),
                side,
            } => {
                let mv = Move::HalfTwist {
                    a: b + 1,
                    b: d,
                    sign: side.sign(),
                };
                MarkedCycle::new(label, (a, b + d - c + 1), MappingWord::single(k, mv))
            }
        }
    }

    pub fn k(&self) -> usize {
        self.provenance.k
    }

    pub fn form(&self) -> Option<CurveForm> {
        recognize(self.class.word(), self.k())
    }

    /// Right-handed Dehn twist along the curve.
    pub fn dehn_twist(&self, conv: Conventions) -> DiskAutomorphism {
        dehn_twist(&self.provenance, self.run.0, self.run.1, conv.chirality)
            .expect("run fits the disk")
    }

    /// Holes enclosed, read from the abelianized class.
    pub fn enclosed_holes(&self) -> Vec<usize> {
        let sums = self.class.word().exponent_sums(self.k());
        (1..=self.k()).filter(|&i| sums[i - 1] != 0).collect()
    }
}

/// Cycles in the order the Dehn-twist product is written, leftmost first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Factorization {
    pub k: usize,
    pub cycles: Vec<MarkedCycle>,
}

impl Factorization {
    pub fn classes(&self) -> Vec<&CurveClass> {
        self.cycles.iter().map(|c| &c.class).collect()
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn by_label(&self) -> BTreeMap<&str, &MarkedCycle> {
        self.cycles.iter().map(|c| (c.label.as_str(), c)).collect()
    }
}

/// Convex curve of an event: the run of positions its wires occupy.
pub fn delta_of(w: &WiringDiagram, event: usize) -> Result<MarkedCycle> {
    let (a, b) = w.block_positions(event)?;
    Ok(MarkedCycle::convex(
        w.events[event].label.to_string(),
        w.k,
        a,
        b,
    ))
}

fn extract(w: &WiringDiagram, conv: Conventions, shortcut: bool) -> Result<Factorization> {
    let blocks = w.all_blocks()?;
    let mut cycles = Vec::with_capacity(blocks.len());
    let mut all = MappingWord::identity(w.k);
    let mut x_only = MappingWord::identity(w.k);
    for (e, &(a, b)) in w.events.iter().zip(&blocks) {
        let psi = if shortcut && !e.label.is_x() {
            &x_only
        } else {
            &all
        };
        cycles.push(MarkedCycle::new(e.label.to_string(), (a, b), psi.clone()));
        all.moves.push(conv.ccw(a, b));
        if e.label.is_x() {
            x_only.moves.push(conv.ccw(a, b));
        }
    }
    cycles.reverse();
    Ok(Factorization { k: w.k, cycles })
}

/// Vanishing cycles of the marked points: the convex curve of each point
/// pushed through the half-twists of every point to its right.
pub fn ps_cycles(w: &WiringDiagram, conv: Conventions) -> Result<Factorization> {
    extract(w, conv, false)
}

/// Same as [`ps_cycles`] but pushes `y` curves through the `x` half-twists
/// only.
pub fn ps_cycles_shortcut(w: &WiringDiagram, conv: Conventions) -> Result<Factorization> {
    extract(w, conv, true)
}

/// Tracks which final holes descend from each stage hole.
struct HoleTree {
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
}

impl HoleTree {
    fn new() -> Self {
        HoleTree {
            order: Vec::new(),
            parent: vec![None],
        }
    }

    fn add(&mut self, parent: Option<usize>, at: usize) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.order.insert(at, id);
        id
    }

    /// Whether `h` is `root` or was split off from it by a hole created at
    /// or after `stamp`.
    fn descends(&self, h: usize, root: usize, stamp: usize) -> bool {
        let mut cur = h;
        loop {
            if cur == root {
                return true;
            }
            match self.parent[cur] {
                Some(p) if p == root => return cur >= stamp,
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Final positions of the holes that the stage holes `roots` had become
    /// by the end, as a single run.
    fn run(&self, roots: &[usize], stamp: usize) -> (usize, usize) {
        let pos: Vec<usize> = (1..=self.order.len())
            .filter(|&i| {
                roots
                    .iter()
                    .any(|&r| self.descends(self.order[i - 1], r, stamp))
            })
            .collect();
        debug_assert!(pos.windows(2).all(|p| p[1] == p[0] + 1), "{pos:?}");
        (pos[0], *pos.last().expect("nonempty"))
    }

    fn stamp(&self) -> usize {
        self.parent.len()
    }
}

/// Stabilization and surgery cycles:
/// `α_1, ..., α_{k-1}, γ_1^{m_1}, ..., γ_k^{m_k}`.
pub fn bo_cycles(seq: &BlowupSequence, b: &CfString, conv: Conventions) -> Result<Factorization> {
    let n = seq.replay()?;
    if n.len() != b.len() && !(seq.is_empty() && b.len() == 1) {
        return Err(Error::LengthMismatch {
            expected: b.len(),
            got: n.len(),
        });
    }
    let k = b.len();
    let n_entries: Vec<u64> = if seq.is_empty() { vec![0] } else { n.0.clone() };
    if n_entries.iter().zip(b.entries()).any(|(x, y)| x > y) {
        return Err(Error::Validation(format!("{n} is not bounded by {b}")));
    }

    // stage curves as (first holes, second holes, stamp); second is empty
    // for convex curves
    let mut tree = HoleTree::new();
    let mut stage: Vec<(Vec<usize>, Vec<usize>, usize)> = Vec::new();
    for (r, &step) in seq.steps().iter().enumerate() {
        match step {
            BlowupStep::Initial => {
                tree.add(None, 0);
                let h2 = tree.add(None, 1);
                stage.push((vec![h2], vec![], tree.stamp()));
            }
            BlowupStep::Exterior => {
                let at = tree.order.len();
                let h = tree.add(None, at);
                stage.push((vec![h], vec![], tree.stamp()));
            }
            BlowupStep::Interior(i) => {
                let len = r + 1;
                if i == 0 || i >= len {
                    return Err(Error::InvalidStep {
                        step: step.to_string(),
                        len,
                    });
                }
                let roots = tree.order.clone();
                let split = roots[i];
                let at = tree
                    .order
                    .iter()
                    .position(|&h| h == split)
                    .expect("present")
                    + 1;
                let h = tree.add(Some(split), at);
                stage.push((roots[..i].to_vec(), vec![h], tree.stamp()));
            }
        }
    }

    let mut cycles = Vec::new();
    for (t, (first, second, stamp)) in stage.iter().enumerate() {
        let label = format!("alpha{}", t + 1);
        let (a, bb) = tree.run(first, *stamp);
        let form = if second.is_empty() {
            CurveForm::convex(a, bb)
        } else {
            let (c, d) = tree.run(second, *stamp);
            CurveForm::side_convex((a, bb), (c, d), conv.alpha_side)
        };
        cycles.push(MarkedCycle::from_form(label, k, form));
    }
    for s in 1..=k {
        let ms = b.entries()[s - 1] - n_entries[s - 1];
        for c in 1..=ms {
            cycles.push(MarkedCycle::convex(format!("gamma{s}.{c}"), k, 1, s));
        }
    }
    Ok(Factorization { k, cycles })
}

/// Reverses the factorization and replaces every cycle by its mirror image.
pub fn lemma32_transform(f: &Factorization) -> Factorization {
    let cycles = f
        .cycles
        .iter()
        .rev()
        .map(|c| {
            MarkedCycle::new(
                c.label.clone(),
                c.run,
                c.provenance.pre_compose(Move::Mirror),
            )
        })
        .collect();
    Factorization { k: f.k, cycles }
}

/// Product of the Dehn twists, rightmost factor acting first.
pub fn total_monodromy(f: &Factorization, conv: Conventions) -> DiskAutomorphism {
    let mut acc = DiskAutomorphism::identity(f.k);
    acc.provenance = None;
    for c in &f.cycles {
        let mut d = c.dehn_twist(conv);
        d.provenance = None;
        acc = acc.compose(&d);
    }
    acc
}

/// Class of the mirror image of a curve.
pub fn mirror_class(c: &CurveClass, k: usize) -> CurveClass {
    CurveClass::new(&mirror_involution(k).apply(c.word()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCheck {
    pub label: String,
    pub class_word: String,
    pub matches: bool,
}

/// Comparison of the two pipelines for one filling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingReport {
    pub p: u64,
    pub q: u64,
    pub n: Vec<u64>,
    pub m: Vec<u64>,
    pub cycles: Vec<CycleCheck>,
    pub monodromy_ok: bool,
}

impl FillingReport {
    pub fn passed(&self) -> bool {
        self.monodromy_ok && self.cycles.iter().all(|c| c.matches)
    }
}

pub fn filling_diagram(f: &Filling) -> Result<WiringDiagram> {
    extend_diagram(&build_diagram(&f.sequence)?, &f.m)
}

/// Checks `V(y_s) = γ_s` and `V(x_t) = mirror(α_t)` for every marked point.
pub fn compare_cycles(
    f: &Filling,
    conv: Conventions,
) -> Result<(Factorization, Factorization, Vec<CycleCheck>)> {
    let w = filling_diagram(f)?;
    let ps = ps_cycles(&w, conv)?;
    let bo = bo_cycles(&f.sequence, &f.b, conv)?;
    let bo_map = bo.by_label();
    let checks = ps
        .cycles
        .iter()
        .rev()
        .map(|c| {
            let target = match c.label.parse::<EventLabel>() {
                Ok(EventLabel::X(t)) => bo_map
                    .get(format!("alpha{t}").as_str())
                    .map(|a| mirror_class(&a.class, f.k())),
                Ok(EventLabel::Y { s, .. }) => Some(CurveClass::new(&FreeWord::run(1, s))),
                Err(_) => None,
            };
            CycleCheck {
                label: c.label.clone(),
                class_word: c.class.to_string(),
                matches: target.as_ref() == Some(&c.class),
            }
        })
        .collect();
    Ok((ps, bo, checks))
}

/// Full comparison including the monodromy of both factorizations.
pub fn verify_prop52(f: &Filling, conv: Conventions) -> Result<FillingReport> {
    let (ps, bo, cycles) = compare_cycles(f, conv)?;
    let total = total_monodromy(&ps, conv);
    let other = total_monodromy(&lemma32_transform(&bo), conv);
    let monodromy_ok = total.preserves_boundary() && total == other;
    Ok(FillingReport {
        p: f.p,
        q: f.q,
        n: f.n.0.clone(),
        m: f.m.clone(),
        cycles,
        monodromy_ok,
    })
}

/// Outcome of tracking the curves `Ψ_r(γ_s)` through the `x` points.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LobeReport {
    /// Number of intermediate curves examined.
    pub curves: usize,
    pub violations: Vec<String>,
}

impl LobeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pulls each `γ_s` back through the clockwise half-twists of `x_1, x_2, ...`
/// and checks that every intermediate curve is convex or side-convex, with
/// the side flipping exactly when the current `x` curve contains the
/// tracked image of hole `s`. Convex curves fit either side, so the side is
/// compared with the parity of flips since the last side-convex curve.
pub fn check_lobes(w: &WiringDiagram, conv: Conventions) -> Result<LobeReport> {
    let blocks: Vec<(usize, usize)> = w
        .all_blocks()?
        .into_iter()
        .zip(&w.events)
        .filter(|(_, e)| e.label.is_x())
        .map(|(b, _)| b)
        .collect();
    let k = w.k;
    let mut report = LobeReport::default();
    for s in 1..=k {
        let mut curve = FreeWord::run(1, s);
        let mut hole = s;
        let mut expected: Option<Side> = None;
        for (r, &(a, b)) in blocks.iter().enumerate() {
            let contains = (a..=b).contains(&hole);
            let mv = Move::HalfTwist {
                a,
                b,
                sign: conv.chirality.flip(),
            };
            curve = MappingWord::single(k, mv).apply_to_class(&curve);
            hole = mv.permute_hole(hole);
            if contains {
                expected = expected.map(Side::flip);
            }
            report.curves += 1;
            match recognize(&curve, k) {
                None => report
                    .violations
                    .push(format!("gamma_{s},{}: {curve} is not side-convex", r + 1)),
                Some(CurveForm::SideConvex { side, .. }) => {
                    if expected.is_some_and(|e| e != side) {
                        report.violations.push(format!(
                            "gamma_{s},{}: side {side:?} breaks the flip rule",
                            r + 1
                        ));
                    }
                    expected = Some(side);
                }
                Some(CurveForm::Convex { .. }) => {}
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{canonical_sequence, BlowupTuple};

    const CONV: Conventions = Conventions::CALIBRATED;

    fn filling(p: u64, q: u64, n: &[u64]) -> Filling {
        Filling::new(p, q, BlowupTuple::new(n.to_vec())).unwrap()
    }

    fn class(s: &str) -> CurveClass {
        CurveClass::new(&s.parse().unwrap())
    }

    #[test]
    fn convex_curves_of_events() {
        let f = filling(56, 17, &[2, 1, 4, 1, 2]);
        let w = filling_diagram(&f).unwrap();
        assert_eq!(delta_of(&w, 1).unwrap().run, (4, 5));
        assert_eq!(delta_of(&w, 7).unwrap().run, (1, 5));
    }

    #[test]
    fn stabilization_curves() {
        let b = CfString::new(vec![2, 2, 2]).unwrap();
        let f = bo_cycles(
            &canonical_sequence(&BlowupTuple::new(vec![1, 2, 1])).unwrap(),
            &b,
            CONV,
        )
        .unwrap();
        assert_eq!(f.cycles[0].class, class("g2"));
        assert_eq!(f.cycles[1].class, class("g3"));
        let f = bo_cycles(
            &canonical_sequence(&BlowupTuple::new(vec![2, 1, 2])).unwrap(),
            &b,
            CONV,
        )
        .unwrap();
        assert_eq!(f.cycles[0].class, class("g2 g3"));
        assert_eq!(f.cycles[1].enclosed_holes(), vec![1, 3]);

        let f = filling(56, 17, &[2, 1, 4, 1, 2]);
        let bo = bo_cycles(&f.sequence, &f.b, CONV).unwrap();
        let gammas: Vec<_> = bo.cycles[4..].iter().map(|c| c.class.clone()).collect();
        let want: Vec<_> = (2..=5)
            .map(|s| CurveClass::new(&FreeWord::run(1, s)))
            .collect();
        assert_eq!(gammas, want);
        assert!(bo.cycles.iter().all(|c| c.form().is_some()));
    }

    #[test]
    fn worked_factorization_order() {
        let f = filling(56, 17, &[2, 1, 4, 1, 2]);
        let ps = ps_cycles(&filling_diagram(&f).unwrap(), CONV).unwrap();
        let bo = bo_cycles(&f.sequence, &f.b, CONV).unwrap();
        let t = lemma32_transform(&bo);
        assert_eq!(ps.classes(), t.classes());
        let labels: Vec<&str> = ps.cycles.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(
            labels,
            ["y5.1", "y4.1", "y3.1", "y2.1", "x4", "x3", "x2", "x1"]
        );
        assert_eq!(lemma32_transform(&t).classes(), bo.classes());
        assert!(lemma32_transform(&Factorization::default()).is_empty());
    }

    #[test]
    fn worked_fillings_verify() {
        for n in [[2, 1, 4, 1, 2], [1, 2, 2, 2, 1]] {
            let r = verify_prop52(&filling(56, 17, &n), CONV).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = verify_prop52(&filling(56, 17, &[1, 2, 2, 2, 1]), CONV).unwrap();
        assert_eq!(r.cycles.len(), 10);
    }

    #[test]
    fn flipped_chirality_fails_worked_case() {
        let r = verify_prop52(
            &filling(56, 17, &[2, 1, 4, 1, 2]),
            CONV.with_chirality(Sign::Minus),
        )
        .unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn shortcut_agrees() {
        let f = filling(56, 17, &[1, 2, 2, 2, 1]);
        let w = filling_diagram(&f).unwrap();
        assert_eq!(
            ps_cycles(&w, CONV).unwrap().classes(),
            ps_cycles_shortcut(&w, CONV).unwrap().classes()
        );
        let bare = build_diagram(&f.sequence).unwrap();
        assert_eq!(
            ps_cycles(&bare, CONV).unwrap(),
            ps_cycles_shortcut(&bare, CONV).unwrap()
        );
    }

    #[test]
    fn empty_product_is_identity() {
        assert!(total_monodromy(
            &Factorization {
                k: 3,
                cycles: vec![]
            },
            CONV
        )
        .is_identity());
    }

    #[test]
    fn degenerate_case() {
        let f = filling(5, 4, &[0]);
        let r = verify_prop52(&f, CONV).unwrap();
        assert!(r.passed());
        assert_eq!(r.cycles.len(), 5);
    }

    #[test]
    fn lobes_on_worked_diagram() {
        let f = filling(56, 17, &[2, 1, 4, 1, 2]);
        let r = check_lobes(&build_diagram(&f.sequence).unwrap(), CONV).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.curves, 20);
    }
}
