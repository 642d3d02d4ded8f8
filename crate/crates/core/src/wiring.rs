//! Unbraided wiring diagrams built from blowup sequences.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupSequence, BlowupStep};
use crate::error::{Error, Result};

/// Label of a marked point: `x_t` from the construction stage or the
/// `c`-th copy of `y_s` from the twisting stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventLabel {
    X(usize),
    Y { s: usize, copy: usize },
}

impl EventLabel {
    pub fn is_x(self) -> bool {
        matches!(self, EventLabel::X(_))
    }
}

impl fmt::Display for EventLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventLabel::X(t) => write!(f, "x{t}"),
            EventLabel::Y { s, copy } => write!(f, "y{s}.{copy}"),
        }
    }
}

impl FromStr for EventLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad event label {s:?}"));
        let num = |t: &str| -> Result<usize> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(bad)
        };
        if let Some(rest) = s.strip_prefix('x') {
            Ok(EventLabel::X(num(rest)?))
        } else if let Some(rest) = s.strip_prefix('y') {
            let (a, b) = rest.split_once('.').ok_or_else(bad)?;
            Ok(EventLabel::Y {
                s: num(a)?,
                copy: num(b)?,
            })
        } else {
            Err(bad())
        }
    }
}

impl Serialize for EventLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EventLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A marked point together with the wires passing through it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub label: EventLabel,
    pub participants: Vec<usize>,
}

impl Event {
    fn new(label: EventLabel, participants: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = participants.into_iter().collect();
        Event {
            label,
            participants: set.into_iter().collect(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.participants.len() == 1
    }

    pub fn contains(&self, wire: usize) -> bool {
        self.participants.binary_search(&wire).is_ok()
    }
}

/// Wires `1..=k` with events listed from right to left. `right_order` is
/// the top-to-bottom order of the wires at the right edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringDiagram {
    pub k: usize,
    pub right_order: Vec<usize>,
    pub events: Vec<Event>,
}

impl WiringDiagram {
    pub fn x_count(&self) -> usize {
        self.events.iter().filter(|e| e.label.is_x()).count()
    }

    pub fn y_count(&self) -> usize {
        self.events.len() - self.x_count()
    }

    /// Number of marked points on a wire.
    pub fn points_on(&self, wire: usize) -> usize {
        self.events.iter().filter(|e| e.contains(wire)).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: WiringDiagram = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        w.validate()?;
        Ok(w)
    }

    /// Structural sanity: `right_order` is a permutation, every event has
    /// valid participants and every block is consecutive when reached.
    pub fn validate(&self) -> Result<()> {
        let mut seen: Vec<usize> = self.right_order.clone();
        seen.sort_unstable();
        if seen != (1..=self.k).collect::<Vec<_>>() {
            return Err(Error::Validation(format!(
                "right order {:?} is not a permutation of 1..={}",
                self.right_order, self.k
            )));
        }
        for e in &self.events {
            if e.participants.is_empty() || e.participants.iter().any(|&w| w == 0 || w > self.k) {
                return Err(Error::Validation(format!(
                    "event {} has invalid participants",
                    e.label
                )));
            }
        }
        self.order_at(self.events.len()).map(|_| ())
    }

    /// Top-to-bottom wire order after passing the first `cut` events.
    pub fn order_at(&self, cut: usize) -> Result<Vec<usize>> {
        let mut order = self.right_order.clone();
        for e in &self.events[..cut.min(self.events.len())] {
            let (a, b) = block_in(&order, e)?;
            order[a..=b].reverse();
        }
        Ok(order)
    }

    pub fn left_order(&self) -> Result<Vec<usize>> {
        self.order_at(self.events.len())
    }

    /// 1-based position run `[a,b]` occupied by the participants of event
    /// `idx` just to its right.
    pub fn block_positions(&self, idx: usize) -> Result<(usize, usize)> {
        let order = self.order_at(idx)?;
        let (a, b) = block_in(&order, &self.events[idx])?;
        Ok((a + 1, b + 1))
    }

    /// Position runs of every event, in event order.
    pub fn all_blocks(&self) -> Result<Vec<(usize, usize)>> {
        let mut order = self.right_order.clone();
        let mut out = Vec::with_capacity(self.events.len());
        for e in &self.events {
            let (a, b) = block_in(&order, e)?;
            order[a..=b].reverse();
            out.push((a + 1, b + 1));
        }
        Ok(out)
    }
}

fn block_in(order: &[usize], e: &Event) -> Result<(usize, usize)> {
    let pos: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, w)| e.contains(**w))
        .map(|(i, _)| i)
        .collect();
    let fail = || Error::NonConsecutiveBlock {
        event: e.label.to_string(),
        participants: e.participants.clone(),
        order: order.to_vec(),
    };
    match (pos.first(), pos.last()) {
        (Some(&a), Some(&b)) if b - a + 1 == pos.len() && pos.len() == e.participants.len() => {
            Ok((a, b))
        }
        _ => Err(fail()),
    }
}

/// Runs the blowup algorithm on a sequence. The empty sequence gives the
/// single-wire diagram of the one-hole case.
pub fn build_diagram(seq: &BlowupSequence) -> Result<WiringDiagram> {
    let steps = seq.steps();
    let Some((first, rest)) = steps.split_first() else {
        return Ok(WiringDiagram {
            k: 1,
            right_order: vec![1],
            events: Vec::new(),
        });
    };
    if *first != BlowupStep::Initial {
        return Err(Error::InvalidStep {
            step: first.to_string(),
            len: 1,
        });
    }
    let mut right_order = vec![1, 2];
    let mut events = vec![Event::new(EventLabel::X(1), [2])];
    for &step in rest {
        let r = right_order.len();
        let new = r + 1;
        match step {
            BlowupStep::Exterior => {
                right_order.push(new);
                events.push(Event::new(EventLabel::X(r), [new]));
            }
            BlowupStep::Interior(i) if i >= 1 && i < r => {
                let wj = right_order[i];
                right_order.insert(i + 1, new);
                for e in events.iter_mut().filter(|e| e.contains(wj)) {
                    e.participants.push(new);
                }
                let top = right_order[..i].iter().copied();
                events.push(Event::new(EventLabel::X(r), top.chain([new])));
            }
            s => {
                return Err(Error::InvalidStep {
                    step: s.to_string(),
                    len: r,
                })
            }
        }
    }
    Ok(WiringDiagram {
        k: right_order.len(),
        right_order,
        events,
    })
}

/// Twisting stage: for `s = 1..=k` appends `m_s` points through the top
/// `s` wires of the right edge.
pub fn extend_diagram(w: &WiringDiagram, m: &[u64]) -> Result<WiringDiagram> {
    if m.len() != w.k {
        return Err(Error::LengthMismatch {
            expected: w.k,
            got: m.len(),
        });
    }
    let mut out = w.clone();
    for (s, &ms) in (1..=w.k).zip(m) {
        for copy in 1..=ms as usize {
            out.events.push(Event::new(
                EventLabel::Y { s, copy },
                w.right_order[..s].iter().copied(),
            ));
        }
    }
    Ok(out)
}

/// Outcome of the left-edge consecutiveness and parity checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma41Report {
    pub violations: Vec<String>,
}

impl Lemma41Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks on a construction-stage diagram: the top `s` wires of the right
/// edge stay consecutive at the left edge, and every wire other than wire
/// 1 ends above (even point count) or below (odd count) all wires that
/// precede it on the right.
pub fn check_lemma41(w: &WiringDiagram) -> Lemma41Report {
    let mut report = Lemma41Report::default();
    let left = match w.left_order() {
        Ok(l) => l,
        Err(e) => {
            report.violations.push(e.to_string());
            return report;
        }
    };
    let pos_left = |wire: usize| left.iter().position(|&x| x == wire).expect("wire present");
    for s in 1..=w.k {
        let mut pos: Vec<usize> = w.right_order[..s].iter().map(|&x| pos_left(x)).collect();
        pos.sort_unstable();
        if pos[s - 1] - pos[0] + 1 != s {
            report.violations.push(format!(
                "top {s} wires are not consecutive on the left: {left:?}"
            ));
        }
    }
    for (idx, &wire) in w.right_order.iter().enumerate().skip(1) {
        if wire == 1 {
            continue;
        }
        let here = pos_left(wire);
        let even = w.points_on(wire).is_multiple_of(2);
        let ok = w.right_order[..idx].iter().all(|&v| {
            if even {
                here < pos_left(v)
            } else {
                here > pos_left(v)
            }
        });
        if !ok {
            report.violations.push(format!(
                "wire {wire} with {} points is not {} its predecessors on the left: {left:?}",
                w.points_on(wire),
                if even { "above" } else { "below" }
            ));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{canonical_sequence, BlowupTuple};
    use BlowupStep::*;

    fn seq(steps: &[BlowupStep]) -> BlowupSequence {
        BlowupSequence(steps.to_vec())
    }

    fn parts(w: &WiringDiagram) -> Vec<Vec<usize>> {
        w.events.iter().map(|e| e.participants.clone()).collect()
    }

    #[test]
    fn small_diagrams() {
        let w = build_diagram(&seq(&[Initial, Interior(1)])).unwrap();
        assert_eq!(w.k, 3);
        assert_eq!(parts(&w), vec![vec![2, 3], vec![1, 3]]);
        assert_eq!(w.order_at(1).unwrap(), vec![1, 3, 2]);
        let w = build_diagram(&seq(&[Initial, Exterior])).unwrap();
        assert_eq!(parts(&w), vec![vec![2], vec![3]]);
        assert_eq!(w.order_at(0).unwrap(), w.right_order);
        assert!(check_lemma41(&w).passed());
    }

    #[test]
    fn worked_diagram() {
        let s = canonical_sequence(&BlowupTuple::new(vec![2, 1, 4, 1, 2])).unwrap();
        let w = build_diagram(&s).unwrap();
        assert_eq!(w.right_order, vec![1, 2, 4, 3, 5]);
        assert_eq!(w.x_count(), 4);
        assert_eq!(w.left_order().unwrap(), vec![5, 2, 1, 4, 3]);
        assert!(check_lemma41(&w).passed());
        let e = extend_diagram(&w, &[0, 1, 1, 1, 1]).unwrap();
        let labels: Vec<String> = e.events.iter().map(|e| e.label.to_string()).collect();
        assert_eq!(
            labels,
            ["x1", "x2", "x3", "x4", "y2.1", "y3.1", "y4.1", "y5.1"]
        );
        e.validate().unwrap();
        assert_eq!(extend_diagram(&w, &[0; 5]).unwrap(), w);
        assert!(extend_diagram(&w, &[0; 4]).is_err());
    }

    #[test]
    fn degenerate_single_wire() {
        let w = build_diagram(&BlowupSequence(vec![])).unwrap();
        let e = extend_diagram(&w, &[3]).unwrap();
        assert_eq!(e.events.len(), 3);
        assert!(e.events.iter().all(|ev| ev.participants == vec![1]));
    }

    #[test]
    fn json_round_trip() {
        let w = build_diagram(&seq(&[Initial, Interior(1), Interior(2)])).unwrap();
        let w = extend_diagram(&w, &[1, 0, 2, 0]).unwrap();
        let s = w.to_json();
        assert!(s.contains("\"y3.2\""));
        assert_eq!(WiringDiagram::from_json(&s).unwrap(), w);
    }

    #[test]
    fn labels_parse() {
        assert_eq!("x3".parse::<EventLabel>().unwrap(), EventLabel::X(3));
        assert_eq!(
            "y2.1".parse::<EventLabel>().unwrap(),
            EventLabel::Y { s: 2, copy: 1 }
        );
        for bad in ["x", "x0", "y2", "z1", "y1.+1", "x-1"] {
            assert!(bad.parse::<EventLabel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn non_consecutive_block_is_reported() {
        let w = WiringDiagram {
            k: 3,
            right_order: vec![1, 2, 3],
            events: vec![Event::new(EventLabel::X(1), [1, 3])],
        };
        assert!(matches!(
            w.order_at(1),
            Err(Error::NonConsecutiveBlock { .. })
        ));
    }
}
