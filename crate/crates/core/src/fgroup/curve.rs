use std::fmt;

use serde::{Deserialize, Serialize};

use super::automorphism::{Move, Sign};
use super::word::{FreeWord, Letter};

/// Free homotopy class of an unoriented closed curve: a cyclic word up to
/// inversion, stored in a canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass(FreeWord);

impl CurveClass {
    pub fn new(w: &FreeWord) -> Self {
        let r = w.cyclically_reduced();
        let a = least_rotation(r.letters());
        let b = least_rotation(r.inverse().letters());
        CurveClass(FreeWord::from_letters(a.min(b)))
    }

    pub fn word(&self) -> &FreeWord {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for CurveClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FreeWord::deserialize(d).map(|w| CurveClass::new(&w))
    }
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for s in 1..n {
        let cand = w[s..].iter().chain(&w[..s]);
        let cur = w[best..].iter().chain(&w[..best]);
        if cand.cmp(cur) == std::cmp::Ordering::Less {
            best = s;
        }
    }
    w[best..].iter().chain(&w[..best]).copied().collect()
}

/// Whether two words represent the same unoriented free homotopy class.
pub fn curve_equal(u: &FreeWord, v: &FreeWord) -> bool {
    CurveClass::new(u) == CurveClass::new(v)
}

/// Side on which the connecting arc of a side-convex curve passes the
/// holes between its two runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            Side::Right => Sign::Plus,
            Side::Left => Sign::Minus,
        }
    }
}

/// A standard simple closed curve: either a round curve around one run of
/// holes, or a curve around two separated runs that passes the holes in
/// between on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveForm {
    Convex {
        a: usize,
        b: usize,
    },
    SideConvex {
        first: (usize, usize),
        second: (usize, usize),
        side: Side,
    },
}

impl CurveForm {
    pub fn convex(a: usize, b: usize) -> Self {
        CurveForm::Convex { a, b }
    }

    pub fn side_convex(first: (usize, usize), second: (usize, usize), side: Side) -> Self {
        CurveForm::SideConvex {
            first,
            second,
            side,
        }
    }

    /// Representative word in a disk with at least `max_hole` holes.
    pub fn word(&self) -> FreeWord {
        match *self {
            CurveForm::Convex { a, b } => FreeWord::run(a, b),
            CurveForm::SideConvex {
                first: (a, b),
                second: (c, d),
                side,
            } => {
                let len2 = d - c + 1;
                let base = FreeWord::run(a, b + len2);
                let mv = Move::HalfTwist {
                    a: b + 1,
                    b: d,
                    sign: side.sign(),
                };
                let cache: Vec<FreeWord> = (0..=d)
                    .map(|t| {
                        if t == 0 {
                            FreeWord::identity()
                        } else {
                            mv.image(t, d)
                        }
                    })
                    .collect();
                base.substitute(|i| &cache[i])
            }
        }
    }

    pub fn class(&self) -> CurveClass {
        CurveClass::new(&self.word())
    }

    /// Holes enclosed by the curve.
    pub fn holes(&self) -> Vec<usize> {
        match *self {
            CurveForm::Convex { a, b } => (a..=b).collect(),
            CurveForm::SideConvex {
                first: (a, b),
                second: (c, d),
                ..
            } => (a..=b).chain(c..=d).collect(),
        }
    }

    pub fn mirrored(&self) -> Self {
        match *self {
            CurveForm::SideConvex {
                first,
                second,
                side,
            } => CurveForm::SideConvex {
                first,
                second,
                side: side.flip(),
            },
            c => c,
        }
    }
}

impl fmt::Display for CurveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveForm::Convex { a, b } => write!(f, "convex[{a},{b}]"),
            CurveForm::SideConvex {
                first,
                second,
                side,
            } => write!(
                f,
                "{}[{},{}]+[{},{}]",
                match side {
                    Side::Left => "left",
                    Side::Right => "right",
                },
                first.0,
                first.1,
                second.0,
                second.1
            ),
        }
    }
}

fn runs(holes: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &h in holes {
        match out.last_mut() {
            Some(r) if r.1 + 1 == h => r.1 = h,
            _ => out.push((h, h)),
        }
    }
    out
}

/// Recognizes the standard form of a curve class. The enclosed holes are
/// read off the abelianization, so only the matching candidates are built.
pub fn recognize(w: &FreeWord, k: usize) -> Option<CurveForm> {
    let cls = CurveClass::new(w);
    if cls.is_trivial() {
        return None;
    }
    let mut sums = cls.word().exponent_sums(k.max(cls.word().max_generator()));
    if sums.iter().any(|&s| s < 0) {
        sums.iter_mut().for_each(|s| *s = -*s);
    }
    if sums.iter().any(|&s| s != 0 && s != 1) {
        return None;
    }
    let holes: Vec<usize> = (1..=sums.len()).filter(|&i| sums[i - 1] == 1).collect();
    let candidates = match runs(&holes)[..] {
        [(a, b)] => vec![CurveForm::convex(a, b)],
        [first, second] => vec![
            CurveForm::side_convex(first, second, Side::Left),
            CurveForm::side_convex(first, second, Side::Right),
        ],
        _ => vec![],
    };
    candidates.into_iter().find(|c| c.class() == cls)
}

/// Every standard form in a disk with `k` holes.
pub fn all_forms(k: usize) -> Vec<CurveForm> {
    let mut out = Vec::new();
    for a in 1..=k {
        for b in a..=k {
            out.push(CurveForm::convex(a, b));
            for c in b + 2..=k {
                for d in c..=k {
                    for side in [Side::Left, Side::Right] {
                        out.push(CurveForm::side_convex((a, b), (c, d), side));
                    }
                }
            }
        }
    }
    out
}

/// Recognition by scanning every standard form.
pub fn recognize_exhaustive(w: &FreeWord, k: usize) -> Option<CurveForm> {
    let cls = CurveClass::new(w);
    all_forms(k).into_iter().find(|c| c.class() == cls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgroup::automorphism::mirror_involution;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn class_ignores_rotation_and_inversion() {
        let a = w("g1 g2 g3");
        assert!(curve_equal(&a, &w("g2 g3 g1")));
        assert!(curve_equal(&a, &w("g3^-1 g2^-1 g1^-1")));
        assert!(curve_equal(&a, &w("g4 g1 g2 g3 g4^-1")));
        assert!(!curve_equal(&a, &w("g1 g3 g2")));
    }

    #[test]
    fn side_convex_words() {
        let r = CurveForm::side_convex((1, 1), (3, 3), Side::Right);
        assert_eq!(r.word(), w("g1 g2 g3 g2^-1"));
        let l = CurveForm::side_convex((1, 1), (3, 3), Side::Left);
        assert_eq!(l.word(), w("g1 g3"));
    }

    #[test]
    fn mirror_flips_side() {
        let m = mirror_involution(5);
        for f in all_forms(5) {
            let img = m.apply(&f.word());
            assert_eq!(recognize(&img, 5), Some(f.mirrored()), "{f}");
        }
    }

    #[test]
    fn forms_are_distinct_and_recognized() {
        for k in 1..=6 {
            let forms = all_forms(k);
            let mut classes: Vec<_> = forms.iter().map(|f| f.class()).collect();
            classes.sort();
            classes.dedup();
            assert_eq!(classes.len(), forms.len());
            for f in forms {
                assert_eq!(recognize(&f.word(), k), Some(f));
                assert_eq!(recognize_exhaustive(&f.word(), k), Some(f));
            }
        }
    }

    #[test]
    fn non_simple_words_are_rejected() {
        assert_eq!(recognize(&w("g1 g1"), 2), None);
        assert_eq!(recognize(&w("g1 g2 g1^-1 g2^-1"), 2), None);
        assert_eq!(recognize(&w(""), 2), None);
    }
}
