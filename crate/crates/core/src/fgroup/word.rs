use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator `g_i` (1-based) or its inverse.
///
/// Letters are ordered by generator index first, then with the positive
/// letter before the inverse letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter {
            gen: gen as u32,
            inv: false,
        }
    }

    pub fn neg(gen: usize) -> Self {
        Letter {
            gen: gen as u32,
            inv: true,
        }
    }

    pub fn index(self) -> usize {
        self.gen as usize
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A freely reduced word in `g_1, ..., g_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        FreeWord(vec![Letter::pos(i)])
    }

    /// Reduces an arbitrary letter sequence with a single stack pass.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        FreeWord(out)
    }

    /// `g_a g_{a+1} ... g_b`; empty when `a > b`.
    pub fn run(a: usize, b: usize) -> Self {
        FreeWord((a..=b).map(Letter::pos).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        FreeWord(out)
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &FreeWord) -> Self {
        c.mul(self).mul(&c.inverse())
    }

    /// Replaces each letter `g_i^{±1}` by `image(i)^{±1}` and reduces.
    pub fn substitute<'a, F>(&self, mut image: F) -> Self
    where
        F: FnMut(usize) -> &'a FreeWord,
    {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            let w = image(l.index());
            if l.inv {
                for &m in w.0.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in &w.0 {
                    push_reduced(&mut out, m);
                }
            }
        }
        FreeWord(out)
    }

    /// Removes matching inverse letters from both ends; the result is a
    /// conjugate of `self`.
    pub fn cyclically_reduced(&self) -> Self {
        let w = &self.0;
        let (mut i, mut j) = (0usize, w.len());
        while j - i >= 2 && w[i].cancels(w[j - 1]) {
            i += 1;
            j -= 1;
        }
        FreeWord(w[i..j].to_vec())
    }

    /// Exponent sum of each generator `1..=k` (abelianization).
    pub fn exponent_sums(&self, k: usize) -> Vec<i64> {
        let mut out = vec![0i64; k];
        for l in &self.0 {
            if let Some(slot) = out.get_mut(l.index().wrapping_sub(1)) {
                *slot += if l.inv { -1 } else { 1 };
            }
        }
        out
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&top) if top.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.gen)?;
            if l.inv {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Whitespace-separated tokens `g<index>` with an optional `^-1`.
    /// The empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (body, inv) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let idx = body
                .strip_prefix('g')
                .and_then(|d| d.parse::<u32>().ok())
                .filter(|&i| i >= 1 && !body[1..].starts_with('+'))
                .ok_or_else(|| Error::Parse(format!("bad token {tok:?}")))?;
            letters.push(Letter { gen: idx, inv });
        }
        Ok(FreeWord::from_letters(letters))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
