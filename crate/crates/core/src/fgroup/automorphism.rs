use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{FreeWord, Letter};
use crate::error::{Error, Result};

/// Rotation sense of a half-twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One elementary mapping class of the disk with `k` holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// Half-twist of the round subdisk around holes `a..=b`.
    HalfTwist { a: usize, b: usize, sign: Sign },
    /// Reflection of the disk across the axis through the holes.
    Mirror,
}

impl Move {
    pub fn inverse(self) -> Move {
        match self {
            Move::HalfTwist { a, b, sign } => Move::HalfTwist {
                a,
                b,
                sign: sign.flip(),
            },
            Move::Mirror => Move::Mirror,
        }
    }

    /// Image of the generator `g_t` in a disk with `k` holes.
    pub fn image(self, t: usize, k: usize) -> FreeWord {
        match self {
            Move::HalfTwist { a, b, sign } => {
                if t < a || t > b || a == b {
                    return FreeWord::generator(t);
                }
                let u = a + b - t;
                match sign {
                    // g_t -> (g_a..g_{u-1}) g_u (g_a..g_{u-1})^-1
                    Sign::Plus => FreeWord::generator(u).conjugate_by(&FreeWord::run(a, u - 1)),
                    // g_t -> (g_{u+1}..g_b)^-1 g_u (g_{u+1}..g_b)
                    Sign::Minus => {
                        FreeWord::generator(u).conjugate_by(&FreeWord::run(u + 1, b).inverse())
                    }
                }
            }
            Move::Mirror => {
                debug_assert!(t <= k);
                FreeWord::from_letters([Letter::neg(t)]).conjugate_by(&FreeWord::run(1, t - 1))
            }
        }
    }

    /// Permutation of hole positions induced by the move.
    pub fn permute_hole(self, h: usize) -> usize {
        match self {
            Move::HalfTwist { a, b, .. } if (a..=b).contains(&h) => a + b - h,
            _ => h,
        }
    }

    fn apply(self, w: &FreeWord, k: usize) -> FreeWord {
        match self {
            Move::HalfTwist { a, b, .. } if a == b => w.clone(),
            _ => {
                let cache: Vec<FreeWord> = (0..=k)
                    .map(|t| {
                        if t == 0 {
                            FreeWord::identity()
                        } else {
                            self.image(t, k)
                        }
                    })
                    .collect();
                w.substitute(|i| &cache[i])
            }
        }
    }
}

/// A composition of moves, read as function composition:
/// `moves[0] ∘ moves[1] ∘ ... ∘ moves[n-1]` (the last move acts first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MappingWord {
    pub k: usize,
    pub moves: Vec<Move>,
}

impl MappingWord {
    pub fn identity(k: usize) -> Self {
        MappingWord {
            k,
            moves: Vec::new(),
        }
    }

    pub fn single(k: usize, m: Move) -> Self {
        MappingWord { k, moves: vec![m] }
    }

    /// `self ∘ other`.
    pub fn then_apply_after(&self, other: &MappingWord) -> Self {
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        MappingWord { k: self.k, moves }
    }

    /// `m ∘ self`.
    pub fn pre_compose(&self, m: Move) -> Self {
        let mut moves = Vec::with_capacity(self.moves.len() + 1);
        moves.push(m);
        moves.extend_from_slice(&self.moves);
        MappingWord { k: self.k, moves }
    }

    pub fn inverse(&self) -> Self {
        MappingWord {
            k: self.k,
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    pub fn is_orientation_reversing(&self) -> bool {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::Mirror))
            .count()
            % 2
            == 1
    }

    /// Image of a word (exact, freely reduced).
    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        self.moves
            .iter()
            .rev()
            .fold(w.clone(), |acc, m| m.apply(&acc, self.k))
    }

    /// Image of a conjugacy class representative, cyclically reduced after
    /// every move to keep words short.
    pub fn apply_to_class(&self, w: &FreeWord) -> FreeWord {
        self.moves
            .iter()
            .rev()
            .fold(w.cyclically_reduced(), |acc, m| {
                m.apply(&acc, self.k).cyclically_reduced()
            })
    }

    /// Where the hole at position `h` ends up.
    pub fn permute_hole(&self, h: usize) -> usize {
        self.moves
            .iter()
            .rev()
            .fold(h, |acc, m| m.permute_hole(acc))
    }

    pub fn to_automorphism(&self) -> DiskAutomorphism {
        let images = (1..=self.k)
            .map(|t| self.apply(&FreeWord::generator(t)))
            .collect();
        DiskAutomorphism {
            k: self.k,
            images,
            provenance: Some(self.clone()),
        }
    }
}

/// An automorphism of the free group `π₁(D_k)`, stored by the images of
/// the generators, optionally with the moves it was built from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskAutomorphism {
    pub k: usize,
    pub images: Vec<FreeWord>,
    pub provenance: Option<MappingWord>,
}

impl PartialEq for DiskAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.images == other.images
    }
}

impl Eq for DiskAutomorphism {}

impl DiskAutomorphism {
    pub fn identity(k: usize) -> Self {
        MappingWord::identity(k).to_automorphism()
    }

    pub fn image(&self, t: usize) -> &FreeWord {
        &self.images[t - 1]
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(|i| &self.images[i - 1])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiskAutomorphism) -> DiskAutomorphism {
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        let provenance = match (&self.provenance, &other.provenance) {
            (Some(a), Some(b)) => Some(a.then_apply_after(b)),
            _ => None,
        };
        DiskAutomorphism {
            k: self.k,
            images,
            provenance,
        }
    }

    /// Inverse, available when the automorphism carries its provenance.
    pub fn inverse(&self) -> Option<DiskAutomorphism> {
        self.provenance
            .as_ref()
            .map(|p| p.inverse().to_automorphism())
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| *w == FreeWord::generator(i + 1))
    }

    /// Image of the boundary word `g_1 g_2 ... g_k`.
    pub fn boundary_image(&self) -> FreeWord {
        self.apply(&boundary_word(self.k))
    }

    pub fn preserves_boundary(&self) -> bool {
        self.boundary_image() == boundary_word(self.k)
    }

    pub fn inverts_boundary(&self) -> bool {
        self.boundary_image() == boundary_word(self.k).inverse()
    }
}

impl fmt::Display for DiskAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "g{} -> {}", i + 1, w)?;
        }
        Ok(())
    }
}

/// `g_1 g_2 ... g_k`.
pub fn boundary_word(k: usize) -> FreeWord {
    FreeWord::run(1, k)
}

fn check_run(a: usize, b: usize, k: usize) -> Result<()> {
    if a == 0 || a > b || b > k {
        return Err(Error::Validation(format!(
            "run [{a},{b}] is not inside 1..={k}"
        )));
    }
    Ok(())
}

/// Half-twist of the subdisk around holes `a..=b`. The `Plus` twist sends
/// `g_t` to `P g_{a+b-t} P^-1` with `P = g_a ... g_{a+b-t-1}`; `Minus` is
/// its inverse.
pub fn halftwist(a: usize, b: usize, sign: Sign, k: usize) -> Result<DiskAutomorphism> {
    check_run(a, b, k)?;
    Ok(MappingWord::single(k, Move::HalfTwist { a, b, sign }).to_automorphism())
}

/// Reflection `g_t -> (g_1...g_{t-1}) g_t^-1 (g_1...g_{t-1})^-1`. It is an
/// involution and sends the boundary word to its inverse.
pub fn mirror_involution(k: usize) -> DiskAutomorphism {
    MappingWord::single(k, Move::Mirror).to_automorphism()
}

/// Full twist about the round curve around `a..=b`: conjugation of
/// `g_a, ..., g_b` by `A = g_a...g_b` (or by `A^-1` for `Minus`).
pub fn full_twist(a: usize, b: usize, sign: Sign, k: usize) -> Result<DiskAutomorphism> {
    check_run(a, b, k)?;
    let block = FreeWord::run(a, b);
    let conj = match sign {
        Sign::Plus => block,
        Sign::Minus => block.inverse(),
    };
    let images = (1..=k)
        .map(|t| {
            let g = FreeWord::generator(t);
            if (a..=b).contains(&t) {
                g.conjugate_by(&conj)
            } else {
                g
            }
        })
        .collect();
    let prov = MappingWord {
        k,
        moves: vec![
            Move::HalfTwist { a, b, sign },
            Move::HalfTwist { a, b, sign },
        ],
    };
    Ok(DiskAutomorphism {
        k,
        images,
        provenance: Some(prov),
    })
}

/// Dehn twist about `ψ(∂[a,b])`, where `ψ` is `provenance`:
/// `ψ ∘ T ∘ ψ^-1` with `T` the full twist of handedness `handedness`,
/// reversed when `ψ` reverses orientation so that the twist keeps its
/// handedness on the image curve.
pub fn dehn_twist(
    provenance: &MappingWord,
    a: usize,
    b: usize,
    handedness: Sign,
) -> Result<DiskAutomorphism> {
    let k = provenance.k;
    check_run(a, b, k)?;
    let sign = if provenance.is_orientation_reversing() {
        handedness.flip()
    } else {
        handedness
    };
    let inner = full_twist(a, b, sign, k)?;
    let inv = provenance.inverse();
    let images = (1..=k)
        .map(|t| {
            let w = inv.apply(&FreeWord::generator(t));
            let w = inner.apply(&w);
            provenance.apply(&w)
        })
        .collect();
    let mut moves = provenance.moves.clone();
    moves.extend([
        Move::HalfTwist { a, b, sign },
        Move::HalfTwist { a, b, sign },
    ]);
    moves.extend(inv.moves);
    Ok(DiskAutomorphism {
        k,
        images,
        provenance: Some(MappingWord { k, moves }),
    })
}
