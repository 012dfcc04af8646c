//! Permutations of `{1..n}` stored in one-line form.
//!
//! Composition follows the right-action convention used throughout the crate:
//! `u.compose(&v)` is the map "apply `u` first, then `v`", so that
//! `(1 2 3)·(2 3) = (1 3)(2)`. Points are 1-based at the parse/print boundary
//! and 0-based in [`Permutation::images`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cycle_type::CycleType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images do not form a bijection of {{1..{0}}}")]
    NotBijection(usize),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("point {point} outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("insertion index {j} outside 0..={n}")]
    InsertionIndex { j: usize, n: usize },
    #[error("cannot delete the top point of a degree-{0} permutation")]
    DeleteTooSmall(usize),
    #[error("cannot embed a degree-{from} permutation into degree {to}")]
    EmbedShrinks { from: usize, to: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// Sign of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of a permutation whose cycle deficit `n - |g|` is `deficit`.
    pub fn from_deficit(deficit: usize) -> Parity {
        if deficit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    /// Parity of a product.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A bijection of `{1..n}`, immutable once built. The degree only changes
/// through [`Permutation::embed`], [`Permutation::insert`] and
/// [`Permutation::delete`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    /// Builds a permutation from 0-based images (`images[i]` is the image of `i`).
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut zero_based = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n {
                return Err(PermError::PointOutOfRange {
                    point: x,
                    degree: n,
                });
            }
            zero_based.push((x - 1) as u32);
        }
        Self::from_images(zero_based)
    }

    /// Builds a permutation of degree `n` from disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(PermError::PointOutOfRange { point: p, degree: n });
                }
                if used[p - 1] {
                    return Err(PermError::NotBijection(n));
                }
                used[p - 1] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "degree must be positive");
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// The transposition `(a b)` on 1-based points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, PermError> {
        Self::from_cycles(n, &[vec![a, b]])
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based one-line images.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 1-based point `p`.
    pub fn image(&self, p: usize) -> usize {
        self.images[p - 1] as usize + 1
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// `self · other`: apply `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `x⁻¹ · self · x`.
    pub fn conjugate(&self, x: &Permutation) -> Result<Permutation, PermError> {
        x.inverse().compose(self)?.compose(x)
    }

    /// `x · self` (left translation by `x`).
    pub fn left_mul(&self, x: &Permutation) -> Result<Permutation, PermError> {
        x.compose(self)
    }

    /// `self · x` (right translation by `x`).
    pub fn right_mul(&self, x: &Permutation) -> Result<Permutation, PermError> {
        self.compose(x)
    }

    /// All cycles, fixed points included, each starting at its smallest point
    /// and ordered by that point. Points are 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycles of length at least two.
    pub fn nontrivial_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Number of cycles `|g|`, fixed points included.
    pub fn cycle_count(&self) -> usize {
        cycle_count_of(&self.images)
    }

    pub fn cycle_type(&self) -> CycleType {
        let parts: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        CycleType::from_parts(parts).expect("cycle lengths form a partition")
    }

    /// 1-based points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x as usize)
            .count()
    }

    /// Cycle deficit `n - |g|`, the distance from the identity in the
    /// ordinary transposition graph.
    pub fn deficit(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_deficit(self.deficit())
    }

    /// True iff the cycle type is `1^{n-2k} 2^k`.
    pub fn is_k_transposition(&self, k: usize) -> Result<bool, PermError> {
        if k == 0 {
            return Err(PermError::ZeroK);
        }
        if self.degree() < 2 * k {
            return Ok(false);
        }
        let mut two_cycles = 0;
        for (i, &x) in self.images.iter().enumerate() {
            let x = x as usize;
            if x != i {
                if self.images[x] as usize != i {
                    return Ok(false);
                }
                two_cycles += 1;
            }
        }
        Ok(two_cycles == 2 * k)
    }

    /// Extends by fixed points up to degree `n`.
    pub fn embed(&self, n: usize) -> Result<Permutation, PermError> {
        if n < self.degree() {
            return Err(PermError::EmbedShrinks {
                from: self.degree(),
                to: n,
            });
        }
        let mut images = self.images.to_vec();
        images.extend(self.degree() as u32..n as u32);
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// The insertion map `ins_j`: for `j > 0` the new point `n+1` is placed
    /// right after `j` in its cycle; for `j = 0` it is appended as a fixed point.
    pub fn insert(&self, j: usize) -> Result<Permutation, PermError> {
        let n = self.degree();
        if j > n {
            return Err(PermError::InsertionIndex { j, n });
        }
        let mut images = self.images.to_vec();
        images.push(n as u32);
        if j > 0 {
            images[n] = images[j - 1];
            images[j - 1] = n as u32;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// The deletion map: removes the top point from the cycle containing it.
    pub fn delete(&self) -> Result<Permutation, PermError> {
        let n = self.degree();
        if n < 2 {
            return Err(PermError::DeleteTooSmall(n));
        }
        let top = (n - 1) as u32;
        let mut images = self.images[..n - 1].to_vec();
        if let Some(pred) = images.iter().position(|&x| x == top) {
            images[pred] = self.images[n - 1];
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// True iff the top point is moved.
    pub fn moves_top(&self) -> bool {
        let n = self.degree();
        self.images[n - 1] as usize != n - 1
    }

    /// Parses cycle notation `"(1 2 3)(4 5)"` (commas also accepted inside
    /// cycles) or one-line notation `"3,1,2"`. With `degree = None` the degree
    /// is the largest point mentioned.
    pub fn parse(s: &str, degree: Option<usize>) -> Result<Permutation, PermError> {
        let s = s.trim();
        if s.contains('(') {
            let cycles = parse_cycles(s)?;
            let max_point = cycles.iter().flatten().copied().max().unwrap_or(0);
            let n = match degree {
                Some(n) => {
                    if max_point > n {
                        return Err(PermError::PointOutOfRange {
                            point: max_point,
                            degree: n,
                        });
                    }
                    n
                }
                None => max_point.max(1),
            };
            Self::from_cycles(n, &cycles)
        } else {
            let points = s
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad point {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if points.is_empty() {
                return Err(PermError::Parse("empty input".into()));
            }
            let p = Self::from_one_line(&points)?;
            match degree {
                Some(n) => p.embed(n),
                None => Ok(p),
            }
        }
    }

    /// One-line notation, 1-based and comma separated.
    pub fn to_one_line(&self) -> String {
        self.images
            .iter()
            .map(|&x| (x + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let mut cycles = Vec::new();
    let mut rest = s;
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| PermError::Parse(format!("expected '(' at {rest:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| PermError::Parse("unbalanced parenthesis".into()))?;
        let cycle = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| PermError::Parse(format!("bad point {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = &body[close + 1..];
    }
    Ok(cycles)
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Permutation::parse(s, None)
    }
}

/// Cycle notation without fixed points; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.nontrivial_cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in Sym({})", self.degree())
    }
}

/// Cycle count of a 0-based image slice.
pub(crate) fn cycle_count_of<T: Copy + Into<u64>>(images: &[T]) -> usize {
    let n = images.len();
    if n <= 128 {
        let mut seen = [false; 128];
        count_cycles(images, &mut seen[..n])
    } else {
        let mut seen = vec![false; n];
        count_cycles(images, &mut seen)
    }
}

fn count_cycles<T: Copy + Into<u64>>(images: &[T], seen: &mut [bool]) -> usize {
    let mut count = 0;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            p = images[p].into() as usize;
        }
    }
    count
}
