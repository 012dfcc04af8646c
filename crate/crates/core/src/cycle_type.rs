//! Cycle types (partitions of `n`) and the conjugacy classes they index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{Parity, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleTypeError {
    #[error("cycle lengths must be positive")]
    ZeroPart,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("cannot change degree {from} to {to}: support size is {support}")]
    DegreeTooSmall {
        from: usize,
        to: usize,
        support: usize,
    },
    #[error("class of size {0} exceeds the cap of {1} elements")]
    ClassTooLarge(BigUint, u64),
    #[error("cannot parse cycle type: {0}")]
    Parse(String),
}

/// A partition of the degree `n` recording cycle lengths with multiplicity;
/// fixed points are parts of size one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    // Non-increasing, fixed points included.
    parts: Vec<u32>,
}

impl CycleType {
    /// Builds a cycle type from cycle lengths given in any order.
    pub fn from_parts(mut parts: Vec<u32>) -> Result<Self, CycleTypeError> {
        if parts.contains(&0) {
            return Err(CycleTypeError::ZeroPart);
        }
        if parts.is_empty() {
            return Err(CycleTypeError::ZeroDegree);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    /// Builds a cycle type from `(length, count)` pairs.
    pub fn from_multiplicities<I>(counts: I) -> Result<Self, CycleTypeError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut parts = Vec::new();
        for (len, count) in counts {
            if len == 0 && count > 0 {
                return Err(CycleTypeError::ZeroPart);
            }
            parts.extend(std::iter::repeat_n(len as u32, count));
        }
        Self::from_parts(parts)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "degree must be positive");
        CycleType {
            parts: vec![1; n],
        }
    }

    /// The class of `k`-transpositions, `1^{n-2k} 2^k`.
    pub fn k_transposition(n: usize, k: usize) -> Option<Self> {
        if k == 0 || n < 2 * k {
            return None;
        }
        Self::from_multiplicities([(2, k), (1, n - 2 * k)]).ok()
    }

    /// Cycle lengths in non-increasing order.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn multiplicity(&self, len: usize) -> usize {
        self.parts.iter().filter(|&&p| p as usize == len).count()
    }

    /// Map from cycle length to count (only nonzero counts).
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p as usize).or_insert(0) += 1;
        }
        m
    }

    pub fn cycle_count(&self) -> usize {
        self.parts.len()
    }

    pub fn support_size(&self) -> usize {
        self.parts
            .iter()
            .filter(|&&p| p > 1)
            .map(|&p| p as usize)
            .sum()
    }

    pub fn deficit(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_deficit(self.deficit())
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// Same nontrivial cycles, padded or trimmed with fixed points to degree `n`.
    pub fn with_degree(&self, n: usize) -> Result<CycleType, CycleTypeError> {
        let support = self.support_size();
        let nontrivial = self.parts.iter().filter(|&&p| p > 1).count();
        if n < support || n == 0 {
            return Err(CycleTypeError::DegreeTooSmall {
                from: self.degree(),
                to: n,
                support,
            });
        }
        let mut parts = self.parts[..nontrivial].to_vec();
        parts.extend(std::iter::repeat_n(1, n - support));
        Ok(CycleType { parts })
    }

    /// Number of elements of `Sym(n)` with this cycle type,
    /// `n! / prod(l^{n_l} n_l!)`.
    pub fn class_size(&self) -> BigUint {
        let mut num = factorial(self.degree());
        for (len, count) in self.multiplicities() {
            let denom = BigUint::from(len).pow(count as u32) * factorial(count);
            num /= denom;
        }
        num
    }

    /// The canonical representative: cycles in non-increasing length placed on
    /// consecutive points, e.g. `3 2 1 -> (1 2 3)(4 5)(6)`.
    pub fn representative(&self) -> Permutation {
        let n = self.degree();
        let mut images = Vec::with_capacity(n);
        let mut start = 0u32;
        for &len in &self.parts {
            for i in 0..len {
                images.push(start + (i + 1) % len);
            }
            start += len;
        }
        Permutation::from_images_unchecked(images)
    }

    /// Lazily streams every element of the class in canonical index order.
    pub fn class_iter(&self) -> Result<ClassIter, CycleTypeError> {
        let size = self.class_size_u64()?;
        Ok(ClassIter {
            indexer: ClassIndexer::new(self),
            next: 0,
            end: size,
        })
    }

    /// Streams the elements with canonical indices in `range`; disjoint ranges
    /// partition the class for parallel iteration.
    pub fn class_range(&self, range: std::ops::Range<u64>) -> Result<ClassIter, CycleTypeError> {
        let size = self.class_size_u64()?;
        Ok(ClassIter {
            indexer: ClassIndexer::new(self),
            next: range.start.min(size),
            end: range.end.min(size),
        })
    }

    /// Materializes the class; refuses when it has more than `cap` elements.
    pub fn collect_class(&self, cap: u64) -> Result<Vec<Permutation>, CycleTypeError> {
        let size = self.class_size();
        if size > BigUint::from(cap) {
            return Err(CycleTypeError::ClassTooLarge(size, cap));
        }
        Ok(self.class_iter()?.collect())
    }

    fn class_size_u64(&self) -> Result<u64, CycleTypeError> {
        let size = self.class_size();
        u64::try_from(&size).map_err(|_| CycleTypeError::ClassTooLarge(size, u64::MAX))
    }

    /// A uniformly random element of the class, drawn with `rng`.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let n = self.degree();
        let mut points: Vec<u32> = (0..n as u32).collect();
        points.shuffle(rng);
        let mut images = vec![0u32; n];
        let mut offset = 0usize;
        for &len in &self.parts {
            let len = len as usize;
            let cycle = &points[offset..offset + len];
            for i in 0..len {
                images[cycle[i] as usize] = cycle[(i + 1) % len];
            }
            offset += len;
        }
        Permutation::from_images_unchecked(images)
    }

    /// A random cycle type of degree `n` with exactly `cycles` cycles, from a
    /// uniformly random composition of `n` (not uniform over partitions).
    pub fn random_with_cycle_count<R: Rng + ?Sized>(rng: &mut R, n: usize, cycles: usize) -> Self {
        assert!(1 <= cycles && cycles <= n, "need 1 <= cycles <= n");
        let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, cycles - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(cycles);
        let mut prev = 0;
        for c in cuts.into_iter().chain([n]) {
            parts.push((c - prev) as u32);
            prev = c;
        }
        CycleType::from_parts(parts).expect("positive parts")
    }

    /// Reproducible random element of the class.
    pub fn random_of_type(&self, seed: u64) -> Permutation {
        self.random_member(&mut ChaCha8Rng::seed_from_u64(seed))
    }
}

/// `"1^1 2^2"`: exponent notation in increasing cycle length.
impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (len, count) in self.multiplicities() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{len}^{count}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleType({self})")
    }
}

/// Accepts `"1^6 2^3"`, `"2^3 1^6"` and bare lengths (`"3 2 1"`).
impl FromStr for CycleType {
    type Err = CycleTypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (len, count) = match tok.split_once('^') {
                Some((l, c)) => (l, c),
                None => (tok, "1"),
            };
            let len: u32 = len
                .parse()
                .map_err(|_| CycleTypeError::Parse(format!("bad cycle length {len:?}")))?;
            let count: usize = count
                .parse()
                .map_err(|_| CycleTypeError::Parse(format!("bad multiplicity {count:?}")))?;
            if len == 0 {
                return Err(CycleTypeError::ZeroPart);
            }
            parts.extend(std::iter::repeat_n(len, count));
        }
        if parts.is_empty() {
            return Err(CycleTypeError::Parse("empty cycle type".into()));
        }
        CycleType::from_parts(parts)
    }
}

impl serde::Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CycleType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Every partition of `n` exactly once, parts non-increasing, starting with
/// `[n]` and ending with `1^n`.
pub fn partitions_of(n: usize) -> Partitions {
    Partitions {
        current: if n == 0 { None } else { Some(vec![n as u32]) },
    }
}

pub struct Partitions {
    current: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = CycleType;

    fn next(&mut self) -> Option<CycleType> {
        let cur = self.current.take()?;
        let out = CycleType { parts: cur.clone() };
        // Next partition in reverse lexicographic order.
        let mut parts = cur;
        let mut ones = 0u32;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        if let Some(last) = parts.pop() {
            let m = last - 1;
            let mut rem = ones + 1 + m;
            while rem > 0 {
                let take = m.min(rem);
                parts.push(take);
                rem -= take;
            }
            self.current = Some(parts);
        }
        Some(out)
    }
}

/// Bijection between `0..class_size` and the elements of a class.
///
/// Canonical order: the smallest unused point opens the next cycle, the
/// cycle length is chosen among the remaining lengths in increasing order,
/// then the remaining members of that cycle are chosen as an ordered
/// selection from the unused points.
#[derive(Clone, Debug)]
struct ClassIndexer {
    n: usize,
    // (length, count) in increasing length.
    counts: Vec<(u32, u32)>,
}

impl ClassIndexer {
    fn new(t: &CycleType) -> Self {
        let counts = t
            .multiplicities()
            .into_iter()
            .map(|(l, c)| (l as u32, c as u32))
            .collect();
        ClassIndexer {
            n: t.degree(),
            counts,
        }
    }

    fn unrank(&self, mut idx: u128) -> Permutation {
        let mut counts = self.counts.clone();
        let mut free: Vec<u32> = (0..self.n as u32).collect();
        let mut images = vec![0u32; self.n];
        while !free.is_empty() {
            let m = free.len() as u128;
            let opener = free.remove(0);
            let mut chosen = None;
            for i in 0..counts.len() {
                let (len, c) = counts[i];
                if c == 0 {
                    continue;
                }
                counts[i].1 -= 1;
                let rest = class_count(&counts, m as u32 - len).expect("class index fits u128");
                let block = falling(m - 1, len as u128 - 1) * rest;
                if idx < block {
                    chosen = Some((len, rest));
                    break;
                }
                counts[i].1 += 1;
                idx -= block;
            }
            let (len, rest) = chosen.expect("index within class size");
            let mut sel = idx / rest;
            idx %= rest;
            let mut prev = opener;
            for j in 0..(len as u128 - 1) {
                let radix = falling(m - 2 - j, len as u128 - 2 - j);
                let pick = (sel / radix) as usize;
                sel %= radix;
                let q = free.remove(pick);
                images[prev as usize] = q;
                prev = q;
            }
            images[prev as usize] = opener;
        }
        Permutation::from_images_unchecked(images)
    }
}

fn falling(m: u128, k: u128) -> u128 {
    (0..k).map(|i| m - i).product()
}

/// Number of permutations of `m` points with the given `(length, count)`
/// multiset, or `None` on overflow.
fn class_count(counts: &[(u32, u32)], m: u32) -> Option<u128> {
    let mut remaining = m as u128;
    let mut total: u128 = 1;
    for &(len, c) in counts {
        let len = len as u128;
        for j in 1..=c as u128 {
            // Choose the points of one more cycle and arrange them cyclically.
            let ways = binomial(remaining, len)?.checked_mul(falling(len - 1, len - 1).max(1))?;
            total = total.checked_mul(ways)?;
            total /= j;
            remaining -= len;
        }
    }
    Some(total)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// Streaming iterator over a conjugacy class.
pub struct ClassIter {
    indexer: ClassIndexer,
    next: u64,
    end: u64,
}

impl Iterator for ClassIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.next >= self.end {
            return None;
        }
        let p = self.indexer.unrank(self.next as u128);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ClassIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    fn all_perms(n: usize) -> Vec<Permutation> {
        fn rec(n: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation::from_images(cur.clone()).unwrap());
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x as u32);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    #[test]
    fn class_sizes_against_enumeration() {
        for n in 1..=6 {
            let mut tally: HashMap<CycleType, u64> = HashMap::new();
            for p in all_perms(n) {
                *tally.entry(p.cycle_type()).or_default() += 1;
            }
            for t in partitions_of(n) {
                assert_eq!(t.class_size(), BigUint::from(tally[&t]), "type {t}");
            }
        }
        let t: CycleType = "1^1 2^2".parse().unwrap();
        assert_eq!(t.class_size(), BigUint::from(15u32));
        assert_eq!(CycleType::identity(9).class_size(), BigUint::one());
        for n in 2..12usize {
            let h = CycleType::k_transposition(n, 1).unwrap();
            assert_eq!(h.class_size(), BigUint::from(n * (n - 1) / 2));
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=12).map(|n| partitions_of(n).count()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        for n in 1..=12 {
            let all: Vec<CycleType> = partitions_of(n).collect();
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.iter().all(|t| t.degree() == n));
            let total: BigUint = all.iter().map(|t| t.class_size()).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn class_enumeration_is_exact() {
        for n in 1..=6 {
            for t in partitions_of(n) {
                let members: Vec<Permutation> = t.class_iter().unwrap().collect();
                let distinct: HashSet<_> = members.iter().cloned().collect();
                assert_eq!(BigUint::from(members.len()), t.class_size());
                assert_eq!(distinct.len(), members.len());
                assert!(members.iter().all(|p| p.cycle_type() == t));
            }
        }
        let t: CycleType = "1^1 2^2".parse().unwrap();
        assert_eq!(t.class_iter().unwrap().count(), 15);
    }

    #[test]
    fn class_ranges_partition_the_class() {
        let t = CycleType::k_transposition(8, 2).unwrap();
        let whole: Vec<_> = t.class_iter().unwrap().collect();
        let mut pieces = Vec::new();
        for start in (0..whole.len() as u64).step_by(37) {
            pieces.extend(t.class_range(start..start + 37).unwrap());
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn collect_class_honours_cap() {
        let t = CycleType::k_transposition(10, 2).unwrap();
        assert!(matches!(t.collect_class(10), Err(CycleTypeError::ClassTooLarge(..))));
        assert_eq!(t.collect_class(10_000).unwrap().len(), 630);
    }

    #[test]
    fn random_members_have_the_type() {
        for seed in 0..50 {
            let t: CycleType = "3^2 2^1 1^4".parse().unwrap();
            assert_eq!(t.random_of_type(seed).cycle_type(), t);
        }
        let t: CycleType = "2^3 5^1".parse().unwrap();
        assert_eq!(t.random_of_type(7), t.random_of_type(7));
    }

    #[test]
    fn representative_layout() {
        let t: CycleType = "3 2 1".parse().unwrap();
        assert_eq!(t.representative().to_string(), "(1 2 3)(4 5)");
        assert_eq!(t.representative().cycle_type(), t);
    }

    #[test]
    fn degree_changes_keep_nontrivial_cycles() {
        let t: CycleType = "3^1".parse().unwrap();
        let big = t.with_degree(7).unwrap();
        assert_eq!(big.to_string(), "1^4 3^1");
        assert_eq!(big.with_degree(3).unwrap(), t);
        assert!(big.with_degree(2).is_err());
        assert_eq!(big.support_size(), 3);
        assert_eq!(big.parity(), Parity::Even);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let t: CycleType = "2^3 1^6".parse().unwrap();
        assert_eq!(t.to_string(), "1^6 2^3");
        assert_eq!(t.to_string().parse::<CycleType>().unwrap(), t);
        assert!("0^2".parse::<CycleType>().is_err());
        assert!("".parse::<CycleType>().is_err());
    }
}
