//! Closed-form metric structure of the k-transposition Cayley graph Γᵏₙ.
//!
//! The vertex set is `Sym(n)` for odd `k` and `Alt(n)` for even `k`; the
//! generators are all permutations of cycle type `1^{n-2k} 2^k`. Write
//! `d(g) = n - |g|` for the cycle deficit. Distance from the identity is a
//! class function, and in the analytic range it depends only on `d(g)`,
//! on membership in the generator class, and (for `k = 2`) on being a
//! 3-cycle:
//!
//! | k        | radius |
//! |----------|--------|
//! | 1        | `d` |
//! | even     | 0 for `e`, 1 on generators, 2 if `d <= 2k`, else `ceil(d/k)`; odd `g` is not a vertex |
//! | odd >= 3 | 0 for `e`, 1 on generators; even `d`: `2 ceil(d/2k)`; odd `d`: 3 if `d <= 3k`, else `2 ceil((d-k)/2k) + 1` |
//!
//! For `k = 2` the rule reads: 3-cycles and `d = 4` lie on sphere 2 and
//! `d = 2r` on sphere `r >= 3`. The formulas hold for `k = 1, n >= 2`,
//! `k = 2, n >= 5` and `k >= 3, n >= 4k`; elsewhere the graph may be
//! non-isometric to its larger neighbours and only the oracle applies.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::cycle_type::{factorial, partitions_of, CycleType};
use crate::perm::{Parity, PermError, Permutation};
use crate::stirling::StirlingFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("invalid graph: {0}")]
    InvalidSpec(String),
    #[error("k = {k}, n = {n} is outside analytic validity; use the oracle")]
    OutsideAnalyticValidity { k: usize, n: usize },
    #[error("permutation has degree {got}, graph has n = {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("{0} is not a vertex of the graph")]
    NotAVertex(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("factorization of {g} produced {got} factors, expected {expected}")]
    FactorizationLength {
        g: String,
        got: usize,
        expected: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("{g} has cycle deficit {deficit}; need an even deficit 2t with 1 <= t <= {k}")]
    Precondition { g: String, deficit: usize, k: usize },
    #[error("padding needs {needed} fixed points, only {available} available")]
    InsufficientFixedPoints { needed: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    Symmetric,
    Alternating,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Symmetric => "Sym",
            Group::Alternating => "Alt",
        })
    }
}

/// The graph Γᵏₙ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    k: usize,
    n: usize,
}

impl GraphSpec {
    pub fn new(k: usize, n: usize) -> Result<Self, MetricError> {
        if k == 0 {
            return Err(MetricError::InvalidSpec("k must be at least 1".into()));
        }
        if n < 2 * k || n < 2 {
            return Err(MetricError::InvalidSpec(format!(
                "n = {n} is below 2k = {}",
                2 * k
            )));
        }
        if k.is_multiple_of(2) && n < 5 {
            return Err(MetricError::InvalidSpec(format!(
                "even k needs n >= 5 (k = {k}, n = {n})"
            )));
        }
        Ok(GraphSpec { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> Group {
        if self.k % 2 == 1 {
            Group::Symmetric
        } else {
            Group::Alternating
        }
    }

    /// Whether the closed-form radius rules apply.
    pub fn analytic_valid(&self) -> bool {
        match self.k {
            1 => self.n >= 2,
            2 => self.n >= 5,
            k => self.n >= 4 * k,
        }
    }

    pub fn group_order(&self) -> BigUint {
        let full = factorial(self.n);
        match self.group() {
            Group::Symmetric => full,
            Group::Alternating => full / 2u32,
        }
    }

    pub fn generator_type(&self) -> CycleType {
        CycleType::k_transposition(self.n, self.k).expect("n >= 2k")
    }

    pub fn contains_type(&self, t: &CycleType) -> bool {
        t.degree() == self.n && (self.group() == Group::Symmetric || t.parity() == Parity::Even)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && (self.group() == Group::Symmetric || g.parity() == Parity::Even)
    }

    /// Cycle types of the vertex group.
    pub fn vertex_types(&self) -> impl Iterator<Item = CycleType> + '_ {
        partitions_of(self.n).filter(move |t| self.contains_type(t))
    }

    fn require_analytic(&self) -> Result<(), MetricError> {
        if self.analytic_valid() {
            Ok(())
        } else {
            Err(MetricError::OutsideAnalyticValidity {
                k: self.k,
                n: self.n,
            })
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ^{}_{} on {}({})", self.k, self.n, self.group(), self.n)
    }
}

/// Sphere membership of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SphereAssignment {
    Radius(usize),
    NotAVertex,
}

impl SphereAssignment {
    pub fn radius(self) -> Option<usize> {
        match self {
            SphereAssignment::Radius(r) => Some(r),
            SphereAssignment::NotAVertex => None,
        }
    }
}

impl fmt::Display for SphereAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereAssignment::Radius(r) => write!(f, "{r}"),
            SphereAssignment::NotAVertex => f.write_str("not-a-vertex"),
        }
    }
}

/// Which branch of the radius rule decided an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadiusRule {
    Identity,
    Generator,
    /// k = 1: radius equals the cycle deficit.
    CycleDeficit,
    /// k = 2: a 3-cycle lies on sphere 2.
    ThreeCycle,
    /// Even deficit in `2..=2k`, not a generator: sphere 2.
    SecondSphereBand,
    /// Odd k: odd deficit in `1..=3k`, not a generator: sphere 3.
    ThirdSphereBand,
    /// Even k, deficit above 2k: `ceil(d/k)`.
    EvenKBand,
    /// Odd k, even deficit above 2k: `2 ceil(d/2k)`.
    OddKEvenBand,
    /// Odd k, odd deficit above 3k: `2 ceil((d-k)/2k) + 1`.
    OddKOddBand,
    /// Even k, odd permutation.
    WrongParity,
}

impl fmt::Display for RadiusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RadiusRule::Identity => "identity",
            RadiusRule::Generator => "generator class (sphere 1)",
            RadiusRule::CycleDeficit => "k=1: radius = n - |g|",
            RadiusRule::ThreeCycle => "k=2: 3-cycles lie on sphere 2",
            RadiusRule::SecondSphereBand => "even deficit 2 <= n-|g| <= 2k outside the generator class",
            RadiusRule::ThirdSphereBand => "odd k: odd deficit 1 <= n-|g| <= 3k outside the generator class",
            RadiusRule::EvenKBand => "even k: radius = ceil((n-|g|)/k)",
            RadiusRule::OddKEvenBand => "odd k, even deficit: radius = 2 ceil((n-|g|)/2k)",
            RadiusRule::OddKOddBand => "odd k, odd deficit: radius = 2 ceil((n-|g|-k)/2k) + 1",
            RadiusRule::WrongParity => "odd permutation, vertex group is Alt(n)",
        })
    }
}

/// Facts about a class that decide its radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ClassProfile {
    deficit: usize,
    is_generator: bool,
    is_three_cycle: bool,
}

impl ClassProfile {
    fn of(t: &CycleType, k: usize) -> Self {
        let support = t.support_size();
        ClassProfile {
            deficit: t.deficit(),
            is_generator: support == 2 * k && t.multiplicity(2) == k,
            is_three_cycle: support == 3 && t.multiplicity(3) == 1,
        }
    }
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn radius_rule(k: usize, p: ClassProfile) -> (SphereAssignment, RadiusRule) {
    use RadiusRule::*;
    use SphereAssignment::*;
    let d = p.deficit;
    if d == 0 {
        return (Radius(0), Identity);
    }
    if k.is_multiple_of(2) && d % 2 == 1 {
        return (NotAVertex, WrongParity);
    }
    if p.is_generator {
        return (Radius(1), Generator);
    }
    if k == 1 {
        return (Radius(d), CycleDeficit);
    }
    if k == 2 && p.is_three_cycle {
        return (Radius(2), ThreeCycle);
    }
    if d.is_multiple_of(2) && d <= 2 * k {
        return (Radius(2), SecondSphereBand);
    }
    if k.is_multiple_of(2) {
        return (Radius(div_ceil(d, k)), EvenKBand);
    }
    if d.is_multiple_of(2) {
        (Radius(2 * div_ceil(d, 2 * k)), OddKEvenBand)
    } else if d <= 3 * k {
        (Radius(3), ThirdSphereBand)
    } else {
        (Radius(2 * div_ceil(d - k, 2 * k) + 1), OddKOddBand)
    }
}

/// Radius from the class facts alone; used by streaming counters that never
/// build a [`CycleType`].
pub(crate) fn radius_for_profile(
    k: usize,
    deficit: usize,
    is_generator: bool,
    is_three_cycle: bool,
) -> SphereAssignment {
    let profile = ClassProfile {
        deficit,
        is_generator,
        is_three_cycle,
    };
    radius_rule(k, profile).0
}

/// Radius of a class together with the branch that decided it.
pub fn classify_type(
    spec: &GraphSpec,
    t: &CycleType,
) -> Result<(SphereAssignment, RadiusRule), MetricError> {
    spec.require_analytic()?;
    if t.degree() != spec.n {
        return Err(MetricError::DegreeMismatch {
            expected: spec.n,
            got: t.degree(),
        });
    }
    Ok(radius_rule(spec.k, ClassProfile::of(t, spec.k)))
}

pub fn classify(
    spec: &GraphSpec,
    g: &Permutation,
) -> Result<(SphereAssignment, RadiusRule), MetricError> {
    classify_type(spec, &g.cycle_type())
}

/// Distance from the identity to any element of the class `t`.
pub fn sphere_radius_of_type(
    spec: &GraphSpec,
    t: &CycleType,
) -> Result<SphereAssignment, MetricError> {
    classify_type(spec, t).map(|(a, _)| a)
}

/// Distance from the identity to `g`.
pub fn sphere_radius(spec: &GraphSpec, g: &Permutation) -> Result<SphereAssignment, MetricError> {
    classify(spec, g).map(|(a, _)| a)
}

/// `d(u, v) = radius(u⁻¹ v)` by left-invariance.
pub fn distance(
    spec: &GraphSpec,
    u: &Permutation,
    v: &Permutation,
) -> Result<SphereAssignment, MetricError> {
    let offset = u.inverse().compose(v)?;
    if offset.degree() != spec.n {
        return Err(MetricError::DegreeMismatch {
            expected: spec.n,
            got: offset.degree(),
        });
    }
    if !spec.contains(u) {
        return Ok(SphereAssignment::NotAVertex);
    }
    sphere_radius(spec, &offset)
}

/// Closed-form diameter.
pub fn diameter(spec: &GraphSpec) -> Result<usize, MetricError> {
    spec.require_analytic()?;
    let (k, n) = (spec.k, spec.n);
    Ok(match k {
        1 => n - 1,
        _ if k % 2 == 0 => div_ceil(n - 2, k),
        _ => {
            let two_k = 2 * k;
            if n % 2 == 0 {
                (2 * div_ceil(n - 2, two_k)).max(2 * div_ceil(n - k - 1, two_k) + 1)
            } else {
                (2 * div_ceil(n - k - 2, two_k) + 1).max(2 * div_ceil(n - 1, two_k))
            }
        }
    })
}

/// Above this degree sphere sizes are grouped by cycle count instead of
/// summed over partitions.
const PARTITION_SUM_MAX_N: usize = 40;

/// `|S_r|` for `r = 0..=diameter`.
pub fn sphere_sizes(spec: &GraphSpec) -> Result<Vec<BigUint>, MetricError> {
    if spec.n <= PARTITION_SUM_MAX_N {
        sphere_sizes_by_class(spec)
    } else {
        sphere_sizes_by_cycle_count(spec)
    }
}

/// Sphere sizes as sums of class sizes over every vertex class.
pub fn sphere_sizes_by_class(spec: &GraphSpec) -> Result<Vec<BigUint>, MetricError> {
    let diam = diameter(spec)?;
    let mut sizes = vec![BigUint::zero(); diam + 1];
    for t in partitions_of(spec.n) {
        if let SphereAssignment::Radius(r) = sphere_radius_of_type(spec, &t)? {
            sizes[r] += t.class_size();
        }
    }
    Ok(sizes)
}

/// Sphere sizes from the number of permutations with each cycle count,
/// correcting for the generator class and (k = 2) the 3-cycles.
pub fn sphere_sizes_by_cycle_count(spec: &GraphSpec) -> Result<Vec<BigUint>, MetricError> {
    let diam = diameter(spec)?;
    let (k, n) = (spec.k, spec.n);
    let mut by_cycles = StirlingFunction::classical();
    let generators = spec.generator_type().class_size();
    let three_cycles = if k == 2 {
        CycleType::from_multiplicities([(3, 1), (1, n - 3)])
            .expect("n >= 5")
            .class_size()
    } else {
        BigUint::zero()
    };
    let mut sizes = vec![BigUint::zero(); diam + 1];
    for cycles in 1..=n {
        let deficit = n - cycles;
        let mut generic = by_cycles
            .eval(n, cycles as i64)
            .expect("classical function defined for n >= 1");
        if deficit == k {
            generic -= &generators;
            sizes[1] += &generators;
        }
        if k == 2 && deficit == 2 {
            generic -= &three_cycles;
            sizes[2] += &three_cycles;
        }
        let profile = ClassProfile {
            deficit,
            is_generator: false,
            is_three_cycle: false,
        };
        if let (SphereAssignment::Radius(r), _) = radius_rule(k, profile) {
            sizes[r] += generic;
        }
    }
    Ok(sizes)
}

pub fn sphere_size(spec: &GraphSpec, r: usize) -> Result<BigUint, MetricError> {
    Ok(sphere_sizes(spec)?.get(r).cloned().unwrap_or_default())
}

/// `|B_r|`; equals the group order for `r >= diameter`.
pub fn ball_size(spec: &GraphSpec, r: usize) -> Result<BigUint, MetricError> {
    Ok(sphere_sizes(spec)?.into_iter().take(r + 1).sum())
}

/// Factors `g` as `x · y` with `x`, `y` both `k`-transpositions.
///
/// Requires `|g| = n - 2t` with `1 <= t <= k`. Each cycle is written as a
/// product of two reflections of its cyclic order; the halves are shared out
/// so that each factor receives exactly `t` transpositions, then both factors
/// are padded with the same `k - t` transpositions on the smallest fixed points.
pub fn factor_two_k_transpositions(
    g: &Permutation,
    k: usize,
) -> Result<(Permutation, Permutation), FactorError> {
    if k == 0 {
        return Err(FactorError::ZeroK);
    }
    let n = g.degree();
    let deficit = g.deficit();
    if !deficit.is_multiple_of(2) || deficit == 0 || deficit > 2 * k {
        return Err(FactorError::Precondition {
            g: g.to_string(),
            deficit,
            k,
        });
    }
    let t = deficit / 2;
    let mut x: Vec<u32> = (0..n as u32).collect();
    let mut y = x.clone();
    let mut even_seen = 0usize;
    for cycle in g.nontrivial_cycles() {
        let len = cycle.len();
        // Reflection c maps the i-th point (1-based) to the (c - i)-th.
        let (cx, cy) = if len % 2 == 0 {
            even_seen += 1;
            if even_seen % 2 == 1 {
                (len - 1, 0)
            } else {
                (0, 1)
            }
        } else {
            (len - 1, 0)
        };
        apply_reflection(&mut x, &cycle, cx);
        apply_reflection(&mut y, &cycle, cy);
    }
    let padding = k - t;
    if padding > 0 {
        let fixed: Vec<usize> = (0..n).filter(|&i| g.images()[i] as usize == i).collect();
        if fixed.len() < 2 * padding {
            return Err(FactorError::InsufficientFixedPoints {
                needed: 2 * padding,
                available: fixed.len(),
            });
        }
        for pair in fixed[..2 * padding].chunks(2) {
            for img in [&mut x, &mut y] {
                img[pair[0]] = pair[1] as u32;
                img[pair[1]] = pair[0] as u32;
            }
        }
    }
    let x = Permutation::from_images_unchecked(x);
    let y = Permutation::from_images_unchecked(y);
    debug_assert_eq!(&x.compose(&y).unwrap(), g);
    Ok((x, y))
}

fn apply_reflection(images: &mut [u32], cycle: &[usize], c: usize) {
    let len = cycle.len();
    for pos in 0..len {
        // 1-based index i = pos + 1, image index (c - i) mod len, back to 0-based.
        let target = (c + 2 * len - pos - 1) % len;
        let target = (target + len - 1) % len;
        images[cycle[pos] - 1] = (cycle[target] - 1) as u32;
    }
}

fn radius_of_vertex(spec: &GraphSpec, g: &Permutation) -> Result<usize, MetricError> {
    if g.degree() != spec.n {
        return Err(MetricError::DegreeMismatch {
            expected: spec.n,
            got: g.degree(),
        });
    }
    sphere_radius(spec, g)?
        .radius()
        .ok_or_else(|| MetricError::NotAVertex(g.to_string()))
}

/// Splits off `delta` transpositions: returns `(g1, x)` with `g = g1 · x`
/// and `n - |g1| = n - |g| - delta`. Each step removes the last point of the
/// cycle through the smallest moved point.
fn peel(g: &Permutation, delta: usize) -> Result<(Permutation, Permutation), MetricError> {
    let n = g.degree();
    let mut g1 = g.clone();
    let mut x = Permutation::identity(n);
    for _ in 0..delta {
        let cycle = g1
            .nontrivial_cycles()
            .into_iter()
            .next()
            .expect("deficit is positive");
        let tau = Permutation::transposition(n, cycle[0], cycle[cycle.len() - 1])?;
        g1 = g1.compose(&tau)?;
        x = tau.compose(&x)?;
    }
    Ok((g1, x))
}

/// A generator on the smallest points outside `Supp(g)`, if there is room.
fn disjoint_generator(spec: &GraphSpec, g: &Permutation) -> Option<Permutation> {
    let fixed: Vec<usize> = (1..=spec.n).filter(|&p| g.image(p) == p).collect();
    if fixed.len() < 2 * spec.k {
        return None;
    }
    let cycles: Vec<Vec<usize>> = fixed[..2 * spec.k].chunks(2).map(|c| c.to_vec()).collect();
    Permutation::from_cycles(spec.n, &cycles).ok()
}

/// A shortest word in the generators whose ordered product is `g`.
///
/// Radius 2 is handled by [`factor_two_k_transpositions`]. For radius
/// `r >= 3`, `g = g1 · x` is split with `g1` on sphere `r - 1` and `x` a
/// product of at most `k` transpositions; `g1` is factored recursively, its
/// last factor `h` is merged with `x`, and `h · x` (on sphere 2) is factored
/// again.
pub fn geodesic_factorization(
    spec: &GraphSpec,
    g: &Permutation,
) -> Result<Vec<Permutation>, MetricError> {
    let r = radius_of_vertex(spec, g)?;
    let word = match r {
        0 => Vec::new(),
        1 => vec![g.clone()],
        2 => {
            let (x, y) = factor_two_k_transpositions(g, spec.k)?;
            vec![x, y]
        }
        _ => {
            let deficit = g.deficit();
            let mut split = None;
            for delta in 1..=spec.k.min(deficit) {
                let (g1, x) = peel(g, delta)?;
                if radius_of_vertex(spec, &g1).ok() == Some(r - 1) {
                    split = Some((g1, x));
                    break;
                }
            }
            match split {
                Some((g1, x)) => {
                    let mut word = geodesic_factorization(spec, &g1)?;
                    let last = word.pop().expect("radius r-1 >= 2");
                    let merged = last.compose(&x)?;
                    word.extend(geodesic_factorization(spec, &merged)?);
                    word
                }
                None => {
                    // Odd k, g a transposition: g = (g h) · h with g h on sphere 2.
                    let h = disjoint_generator(spec, g).ok_or_else(|| {
                        MetricError::NotAVertex(format!("{g}: no split found"))
                    })?;
                    let g1 = g.compose(&h)?;
                    let mut word = geodesic_factorization(spec, &g1)?;
                    word.push(h);
                    word
                }
            }
        }
    };
    if word.len() != r {
        return Err(MetricError::FactorizationLength {
            g: g.to_string(),
            got: word.len(),
            expected: r,
        });
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(k: usize, n: usize) -> GraphSpec {
        GraphSpec::new(k, n).unwrap()
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    fn product(word: &[Permutation], n: usize) -> Permutation {
        word.iter()
            .fold(Permutation::identity(n), |acc, h| acc.compose(h).unwrap())
    }

    #[test]
    fn spec_validation() {
        assert!(GraphSpec::new(0, 5).is_err());
        assert!(GraphSpec::new(3, 5).is_err());
        assert!(GraphSpec::new(2, 4).is_err());
        assert_eq!(spec(2, 5).group(), Group::Alternating);
        assert_eq!(spec(3, 12).group(), Group::Symmetric);
        assert!(spec(3, 12).analytic_valid());
        assert!(!spec(3, 11).analytic_valid());
        assert!(spec(2, 5).analytic_valid());
        assert!(spec(1, 2).analytic_valid());
        assert_eq!(spec(2, 5).group_order(), BigUint::from(60u32));
    }

    #[test]
    fn radius_examples() {
        let r = |k, n, s| sphere_radius(&spec(k, n), &p(s, n)).unwrap();
        assert_eq!(r(1, 5, "(1 2 3)"), SphereAssignment::Radius(2));
        assert_eq!(r(2, 5, "(1 2 3)"), SphereAssignment::Radius(2));
        assert_eq!(r(3, 12, "(1 2)"), SphereAssignment::Radius(3));
        assert_eq!(r(2, 5, "(1 2)"), SphereAssignment::NotAVertex);
        assert_eq!(r(2, 5, "(1 2)(3 4)"), SphereAssignment::Radius(1));
        assert_eq!(r(2, 5, "(1 2 3 4 5)"), SphereAssignment::Radius(2));
        assert_eq!(r(2, 7, "(1 2 3 4 5 6 7)"), SphereAssignment::Radius(3));
        assert_eq!(r(4, 16, "(1 2)(3 4)"), SphereAssignment::Radius(2));
        assert_eq!(r(3, 12, "(1 2)(3 4)(5 6)"), SphereAssignment::Radius(1));
        assert_eq!(
            sphere_radius(&spec(3, 11), &Permutation::identity(11)),
            Err(MetricError::OutsideAnalyticValidity { k: 3, n: 11 })
        );
    }

    #[test]
    fn distance_is_left_invariant() {
        let s = spec(1, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let u = CycleType::identity(6).random_member(&mut rng);
            let t: CycleType = "2 2 1 1".parse().unwrap();
            let u = u.compose(&t.random_member(&mut rng)).unwrap();
            let v = CycleType::from_parts(vec![3, 2, 1]).unwrap().random_member(&mut rng);
            let d = distance(&s, &u, &v).unwrap();
            assert_eq!(d, distance(&s, &v, &u).unwrap());
            assert_eq!(d.radius().unwrap(), 6 - u.inverse().compose(&v).unwrap().cycle_count());
            assert_eq!(distance(&s, &u, &u).unwrap(), SphereAssignment::Radius(0));
        }
        let h = p("(1 2)(3 4)(5 6)", 12);
        let e = Permutation::identity(12);
        assert_eq!(distance(&spec(3, 12), &e, &h).unwrap(), SphereAssignment::Radius(1));
    }

    #[test]
    fn sphere_and_ball_sizes() {
        assert_eq!(ball_size(&spec(1, 4), 1).unwrap(), BigUint::from(7u32));
        assert_eq!(sphere_size(&spec(3, 12), 0).unwrap(), BigUint::from(1u32));
        assert_eq!(ball_size(&spec(2, 5), 2).unwrap(), BigUint::from(60u32));
        let sizes: Vec<u64> = sphere_sizes(&spec(2, 5))
            .unwrap()
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        assert_eq!(sizes, vec![1, 15, 44]);
    }

    #[test]
    fn sizes_sum_to_group_order_and_routes_agree() {
        for (k, n) in [(1, 2), (1, 7), (2, 5), (2, 9), (3, 12), (3, 17), (4, 16), (5, 23), (2, 30), (3, 40)] {
            let s = spec(k, n);
            let by_class = sphere_sizes_by_class(&s).unwrap();
            assert_eq!(by_class, sphere_sizes_by_cycle_count(&s).unwrap(), "k={k} n={n}");
            assert_eq!(by_class.iter().sum::<BigUint>(), s.group_order());
            let diam = diameter(&s).unwrap();
            assert!(!by_class[diam].is_zero(), "sphere at the diameter is nonempty");
            assert_eq!(ball_size(&s, diam).unwrap(), s.group_order());
        }
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&spec(1, 6)).unwrap(), 5);
        assert_eq!(diameter(&spec(3, 12)).unwrap(), 5);
        assert_eq!(diameter(&spec(4, 16)).unwrap(), 4);
        assert_eq!(diameter(&spec(2, 5)).unwrap(), 2);
        for k in 1..=6 {
            for n in (4 * k).max(5)..(4 * k + 20) {
                let s = spec(k, n);
                let max_r = s
                    .vertex_types()
                    .filter_map(|t| sphere_radius_of_type(&s, &t).unwrap().radius())
                    .max()
                    .unwrap();
                assert_eq!(diameter(&s).unwrap(), max_r, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn factor_examples() {
        let (x, y) = factor_two_k_transpositions(&p("(1 2 3 4)(5 6)", 8), 2).unwrap();
        assert_eq!((x.to_string(), y.to_string()), ("(1 2)(3 4)".into(), "(1 3)(5 6)".into()));
        let (x, y) = factor_two_k_transpositions(&p("(1 5 2 3 4)", 5), 2).unwrap();
        assert_eq!((x.to_string(), y.to_string()), ("(1 2)(3 4)".into(), "(1 3)(2 5)".into()));
        // The identity the construction is modelled on.
        assert_eq!(
            p("(1 2)(3 4)", 5).compose(&p("(1 3)(2 5)", 5)).unwrap(),
            p("(1 5 2 3 4)", 5)
        );
    }

    #[test]
    fn factor_errors() {
        assert!(matches!(
            factor_two_k_transpositions(&p("(1 2)", 6), 2),
            Err(FactorError::Precondition { .. })
        ));
        assert!(matches!(
            factor_two_k_transpositions(&Permutation::identity(6), 2),
            Err(FactorError::Precondition { .. })
        ));
        assert!(matches!(
            factor_two_k_transpositions(&p("(1 2 3)", 4), 2),
            Err(FactorError::InsufficientFixedPoints { needed: 2, available: 1 })
        ));
    }

    #[test]
    fn factor_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let k = rng.gen_range(1..=8);
            let n = rng.gen_range((4 * k).max(2)..=40.max(4 * k));
            let t = rng.gen_range(1..=k);
            let g = random_with_deficit(&mut rng, n, 2 * t);
            let (x, y) = factor_two_k_transpositions(&g, k).unwrap();
            assert!(x.is_k_transposition(k).unwrap() && y.is_k_transposition(k).unwrap());
            assert_eq!(x.compose(&y).unwrap(), g);
        }
    }

    fn random_with_deficit(rng: &mut ChaCha8Rng, n: usize, deficit: usize) -> Permutation {
        CycleType::random_with_cycle_count(rng, n, n - deficit).random_member(rng)
    }

    #[test]
    fn geodesic_examples() {
        let s = spec(3, 12);
        assert!(geodesic_factorization(&s, &Permutation::identity(12)).unwrap().is_empty());
        let h = p("(1 2)(3 4)(5 6)", 12);
        assert_eq!(geodesic_factorization(&s, &h).unwrap(), vec![h]);
        let g = p("(1 2)", 12);
        let word = geodesic_factorization(&s, &g).unwrap();
        assert_eq!(word.len(), 3);
        assert!(word.iter().all(|w| w.is_k_transposition(3).unwrap()));
        assert_eq!(product(&word, 12), g);
    }

    #[test]
    fn geodesics_on_all_classes() {
        for (k, n) in [(1, 6), (2, 5), (2, 8), (3, 12), (3, 13), (4, 16), (5, 20)] {
            let s = spec(k, n);
            for t in s.vertex_types() {
                let g = t.representative();
                let word = geodesic_factorization(&s, &g).unwrap();
                assert_eq!(word.len(), sphere_radius(&s, &g).unwrap().radius().unwrap());
                assert!(word.iter().all(|w| w.is_k_transposition(k).unwrap()));
                assert_eq!(product(&word, n), g, "k={k} n={n} type {t}");
            }
        }
    }

    #[test]
    fn deletion_shift_matches_cycle_bookkeeping() {
        // Removing the top point lowers the transposition distance by one
        // exactly when that point is moved, for v and v·g alike.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let n = rng.gen_range(2..10);
            let top = n + 1;
            let v = CycleType::identity(top).random_member(&mut rng);
            let dv = rng.gen_range(0..top);
            let v = v.compose(&random_with_deficit(&mut rng, top, dv)).unwrap();
            let dg = rng.gen_range(0..n);
            let g = random_with_deficit(&mut rng, n, dg).embed(top).unwrap();
            let big = spec(1, top);
            let small = spec(1, n);
            let r = |s: &GraphSpec, x: &Permutation| sphere_radius(s, x).unwrap().radius().unwrap();
            let vg = v.compose(&g).unwrap();
            let c_v = r(&big, &v) - r(&small, &v.delete().unwrap());
            let c_vg = r(&big, &vg) - r(&small, &vg.delete().unwrap());
            assert_eq!(c_v, c_vg);
            assert_eq!(c_v, usize::from(v.moves_top()));
        }
    }
}
