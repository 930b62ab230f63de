//! Small permutation groups by full enumeration.
//!
//! Groups are closed under composition by breadth-first multiplication by
//! generators, which is enough for the orders that occur here (at most a
//! few million elements). Class data is kept per cycle type, not per
//! conjugacy class.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactmat::Rational;
use crate::modpoly::CycleType;

pub const DEFAULT_BOUND: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("group exceeds the enumeration bound of {bound} elements")]
    GroupTooLarge { bound: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a bijection on 0..{0}")]
    NotBijective(usize),
    #[error("acting factor does not normalize the normal factor")]
    NotNormalizing,
    #[error("order check failed: expected {expected}, got {actual}")]
    OrderMismatch { expected: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A bijection on {0, ..., N−1}; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective(n));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u16).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u16).collect(),
        }
    }

    /// Permutation of `n` points given as disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(PermError::NotBijective(n));
                }
                images[x] = c[(k + 1) % c.len()];
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self` after `other`: i ↦ self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose(self).compose(&g.inverse())
    }

    /// The partition of N given by orbit sizes.
    pub fn cycle_type(&self) -> CycleType {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }

    /// Extend to a larger degree by fixing the new points, after shifting by `offset`.
    pub fn embed(&self, degree: usize, offset: usize) -> Permutation {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = (offset + x as usize) as u16;
        }
        Permutation { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, fixed points omitted
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.images[x] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite permutation group with its full element list and the exact
/// distribution of cycle types over its elements.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    type_counts: BTreeMap<CycleType, usize>,
}

impl EnumeratedGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        // Elements are kept sorted.
        self.elements.binary_search(g).is_ok()
    }

    pub fn type_counts(&self) -> &BTreeMap<CycleType, usize> {
        &self.type_counts
    }

    /// Exact frequency of each cycle type; sums to 1.
    pub fn type_distribution(&self) -> BTreeMap<CycleType, Rational> {
        let total = BigInt::from(self.order());
        self.type_counts
            .iter()
            .map(|(t, &c)| (t.clone(), Rational::new(BigInt::from(c), total.clone())))
            .collect()
    }

    pub fn type_frequency(&self, t: &CycleType) -> Rational {
        match self.type_counts.get(t) {
            Some(&c) => Rational::new(BigInt::from(c), BigInt::from(self.order())),
            None => Rational::zero(),
        }
    }

    pub fn has_type(&self, t: &CycleType) -> bool {
        self.type_counts.contains_key(t)
    }

    pub fn is_transitive(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The elements satisfying `pred`, which must form a subgroup.
    pub fn subgroup_where<F>(&self, pred: F) -> Result<EnumeratedGroup, PermError>
    where
        F: Fn(&Permutation) -> bool,
    {
        let kept: Vec<Permutation> = self.elements.iter().filter(|g| pred(g)).cloned().collect();
        let out = enumerate(self.degree, &kept, self.order().max(1))?;
        if out.order() != kept.len() {
            return Err(PermError::OrderMismatch {
                expected: kept.len(),
                actual: out.order(),
            });
        }
        Ok(out)
    }

    /// Same group acting on relabeled points: every element conjugated by `relabel`.
    pub fn relabel(&self, relabel: &Permutation) -> Result<EnumeratedGroup, PermError> {
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| g.conjugate_by(relabel))
            .collect();
        enumerate(self.degree, &gens, self.order().max(1))
    }
}

/// Closure of `generators` under composition, by breadth-first search.
pub fn enumerate(
    degree: usize,
    generators: &[Permutation],
    bound: usize,
) -> Result<EnumeratedGroup, PermError> {
    if bound == 0 {
        return Err(PermError::InvalidParameter(
            "bound must be at least 1".into(),
        ));
    }
    for g in generators {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
    }
    let gens: Vec<Permutation> = generators
        .iter()
        .filter(|g| !g.is_identity())
        .cloned()
        .collect();
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(PermError::GroupTooLarge { bound });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort_unstable();
    let mut type_counts = BTreeMap::new();
    for e in &elements {
        *type_counts.entry(e.cycle_type()).or_insert(0) += 1;
    }
    Ok(EnumeratedGroup {
        degree,
        generators: gens,
        elements,
        type_counts,
    })
}

/// Symmetric group on `n` points, from a transposition and an n-cycle.
pub fn symmetric_group(n: usize, bound: usize) -> Result<EnumeratedGroup, PermError> {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[&[0, 1]])?);
        let cyc: Vec<usize> = (0..n).collect();
        gens.push(Permutation::from_cycles(n, &[&cyc])?);
    }
    enumerate(n, &gens, bound)
}

pub fn cyclic_group(n: usize) -> Result<EnumeratedGroup, PermError> {
    let cyc: Vec<usize> = (0..n).collect();
    let gens = if n >= 2 {
        vec![Permutation::from_cycles(n, &[&cyc])?]
    } else {
        vec![]
    };
    enumerate(n, &gens, n.max(1))
}

pub fn trivial_group(n: usize) -> EnumeratedGroup {
    enumerate(n, &[], 1).expect("trivial group always enumerates")
}

/// Imprimitive wreath product `base wr top` on `base.degree() · top.degree()`
/// points. Point `b·d + i` is point `i` of block `b`; the base group acts
/// independently on every block and `top` permutes blocks rigidly.
pub fn wreath(
    base: &EnumeratedGroup,
    top: &EnumeratedGroup,
    bound: usize,
) -> Result<EnumeratedGroup, PermError> {
    let d = base.degree();
    let m = top.degree();
    let n = d * m;
    let expected = (base.order() as u128)
        .checked_pow(m as u32)
        .and_then(|x| x.checked_mul(top.order() as u128));
    match expected {
        Some(e) if e <= bound as u128 => {}
        _ => return Err(PermError::GroupTooLarge { bound }),
    }
    let mut gens = Vec::new();
    for b in 0..m {
        for g in base.generators() {
            gens.push(g.embed(n, b * d));
        }
    }
    for t in top.generators() {
        let images: Vec<usize> = (0..n).map(|x| t.apply(x / d) * d + x % d).collect();
        gens.push(Permutation::new(images)?);
    }
    enumerate(n, &gens, bound)
}

/// `Z/d wr top`: each block of size `d` carries the rotation `i ↦ i+1 mod d`.
pub fn wreath_product(
    d: usize,
    top: &EnumeratedGroup,
    bound: usize,
) -> Result<EnumeratedGroup, PermError> {
    if d == 0 {
        return Err(PermError::InvalidParameter(
            "block size must be at least 1".into(),
        ));
    }
    wreath(&cyclic_group(d)?, top, bound)
}

/// The group generated by `normal` and `acting` inside the symmetric group on
/// their common degree, where `acting` acts on `normal` by conjugation.
/// Fails if conjugation does not preserve `normal`, or if the resulting order
/// differs from |normal|·|acting| / |normal ∩ acting|.
pub fn semidirect_by_action(
    normal: &EnumeratedGroup,
    acting: &EnumeratedGroup,
    bound: usize,
) -> Result<EnumeratedGroup, PermError> {
    if normal.degree() != acting.degree() {
        return Err(PermError::DegreeMismatch(normal.degree(), acting.degree()));
    }
    for a in acting.generators() {
        for g in normal.generators() {
            if !normal.contains(&g.conjugate_by(a)) {
                return Err(PermError::NotNormalizing);
            }
        }
    }
    let mut gens: Vec<Permutation> = normal.generators().to_vec();
    gens.extend(acting.generators().iter().cloned());
    let out = enumerate(normal.degree(), &gens, bound)?;
    let meet = acting
        .elements()
        .iter()
        .filter(|g| normal.contains(g))
        .count();
    let expected = normal.order() * acting.order() / meet;
    if out.order() != expected {
        return Err(PermError::OrderMismatch {
            expected,
            actual: out.order(),
        });
    }
    Ok(out)
}

/// Direct product acting on the disjoint union of the point sets.
pub fn direct_product(
    factors: &[EnumeratedGroup],
    bound: usize,
) -> Result<EnumeratedGroup, PermError> {
    let n: usize = factors.iter().map(|f| f.degree()).sum();
    let mut gens = Vec::new();
    let mut off = 0;
    for f in factors {
        gens.extend(f.generators().iter().map(|g| g.embed(n, off)));
        off += f.degree();
    }
    enumerate(n, &gens, bound)
}

/// Total-variation distance between two cycle-type distributions.
pub fn total_variation(a: &BTreeMap<CycleType, f64>, b: &BTreeMap<CycleType, f64>) -> f64 {
    let mut keys: Vec<&CycleType> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

/// Exact distribution as floating-point frequencies.
pub fn to_f64_distribution(d: &BTreeMap<CycleType, Rational>) -> BTreeMap<CycleType, f64> {
    use num_traits::ToPrimitive;
    d.iter()
        .map(|(k, v)| (k.clone(), v.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::frac;

    fn ct(v: &[u32]) -> CycleType {
        CycleType::new(v.to_vec())
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Permutation::identity(4).cycle_type(), ct(&[1, 1, 1, 1]));
        let four = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(four.cycle_type(), ct(&[4]));
        let dbl = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(dbl.cycle_type(), ct(&[2, 2]));
    }

    #[test]
    fn enumerate_examples() {
        let t = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let g = enumerate(2, &[t], 10).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.type_frequency(&ct(&[1, 1])), frac(1, 2));
        assert_eq!(g.type_frequency(&ct(&[2])), frac(1, 2));

        let s3 = symmetric_group(3, 100).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.type_frequency(&ct(&[1, 1, 1])), frac(1, 6));
        assert_eq!(s3.type_frequency(&ct(&[2, 1])), frac(1, 2));
        assert_eq!(s3.type_frequency(&ct(&[3])), frac(1, 3));

        let triv = enumerate(5, &[], 1).unwrap();
        assert_eq!(triv.order(), 1);
        assert_eq!(triv.type_frequency(&ct(&[1; 5])), frac(1, 1));
    }

    #[test]
    fn enumerate_errors() {
        let s5 = symmetric_group(5, 1000).unwrap();
        assert!(matches!(
            enumerate(5, s5.generators(), 100),
            Err(PermError::GroupTooLarge { bound: 100 })
        ));
        let t = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        assert_eq!(
            enumerate(4, &[t], 10).unwrap_err(),
            PermError::DegreeMismatch(4, 3)
        );
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn wreath_examples() {
        let c2 = wreath_product(2, &trivial_group(1), 100).unwrap();
        assert_eq!((c2.degree(), c2.order()), (2, 2));
        let b2 = wreath_product(2, &symmetric_group(2, 10).unwrap(), 100).unwrap();
        assert_eq!((b2.degree(), b2.order()), (4, 8));
        let s3 = symmetric_group(3, 10).unwrap();
        let same = wreath_product(1, &s3, 100).unwrap();
        assert_eq!(same.order(), 6);
        assert_eq!(same.type_counts(), s3.type_counts());
        for (d, m) in [(2usize, 3usize), (3, 2), (2, 4)] {
            let top = symmetric_group(m, 1000).unwrap();
            let w = wreath_product(d, &top, 100_000).unwrap();
            assert_eq!(w.order(), d.pow(m as u32) * factorial(m));
        }
    }

    #[test]
    fn semidirect_examples() {
        // (Z/2)^2 on 4 points: flip each pair
        let k = enumerate(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(4, &[&[2, 3]]).unwrap(),
            ],
            10,
        )
        .unwrap();
        let swap = enumerate(
            4,
            &[Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap()],
            10,
        )
        .unwrap();
        let sd = semidirect_by_action(&k, &swap, 100).unwrap();
        assert_eq!(sd.order(), 8);

        let triv4 = trivial_group(4);
        assert_eq!(semidirect_by_action(&triv4, &swap, 100).unwrap().order(), 2);
        assert_eq!(semidirect_by_action(&k, &triv4, 100).unwrap().order(), 4);

        // <(0 1)> is not normalized by (1 2) in S_3
        let a = enumerate(3, &[Permutation::from_cycles(3, &[&[0, 1]]).unwrap()], 10).unwrap();
        let b = enumerate(3, &[Permutation::from_cycles(3, &[&[1, 2]]).unwrap()], 10).unwrap();
        assert_eq!(
            semidirect_by_action(&a, &b, 100).unwrap_err(),
            PermError::NotNormalizing
        );
    }

    #[test]
    fn frequencies_sum_to_one_and_order_divides_factorial() {
        for g in [
            symmetric_group(4, 100).unwrap(),
            wreath_product(2, &symmetric_group(3, 10).unwrap(), 1000).unwrap(),
            cyclic_group(5).unwrap(),
        ] {
            let total: Rational = g.type_distribution().values().cloned().sum();
            assert_eq!(total, frac(1, 1));
            assert_eq!(factorial(g.degree()) % g.order(), 0);
        }
    }

    #[test]
    fn relabeling_preserves_type_distribution() {
        let g = wreath_product(2, &symmetric_group(2, 10).unwrap(), 100).unwrap();
        let r = Permutation::from_cycles(4, &[&[0, 3, 1]]).unwrap();
        let h = g.relabel(&r).unwrap();
        assert_eq!(g.type_distribution(), h.type_distribution());
        assert_eq!(h.order(), 8);
    }
}
