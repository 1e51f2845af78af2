//! Permutations of `0..n` and partial bijections on class labels.

use std::fmt;

use crate::graph::ClassIndex;

/// A permutation of positions `0..n`; `images[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize);
        Permutation { images: (0..n as u8).collect() }
    }

    /// Returns `None` unless `images` is a bijection of `0..len`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        if n > u8::MAX as usize {
            return None;
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    /// Builds a permutation from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (idx, &a) in cyc.iter().enumerate() {
                if a >= n || touched[a] {
                    return None;
                }
                touched[a] = true;
                images[a] = cyc[(idx + 1) % cyc.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.len(), other.len());
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// Nontrivial cycles, each starting at its least point, sorted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Lengths of the nontrivial cycles, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Cycle notation over the given point names, `()` for the identity.
    pub fn to_cycle_string(&self, names: &[ClassIndex]) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|&i| names[i].to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<usize> = (0..self.len()).collect();
        f.write_str(&self.to_cycle_string(&names))
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// A partial bijection between class labels, sorted by source.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelMap {
    pairs: Vec<(ClassIndex, ClassIndex)>,
}

impl LabelMap {
    /// Returns `None` if the pairs are not injective in both coordinates.
    pub fn from_pairs(mut pairs: Vec<(ClassIndex, ClassIndex)>) -> Option<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return None;
            }
        }
        let mut targets: Vec<ClassIndex> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        if targets.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(LabelMap { pairs })
    }

    pub fn pairs(&self) -> &[(ClassIndex, ClassIndex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, a: ClassIndex) -> Option<ClassIndex> {
        self.pairs.binary_search_by_key(&a, |p| p.0).ok().map(|i| self.pairs[i].1)
    }

    pub fn domain(&self) -> Vec<ClassIndex> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn image(&self) -> Vec<ClassIndex> {
        let mut v: Vec<ClassIndex> = self.pairs.iter().map(|p| p.1).collect();
        v.sort_unstable();
        v
    }

    pub fn inverse(&self) -> LabelMap {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        LabelMap { pairs }
    }

    /// `self` first, then `other`, defined where both are.
    pub fn then(&self, other: &LabelMap) -> LabelMap {
        let pairs = self.pairs.iter().filter_map(|&(a, b)| other.get(b).map(|c| (a, c))).collect();
        LabelMap { pairs }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| a == b)
    }
}
