//! Matroids on labelled ground sets of at most 16 elements, represented by
//! their canonical sorted list of bases as bit masks. Covers the standard
//! oracles (rank, closure, flats), minors, duality, connectivity, the
//! beta-invariant, series/parallel extensions, simplification, and the
//! series-parallel / quasi series-parallel predicates.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

pub const MAX_GROUND: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set of size {0} exceeds the {MAX_GROUND}-element limit")]
    TooManyElements(usize),
    #[error("bases list is empty or inconsistent: {0}")]
    InvalidBases(String),
    #[error("element {0} is not in the ground set")]
    NoSuchElement(usize),
    #[error("parallel extension at a loop is undefined")]
    ParallelAtLoop,
    #[error("series extension at a coloop is undefined")]
    SeriesAtColoop,
    #[error("invalid insertion label {0} for ground size {1}")]
    BadLabel(usize, usize),
    #[error("braid matroid index {0} out of the supported range 2..=6")]
    BraidRange(usize),
    #[error("isomorphism search limited to {MAX_ISO_GROUND} elements, got {0}")]
    IsoSizeLimit(usize),
    #[error("multigraph parse error: {0}")]
    GraphParse(String),
}

pub const MAX_ISO_GROUND: usize = 10;

/// Iterate the set bits of a mask as element indices.
pub fn bits(mask: u16) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// All subsets of {0,..,m-1} of size k, as masks in increasing order
/// (Gosper's hack).
pub fn k_subsets(m: usize, k: usize) -> Vec<u32> {
    if k > m {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut c: u32 = (1 << k) - 1;
    while c < 1u32 << m {
        out.push(c);
        let lo = c & c.wrapping_neg();
        let ripple = c + lo;
        c = ripple | (((c ^ ripple) >> 2) / lo);
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
            r
        } else {
            x
        }
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

/// Multigraph with labelled edges; loops and parallel edges allowed.
/// `edges[label] = (u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        Multigraph { vertices, edges }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Multigraph { vertices: n, edges }
    }

    /// Parse the text format: one edge per line, `u v label`, 0-indexed
    /// vertices; labels must be exactly 0..m-1 in any order. Blank lines and
    /// `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, MatroidError> {
        let mut labelled: Vec<(usize, usize, usize)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
            } else {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(MatroidError::GraphParse(format!(
                        "line {}: expected `u v label`",
                        lineno + 1
                    )));
                }
                let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse()).collect();
                let nums = nums.map_err(|e| {
                    MatroidError::GraphParse(format!("line {}: {e}", lineno + 1))
                })?;
                labelled.push((nums[0], nums[1], nums[2]));
            }
        }
        let m = labelled.len();
        let mut edges = vec![None; m];
        let mut vertices = 0;
        for (u, v, label) in labelled {
            if label >= m || edges[label].is_some() {
                return Err(MatroidError::GraphParse(format!(
                    "labels must be distinct and form 0..{m}"
                )));
            }
            edges[label] = Some((u, v));
            vertices = vertices.max(u + 1).max(v + 1);
        }
        Ok(Multigraph {
            vertices,
            edges: edges.into_iter().map(Option::unwrap).collect(),
        })
    }
}

/// A matroid on ground set {0,..,n-1}, held as its sorted list of bases.
/// Equality and hashing are canonical: two values are equal exactly when
/// they are the same labelled matroid.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    ground_size: usize,
    rank: usize,
    bases: Vec<u16>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, rank={}, bases=[", self.ground_size, self.rank)?;
        for (i, b) in self.bases.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{{}}}", bits(*b).map(|e| e.to_string()).collect::<Vec<_>>().join(""))?;
        }
        write!(f, "])")
    }
}

/// Result of simplification: the simple quotient matroid, the parallel class
/// of each element (`None` for loops), and the mask of removed loops.
#[derive(Debug, Clone)]
pub struct Simplification {
    pub matroid: Matroid,
    pub class_of: Vec<Option<usize>>,
    pub loops: u16,
}

/// All flats of a matroid, grouped by rank; each level is sorted.
#[derive(Debug, Clone)]
pub struct FlatLattice {
    pub by_rank: Vec<Vec<u16>>,
}

impl FlatLattice {
    pub fn total(&self) -> usize {
        self.by_rank.iter().map(Vec::len).sum()
    }
    pub fn counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }
    pub fn iter(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.by_rank
            .iter()
            .enumerate()
            .flat_map(|(r, fs)| fs.iter().map(move |&f| (r, f)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorTarget {
    U24,
    MK4,
}

impl Matroid {
    pub fn from_bases(ground_size: usize, mut bases: Vec<u16>) -> Result<Self, MatroidError> {
        if ground_size > MAX_GROUND {
            return Err(MatroidError::TooManyElements(ground_size));
        }
        if bases.is_empty() {
            return Err(MatroidError::InvalidBases("no bases".into()));
        }
        bases.sort_unstable();
        bases.dedup();
        let ground: u16 = mask_of_ground(ground_size);
        let rank = bases[0].count_ones() as usize;
        for &b in &bases {
            if b & !ground != 0 {
                return Err(MatroidError::InvalidBases(format!(
                    "basis {b:#x} leaves the ground set"
                )));
            }
            if b.count_ones() as usize != rank {
                return Err(MatroidError::InvalidBases(
                    "bases of unequal cardinality".into(),
                ));
            }
        }
        let m = Matroid {
            ground_size,
            rank,
            bases,
        };
        debug_assert!(
            m.ground_size > 12 || m.bases.len() > 512 || m.check_exchange(),
            "basis exchange fails for {m:?}"
        );
        Ok(m)
    }

    /// Basis-exchange sanity check, used in debug builds on small inputs.
    fn check_exchange(&self) -> bool {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                if b1 == b2 {
                    continue;
                }
                for e in bits(b1 & !b2) {
                    let ok = bits(b2 & !b1)
                        .any(|f| self.is_basis(b1 & !(1 << e) | (1 << f)));
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn uniform(rank: usize, n: usize) -> Self {
        assert!(rank <= n && n <= MAX_GROUND);
        let bases = k_subsets(n, rank).into_iter().map(|b| b as u16).collect();
        Matroid {
            ground_size: n,
            rank,
            bases,
        }
    }

    pub fn empty() -> Self {
        Matroid {
            ground_size: 0,
            rank: 0,
            bases: vec![0],
        }
    }

    pub fn single_loop() -> Self {
        Matroid {
            ground_size: 1,
            rank: 0,
            bases: vec![0],
        }
    }

    pub fn single_coloop() -> Self {
        Matroid {
            ground_size: 1,
            rank: 1,
            bases: vec![1],
        }
    }

    /// Cycle matroid of a multigraph: bases are the maximal spanning forests,
    /// indexed by edge labels.
    pub fn from_graph(g: &Multigraph) -> Result<Self, MatroidError> {
        let m = g.edges.len();
        if m > MAX_GROUND {
            return Err(MatroidError::TooManyElements(m));
        }
        let mut uf = UnionFind::new(g.vertices);
        let mut rank = 0;
        for &(u, v) in &g.edges {
            if u != v && uf.union(u, v) {
                rank += 1;
            }
        }
        let mut bases = Vec::new();
        for cand in k_subsets(m, rank) {
            let mut uf = UnionFind::new(g.vertices);
            let mut ok = true;
            for e in bits(cand as u16) {
                let (u, v) = g.edges[e];
                if u == v || !uf.union(u, v) {
                    ok = false;
                    break;
                }
            }
            if ok {
                bases.push(cand as u16);
            }
        }
        Ok(Matroid {
            ground_size: m,
            rank,
            bases,
        })
    }

    /// The braid matroid on n vertices: cycle matroid of the complete graph,
    /// edges in lexicographic order. Rank n-1. Explicit bases are kept only
    /// up to n = 6 (15 edges); larger braid matroids go through the
    /// partition-lattice engine instead.
    pub fn braid(n: usize) -> Result<Self, MatroidError> {
        if !(2..=6).contains(&n) {
            return Err(MatroidError::BraidRange(n));
        }
        Self::from_graph(&Multigraph::complete(n))
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[u16] {
        &self.bases
    }

    pub fn ground_mask(&self) -> u16 {
        mask_of_ground(self.ground_size)
    }

    pub fn is_basis(&self, mask: u16) -> bool {
        self.bases.binary_search(&mask).is_ok()
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, s: u16) -> usize {
        self.bases
            .iter()
            .map(|&b| (b & s).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Closure of a subset: all elements whose addition keeps the rank.
    pub fn closure(&self, s: u16) -> u16 {
        let r = self.rank_of(s);
        let mut out = s;
        for e in bits(self.ground_mask() & !s) {
            if self.rank_of(s | (1 << e)) == r {
                out |= 1 << e;
            }
        }
        out
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank_of(1 << e) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.bases.iter().all(|&b| b & (1 << e) != 0)
    }

    pub fn loops_mask(&self) -> u16 {
        let in_some_basis = self.bases.iter().fold(0u16, |acc, &b| acc | b);
        self.ground_mask() & !in_some_basis
    }

    pub fn is_loopless(&self) -> bool {
        self.loops_mask() == 0
    }

    /// All flats, enumerated by iterated closure from the bottom flat.
    pub fn flats_lattice(&self) -> FlatLattice {
        let mut by_rank: Vec<Vec<u16>> = vec![Vec::new(); self.rank + 1];
        let bottom = self.closure(0);
        let mut seen: HashSet<u16> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(bottom);
        queue.push_back(bottom);
        while let Some(f) = queue.pop_front() {
            by_rank[self.rank_of(f)].push(f);
            for e in bits(self.ground_mask() & !f) {
                let g = self.closure(f | (1 << e));
                if seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
        for level in &mut by_rank {
            level.sort_unstable();
        }
        FlatLattice { by_rank }
    }

    pub fn dual(&self) -> Matroid {
        let ground = self.ground_mask();
        let mut bases: Vec<u16> = self.bases.iter().map(|&b| ground & !b).collect();
        bases.sort_unstable();
        Matroid {
            ground_size: self.ground_size,
            rank: self.ground_size - self.rank,
            bases,
        }
    }

    /// Deletion minor M \ S, relabelled onto {0,..,n-|S|-1} order-preservingly.
    pub fn delete_set(&self, s: u16) -> Matroid {
        let s = s & self.ground_mask();
        let keep = self.ground_mask() & !s;
        let new_rank = self.rank_of(keep);
        let mut bases: Vec<u16> = self
            .bases
            .iter()
            .map(|&b| b & keep)
            .filter(|b| b.count_ones() as usize == new_rank)
            .map(|b| compress_mask(b, keep))
            .collect();
        bases.sort_unstable();
        bases.dedup();
        Matroid {
            ground_size: self.ground_size - s.count_ones() as usize,
            rank: new_rank,
            bases,
        }
    }

    /// Contraction minor M / S, relabelled order-preservingly.
    pub fn contract_set(&self, s: u16) -> Matroid {
        let s = s & self.ground_mask();
        let rs = self.rank_of(s);
        let keep = self.ground_mask() & !s;
        let mut bases: Vec<u16> = self
            .bases
            .iter()
            .filter(|&&b| (b & s).count_ones() as usize == rs)
            .map(|&b| compress_mask(b & keep, keep))
            .collect();
        bases.sort_unstable();
        bases.dedup();
        Matroid {
            ground_size: self.ground_size - s.count_ones() as usize,
            rank: self.rank - rs,
            bases,
        }
    }

    pub fn delete(&self, e: usize) -> Matroid {
        self.delete_set(1 << e)
    }

    pub fn contract(&self, e: usize) -> Matroid {
        self.contract_set(1 << e)
    }

    /// Restriction to a subset (deletion of its complement), relabelled.
    pub fn restriction(&self, s: u16) -> Matroid {
        self.delete_set(self.ground_mask() & !s)
    }

    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        let n = self.ground_size + other.ground_size;
        if n > MAX_GROUND {
            return Err(MatroidError::TooManyElements(n));
        }
        let shift = self.ground_size;
        let mut bases = Vec::with_capacity(self.bases.len() * other.bases.len());
        for &b1 in &self.bases {
            for &b2 in &other.bases {
                bases.push(b1 | (b2 << shift));
            }
        }
        bases.sort_unstable();
        Ok(Matroid {
            ground_size: n,
            rank: self.rank + other.rank,
            bases,
        })
    }

    /// Apply a ground-set bijection: element i becomes perm[i].
    pub fn relabel(&self, perm: &[usize]) -> Matroid {
        debug_assert_eq!(perm.len(), self.ground_size);
        let mut bases: Vec<u16> = self
            .bases
            .iter()
            .map(|&b| bits(b).fold(0u16, |acc, i| acc | (1 << perm[i])))
            .collect();
        bases.sort_unstable();
        Matroid {
            ground_size: self.ground_size,
            rank: self.rank,
            bases,
        }
    }

    /// Connectivity classes: two elements are connected when they lie in a
    /// common circuit. Computed through basis exchanges, which realize
    /// exactly the common-circuit pairs. Loops and coloops are singleton
    /// components.
    pub fn connected_components(&self) -> Vec<u16> {
        let n = self.ground_size;
        if n == 0 {
            return Vec::new();
        }
        let mut uf = UnionFind::new(n);
        let ground = self.ground_mask();
        for &b in &self.bases {
            for e in bits(b) {
                for f in bits(ground & !b) {
                    if self.is_basis(b & !(1 << e) | (1 << f)) {
                        uf.union(e, f);
                    }
                }
            }
        }
        let mut comps: HashMap<usize, u16> = HashMap::new();
        for e in 0..n {
            *comps.entry(uf.find(e)).or_insert(0) |= 1 << e;
        }
        let mut out: Vec<u16> = comps.into_values().collect();
        out.sort_unstable_by_key(|c| c.trailing_zeros());
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Crapo's beta-invariant: (-1)^rk * sum over subsets of (-1)^|S| rk(S).
    pub fn beta_invariant(&self) -> BigInt {
        let mut acc: i64 = 0;
        for s in 0..(1u32 << self.ground_size) {
            let r = self.rank_of(s as u16) as i64;
            if (s.count_ones()) % 2 == 0 {
                acc += r;
            } else {
                acc -= r;
            }
        }
        if self.rank % 2 == 1 {
            acc = -acc;
        }
        BigInt::from(acc)
    }

    /// Series-parallel test: the single loop, or beta = 1 (Brylawski).
    pub fn is_series_parallel(&self) -> bool {
        (self.ground_size == 1 && self.rank == 0) || self.beta_invariant().is_one()
    }

    /// Quasi series-parallel: every connected component is series-parallel.
    pub fn is_quasi_series_parallel(&self) -> bool {
        self.connected_components()
            .into_iter()
            .all(|c| self.restriction(c).is_series_parallel())
    }

    /// Extend by a new element parallel to `e` (a 2-circuit with `e`), the
    /// new element inserted with label `label`; old labels >= `label` shift
    /// up by one. Rank is unchanged and deleting the new element recovers
    /// the original matroid.
    pub fn parallel_extension(&self, e: usize, label: usize) -> Result<Matroid, MatroidError> {
        if e >= self.ground_size {
            return Err(MatroidError::NoSuchElement(e));
        }
        if label > self.ground_size {
            return Err(MatroidError::BadLabel(label, self.ground_size));
        }
        if self.ground_size + 1 > MAX_GROUND {
            return Err(MatroidError::TooManyElements(self.ground_size + 1));
        }
        if self.is_loop(e) {
            return Err(MatroidError::ParallelAtLoop);
        }
        let new_bit = 1u16 << self.ground_size;
        let mut bases = self.bases.clone();
        for &b in &self.bases {
            if b & (1 << e) != 0 {
                bases.push(b & !(1 << e) | new_bit);
            }
        }
        bases.sort_unstable();
        let appended = Matroid {
            ground_size: self.ground_size + 1,
            rank: self.rank,
            bases,
        };
        Ok(appended.relabel(&insertion_perm(self.ground_size, label)))
    }

    /// Extend by a new element in series with `e` (a 2-cocircuit with `e`):
    /// the dual of a parallel extension of the dual. Rank grows by one and
    /// contracting the new element recovers the original matroid.
    pub fn series_extension(&self, e: usize, label: usize) -> Result<Matroid, MatroidError> {
        if e >= self.ground_size {
            return Err(MatroidError::NoSuchElement(e));
        }
        if self.is_coloop(e) {
            return Err(MatroidError::SeriesAtColoop);
        }
        Ok(self.dual().parallel_extension(e, label)?.dual())
    }

    /// Quotient by parallel classes after dropping loops. Classes are
    /// numbered by their least element in increasing order, so the result is
    /// canonical.
    pub fn simplify(&self) -> Simplification {
        let loops = self.loops_mask();
        let mut class_reps: Vec<u16> = Vec::new(); // closure mask per class
        let mut class_of: Vec<Option<usize>> = vec![None; self.ground_size];
        for e in 0..self.ground_size {
            if loops & (1 << e) != 0 {
                continue;
            }
            let cl = self.closure(1 << e) & !loops;
            match class_reps.iter().position(|&c| c == cl) {
                Some(i) => class_of[e] = Some(i),
                None => {
                    class_of[e] = Some(class_reps.len());
                    class_reps.push(cl);
                }
            }
        }
        let reps_mask = class_reps
            .iter()
            .fold(0u16, |acc, &c| acc | (1 << c.trailing_zeros()));
        let matroid = self.restriction(reps_mask);
        Simplification {
            matroid,
            class_of,
            loops,
        }
    }

    /// Loopless with no 2-element circuits.
    pub fn is_simple(&self) -> bool {
        if !self.is_loopless() {
            return false;
        }
        for e in 0..self.ground_size {
            for f in e + 1..self.ground_size {
                if self.rank_of((1 << e) | (1 << f)) < 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Minor search for the two excluded minors of the quasi series-parallel
    /// class. Quick rank/corank pruning, then recursive single-element
    /// deletions and contractions with a visited set.
    pub fn has_minor(&self, target: MinorTarget) -> bool {
        let mut seen = HashSet::new();
        self.has_minor_inner(target, &mut seen)
    }

    fn has_minor_inner(&self, target: MinorTarget, seen: &mut HashSet<Matroid>) -> bool {
        let (t_size, t_rank) = match target {
            MinorTarget::U24 => (4, 2),
            MinorTarget::MK4 => (6, 3),
        };
        if self.ground_size < t_size
            || self.rank < t_rank
            || self.ground_size - self.rank < t_size - t_rank
        {
            return false;
        }
        if self.ground_size == t_size {
            return self.is_target(target);
        }
        for e in 0..self.ground_size {
            // keep rank when deleting, drop it when contracting, so both
            // children stay on course for the target profile
            let child_del = self.delete(e);
            if child_del.rank == self.rank && seen.insert(child_del.clone())
                && child_del.has_minor_inner(target, seen) {
                    return true;
                }
            let child_con = self.contract(e);
            if child_con.rank < self.rank && seen.insert(child_con.clone())
                && child_con.has_minor_inner(target, seen) {
                    return true;
                }
        }
        false
    }

    fn is_target(&self, target: MinorTarget) -> bool {
        match target {
            MinorTarget::U24 => {
                self.ground_size == 4 && self.rank == 2 && self.bases.len() == 6
            }
            MinorTarget::MK4 => {
                self.ground_size == 6
                    && self.rank == 3
                    && self.bases.len() == 16
                    && are_isomorphic(self, mk4()).unwrap_or(false)
            }
        }
    }

    /// Minimum relabelling over all ground-set permutations; two matroids are
    /// isomorphic exactly when their canonical relabellings coincide. Meant
    /// for orbit partitioning on small ground sets.
    pub fn canonical_relabel(&self) -> Matroid {
        let mut best: Option<Matroid> = None;
        permutations(self.ground_size, &mut |perm| {
            let cand = self.relabel(perm);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        });
        best.unwrap_or_else(|| self.clone())
    }
}

fn mask_of_ground(n: usize) -> u16 {
    if n == 0 {
        0
    } else {
        u16::MAX >> (16 - n)
    }
}

/// Repack the bits of `mask` selected by `keep` into a contiguous low mask.
fn compress_mask(mask: u16, keep: u16) -> u16 {
    let mut out = 0u16;
    let mut j = 0;
    for i in bits(keep) {
        if mask & (1 << i) != 0 {
            out |= 1 << j;
        }
        j += 1;
    }
    out
}

/// The permutation that inserts a new element (currently at index n) at
/// position `label`, shifting old labels >= label up by one.
fn insertion_perm(n: usize, label: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..=n)
        .map(|i| if i < label { i } else { i + 1 })
        .collect();
    perm[n] = label;
    perm
}

/// Visit all permutations of {0,..,n-1} (Heap's algorithm).
pub fn permutations(n: usize, visit: &mut impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn mk4() -> &'static Matroid {
    static MK4: OnceLock<Matroid> = OnceLock::new();
    MK4.get_or_init(|| Matroid::from_graph(&Multigraph::complete(4)).unwrap())
}

/// Backtracking isomorphism test with degree and pair-rank pruning.
pub fn are_isomorphic(a: &Matroid, b: &Matroid) -> Result<bool, MatroidError> {
    if a.ground_size > MAX_ISO_GROUND || b.ground_size > MAX_ISO_GROUND {
        return Err(MatroidError::IsoSizeLimit(a.ground_size.max(b.ground_size)));
    }
    if a.ground_size != b.ground_size || a.rank != b.rank || a.bases.len() != b.bases.len() {
        return Ok(false);
    }
    let n = a.ground_size;
    if n == 0 {
        return Ok(true);
    }
    let degree = |m: &Matroid, e: usize| m.bases.iter().filter(|&&s| s & (1 << e) != 0).count();
    let deg_a: Vec<usize> = (0..n).map(|e| degree(a, e)).collect();
    let deg_b: Vec<usize> = (0..n).map(|e| degree(b, e)).collect();
    {
        let mut sa = deg_a.clone();
        let mut sb = deg_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(false);
        }
    }
    let pair_rank = |m: &Matroid| {
        let mut t = vec![vec![0u8; n]; n];
        for i in 0..n {
            for j in 0..n {
                t[i][j] = m.rank_of((1 << i) | (1 << j)) as u8;
            }
        }
        t
    };
    let pr_a = pair_rank(a);
    let pr_b = pair_rank(b);

    fn assign(
        i: usize,
        n: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        deg_a: &[usize],
        deg_b: &[usize],
        pr_a: &[Vec<u8>],
        pr_b: &[Vec<u8>],
        a: &Matroid,
        b: &Matroid,
    ) -> bool {
        if i == n {
            return a.relabel(perm) == *b;
        }
        for cand in 0..n {
            if used[cand] || deg_a[i] != deg_b[cand] || pr_a[i][i] != pr_b[cand][cand] {
                continue;
            }
            if (0..i).any(|j| pr_a[i][j] != pr_b[cand][perm[j]]) {
                continue;
            }
            perm[i] = cand;
            used[cand] = true;
            if assign(i + 1, n, perm, used, deg_a, deg_b, pr_a, pr_b, a, b) {
                return true;
            }
            used[cand] = false;
        }
        false
    }

    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    Ok(assign(
        0, n, &mut perm, &mut used, &deg_a, &deg_b, &pr_a, &pr_b, a, b,
    ))
}

/// Partition a list of matroids on a common ground set into isomorphism
/// orbits, returning the orbit sizes in decreasing order.
pub fn orbit_sizes(matroids: &[Matroid]) -> Vec<usize> {
    let mut counts: HashMap<Matroid, usize> = HashMap::new();
    for m in matroids {
        *counts.entry(m.canonical_relabel()).or_insert(0) += 1;
    }
    let mut sizes: Vec<usize> = counts.into_values().collect();
    sizes.sort_unstable_by(|x, y| y.cmp(x));
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn from_graph_examples() {
        let t = Matroid::from_graph(&triangle()).unwrap();
        assert_eq!(t, Matroid::uniform(2, 3));

        let single_loop = Matroid::from_graph(&Multigraph::new(1, vec![(0, 0)])).unwrap();
        assert_eq!(single_loop, Matroid::single_loop());
        assert_eq!(single_loop.rank(), 0);

        // Cayley: K4 has 4^2 = 16 spanning trees
        let k4 = Matroid::from_graph(&Multigraph::complete(4)).unwrap();
        assert_eq!(k4.rank(), 3);
        assert_eq!(k4.bases().len(), 16);

        let too_big = Multigraph::new(2, vec![(0, 1); 17]);
        assert!(matches!(
            Matroid::from_graph(&too_big),
            Err(MatroidError::TooManyElements(17))
        ));
    }

    #[test]
    fn braid_examples() {
        assert_eq!(Matroid::braid(3).unwrap(), Matroid::uniform(2, 3));
        assert_eq!(Matroid::braid(4).unwrap().rank(), 3);
        assert_eq!(Matroid::braid(2).unwrap(), Matroid::single_coloop());
        assert!(Matroid::braid(7).is_err());
        assert!(Matroid::braid(1).is_err());
    }

    #[test]
    fn rank_and_closure() {
        let u23 = Matroid::uniform(2, 3);
        assert_eq!(u23.rank_of(0b011), 2);
        assert_eq!(u23.closure(u23.ground_mask()), u23.ground_mask());
        // single edges of K4 are flats
        let k4 = Matroid::braid(4).unwrap();
        for e in 0..6 {
            assert_eq!(k4.closure(1 << e), 1 << e);
        }
        // brute-force flat check: closure(s) == s iff no element keeps rank
        for s in 0..(1u16 << 6) {
            let grows = bits(k4.ground_mask() & !s)
                .any(|e| k4.rank_of(s | (1 << e)) == k4.rank_of(s));
            assert_eq!(k4.closure(s) == s, !grows);
        }
    }

    #[test]
    fn flats_of_braid4_match_stirling() {
        let k4 = Matroid::braid(4).unwrap();
        let lattice = k4.flats_lattice();
        assert_eq!(lattice.counts(), vec![1, 6, 7, 1]);
        assert_eq!(
            Matroid::single_coloop().flats_lattice().counts(),
            vec![1, 1]
        );
        assert_eq!(Matroid::single_loop().flats_lattice().counts(), vec![1]);
    }

    #[test]
    fn dual_examples() {
        let u12 = Matroid::uniform(1, 2);
        assert_eq!(u12.dual(), u12);
        assert_eq!(Matroid::single_loop().dual(), Matroid::single_coloop());
        let k4 = Matroid::braid(4).unwrap();
        assert_eq!(k4.dual().dual(), k4);
    }

    #[test]
    fn direct_sum_loop_coloop() {
        let m = Matroid::single_loop()
            .direct_sum(&Matroid::single_coloop())
            .unwrap();
        assert_eq!(m.ground_size(), 2);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.connected_components().len(), 2);
    }

    #[test]
    fn minors_are_consistent() {
        let k4 = Matroid::braid(4).unwrap();
        // deleting one edge of K4 leaves rank 3 on 5 elements
        let d = k4.delete(0);
        assert_eq!((d.ground_size(), d.rank()), (5, 3));
        // contracting one edge gives rank 2 on 5 elements with parallel pairs
        let c = k4.contract(0);
        assert_eq!((c.ground_size(), c.rank()), (5, 2));
        assert!(!c.is_simple());
    }

    /// Circuit-based connectivity oracle: union elements over all minimal
    /// dependent sets, found by brute-force subset enumeration.
    fn components_by_circuits(m: &Matroid) -> usize {
        let n = m.ground_size();
        let mut uf = UnionFind::new(n);
        let full = m.ground_mask();
        for s in 1u32..(1u32 << n) {
            let s = s as u16 & full;
            if s == 0 {
                continue;
            }
            let dependent = m.rank_of(s) < s.count_ones() as usize;
            if !dependent {
                continue;
            }
            let minimal = bits(s).all(|e| {
                let t = s & !(1 << e);
                m.rank_of(t) == t.count_ones() as usize
            });
            if minimal {
                let first = s.trailing_zeros() as usize;
                for e in bits(s) {
                    uf.union(first, e);
                }
            }
        }
        let mut roots = HashSet::new();
        for e in 0..n {
            roots.insert(uf.find(e));
        }
        roots.len()
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(Matroid::uniform(2, 2).connected_components().len(), 2);
        assert_eq!(Matroid::uniform(1, 2).connected_components().len(), 1);
        // leftmost graph of the rank-3 six-element family: a tripled edge
        // plus a path closing the quadrilateral
        let g = Multigraph::new(4, vec![(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (3, 0)]);
        let m = Matroid::from_graph(&g).unwrap();
        assert_eq!(m.connected_components().len(), 1);
        assert_eq!(components_by_circuits(&m), 1);
    }

    #[test]
    fn connectivity_matches_circuit_oracle() {
        let samples = vec![
            Matroid::uniform(2, 2),
            Matroid::uniform(1, 3),
            Matroid::braid(4).unwrap(),
            Matroid::single_loop()
                .direct_sum(&Matroid::uniform(2, 3))
                .unwrap(),
            Matroid::uniform(2, 3)
                .direct_sum(&Matroid::uniform(1, 2))
                .unwrap(),
            Matroid::uniform(3, 3),
        ];
        for m in samples {
            assert_eq!(
                m.connected_components().len(),
                components_by_circuits(&m),
                "{m:?}"
            );
        }
    }

    /// Tutte-recursion oracle for the beta-invariant.
    fn beta_by_recursion(m: &Matroid) -> i64 {
        let n = m.ground_size();
        if n == 0 {
            return 0;
        }
        if n == 1 {
            return if m.rank() == 1 { 1 } else { 0 };
        }
        if !m.is_loopless() {
            return 0;
        }
        if let Some(e) = (0..n).find(|&e| m.is_coloop(e)) {
            // a coloop splits off as a direct summand
            let _ = e;
            return 0;
        }
        beta_by_recursion(&m.delete(0)) + beta_by_recursion(&m.contract(0))
    }

    #[test]
    fn beta_examples_and_oracle() {
        assert_eq!(Matroid::single_coloop().beta_invariant(), BigInt::one());
        assert_eq!(Matroid::uniform(2, 2).beta_invariant(), BigInt::zero());
        assert_eq!(Matroid::uniform(1, 2).beta_invariant(), BigInt::one());
        let samples = vec![
            Matroid::uniform(2, 4),
            Matroid::braid(4).unwrap(),
            Matroid::uniform(2, 3),
            Matroid::uniform(3, 4),
            Matroid::single_loop(),
            Matroid::uniform(1, 2)
                .direct_sum(&Matroid::uniform(1, 2))
                .unwrap(),
        ];
        for m in samples {
            assert_eq!(m.beta_invariant(), BigInt::from(beta_by_recursion(&m)), "{m:?}");
        }
    }

    #[test]
    fn beta_dual_invariance() {
        for m in [
            Matroid::uniform(2, 4),
            Matroid::braid(4).unwrap(),
            Matroid::uniform(1, 3),
            Matroid::uniform(2, 3),
        ] {
            assert_eq!(m.beta_invariant(), m.dual().beta_invariant());
        }
    }

    #[test]
    fn minor_examples() {
        assert!(Matroid::uniform(2, 4).has_minor(MinorTarget::U24));
        assert!(Matroid::braid(4).unwrap().has_minor(MinorTarget::MK4));
        assert!(!Matroid::braid(4).unwrap().has_minor(MinorTarget::U24));
        assert!(!Matroid::uniform(2, 3).has_minor(MinorTarget::U24));
        let k5 = Matroid::braid(5).unwrap();
        assert!(k5.has_minor(MinorTarget::MK4));
        assert!(!k5.has_minor(MinorTarget::U24)); // graphic, hence binary
    }

    #[test]
    fn series_parallel_predicate() {
        assert!(Matroid::single_loop().is_series_parallel());
        assert!(Matroid::single_coloop().is_series_parallel());
        assert!(!Matroid::uniform(2, 2).is_series_parallel());
        assert!(!Matroid::uniform(2, 4).is_series_parallel());
        assert!(!Matroid::braid(4).unwrap().is_series_parallel());
        // the four rank-3 isomorphism classes on six elements
        let figures = [
            Multigraph::new(4, vec![(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (3, 0)]),
            Multigraph::new(4, vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
            Multigraph::new(4, vec![(0, 2), (0, 2), (0, 1), (1, 2), (2, 3), (3, 0)]),
            Multigraph::new(4, vec![(0, 1), (0, 1), (2, 1), (2, 1), (2, 3), (3, 0)]),
        ];
        for g in &figures {
            let m = Matroid::from_graph(g).unwrap();
            assert_eq!(m.rank(), 3);
            assert!(m.is_series_parallel());
        }
        // and they are pairwise non-isomorphic
        let ms: Vec<Matroid> = figures
            .iter()
            .map(|g| Matroid::from_graph(g).unwrap())
            .collect();
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                assert!(!are_isomorphic(&ms[i], &ms[j]).unwrap());
            }
        }
    }

    #[test]
    fn quasi_series_parallel_predicate() {
        assert!(Matroid::uniform(2, 2).is_quasi_series_parallel());
        assert!(!Matroid::braid(4).unwrap().is_quasi_series_parallel());
        // the six rank-2 classes on four elements
        let figures = [
            Multigraph::new(3, vec![(0, 0), (0, 1), (1, 2), (2, 2)]),
            Multigraph::new(3, vec![(0, 0), (0, 1), (1, 2), (1, 2)]),
            Multigraph::new(3, vec![(1, 2), (1, 2), (0, 1), (2, 0)]),
            Multigraph::new(3, vec![(0, 1), (1, 2), (1, 2), (1, 2)]),
            Multigraph::new(3, vec![(1, 0), (1, 0), (1, 2), (1, 2)]),
            Multigraph::new(3, vec![(0, 0), (0, 1), (1, 2), (2, 0)]),
        ];
        for g in &figures {
            let m = Matroid::from_graph(g).unwrap();
            assert_eq!(m.rank(), 2);
            assert!(m.is_quasi_series_parallel(), "{m:?}");
        }
    }

    #[test]
    fn extension_examples() {
        let u12 = Matroid::single_coloop().parallel_extension(0, 1).unwrap();
        assert_eq!(u12, Matroid::uniform(1, 2));
        let u23 = u12.series_extension(0, 2).unwrap();
        assert_eq!(u23, Matroid::uniform(2, 3));
        let u23b = u12.series_extension(1, 0).unwrap();
        assert_eq!(u23b, Matroid::uniform(2, 3));

        assert!(matches!(
            Matroid::single_coloop().series_extension(0, 0),
            Err(MatroidError::SeriesAtColoop)
        ));
        assert!(matches!(
            Matroid::single_loop().parallel_extension(0, 0),
            Err(MatroidError::ParallelAtLoop)
        ));
        // a loop admits a series extension, producing U_{1,2}
        assert_eq!(
            Matroid::single_loop().series_extension(0, 1).unwrap(),
            Matroid::uniform(1, 2)
        );
    }

    #[test]
    fn extension_rank_laws_and_recovery() {
        let base = Matroid::braid(4).unwrap();
        for e in 0..base.ground_size() {
            for label in 0..=base.ground_size() {
                if !base.is_loop(e) {
                    let p = base.parallel_extension(e, label).unwrap();
                    assert_eq!(p.rank(), base.rank());
                    assert_eq!(p.delete(label), base);
                }
                if !base.is_coloop(e) {
                    let s = base.series_extension(e, label).unwrap();
                    assert_eq!(s.rank(), base.rank() + 1);
                    assert_eq!(s.contract(label), base);
                }
            }
        }
    }

    #[test]
    fn simplify_examples() {
        let s = Matroid::uniform(1, 3).simplify();
        assert_eq!(s.matroid, Matroid::single_coloop());
        assert_eq!(s.class_of, vec![Some(0), Some(0), Some(0)]);

        let u23 = Matroid::uniform(2, 3);
        assert_eq!(u23.simplify().matroid, u23);

        // contracting an edge flat of K4 and simplifying gives the triangle
        let k4 = Matroid::braid(4).unwrap();
        let c = k4.contract_set(1 << 0);
        assert_eq!(c.simplify().matroid, Matroid::braid(3).unwrap());

        // loops are dropped and reported
        let with_loop = Matroid::single_loop()
            .direct_sum(&Matroid::uniform(1, 2))
            .unwrap();
        let s = with_loop.simplify();
        assert_eq!(s.loops, 0b001);
        assert_eq!(s.matroid, Matroid::single_coloop());
    }

    #[test]
    fn simple_examples() {
        assert!(!Matroid::uniform(1, 2).is_simple());
        assert!(Matroid::uniform(2, 3).is_simple());
        assert!(Matroid::empty().is_simple());
        // the two simple rank-4 classes on seven elements
        let pentagon_chords = Multigraph::new(
            5,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (3, 0), (3, 1)],
        );
        let square_center = Multigraph::new(
            5,
            vec![(0, 1), (1, 2), (0, 4), (4, 2), (0, 2), (2, 3), (3, 0)],
        );
        for g in [&pentagon_chords, &square_center] {
            let m = Matroid::from_graph(g).unwrap();
            assert_eq!(m.rank(), 4);
            assert!(m.is_simple());
            assert!(m.is_series_parallel());
        }
    }

    #[test]
    fn isomorphism_examples() {
        let k4 = Matroid::braid(4).unwrap();
        assert!(are_isomorphic(&k4, &k4).unwrap());
        assert!(!are_isomorphic(&Matroid::uniform(2, 3), &Matroid::uniform(1, 3)).unwrap());
        let perm = [3, 5, 1, 0, 2, 4];
        assert!(are_isomorphic(&k4, &k4.relabel(&perm)).unwrap());
        assert!(matches!(
            are_isomorphic(&Matroid::uniform(3, 11), &Matroid::uniform(3, 11)),
            Err(MatroidError::IsoSizeLimit(11))
        ));
    }

    #[test]
    fn parse_multigraph_format() {
        let g = Multigraph::parse("0 1 0\n1 2 1\n# comment\n2 0 2\n").unwrap();
        assert_eq!(g, triangle());
        assert!(Multigraph::parse("0 1 0\n0 1 0\n").is_err());
        assert!(Multigraph::parse("0 1\n").is_err());
    }

    #[test]
    fn dual_involution_and_qsp_duality() {
        let samples = vec![
            Matroid::uniform(2, 4),
            Matroid::braid(4).unwrap(),
            Matroid::uniform(1, 3),
            Matroid::single_loop()
                .direct_sum(&Matroid::uniform(2, 3))
                .unwrap(),
        ];
        for m in samples {
            assert_eq!(m.dual().dual(), m);
            assert_eq!(
                m.is_quasi_series_parallel(),
                m.dual().is_quasi_series_parallel()
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_multigraph() -> impl Strategy<Value = Multigraph> {
            (1usize..=5).prop_flat_map(|v| {
                proptest::collection::vec((0..v, 0..v), 0..=7)
                    .prop_map(move |edges| Multigraph::new(v, edges))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn dual_is_an_involution(g in arb_multigraph()) {
                let m = Matroid::from_graph(&g).unwrap();
                prop_assert_eq!(m.dual().dual(), m);
            }

            #[test]
            fn extensions_round_trip(g in arb_multigraph(), e_pick in 0usize..7, label_pick in 0usize..8) {
                let m = Matroid::from_graph(&g).unwrap();
                prop_assume!(m.ground_size() > 0);
                let e = e_pick % m.ground_size();
                let label = label_pick % (m.ground_size() + 1);
                if !m.is_loop(e) {
                    let ext = m.parallel_extension(e, label).unwrap();
                    prop_assert_eq!(ext.rank(), m.rank());
                    prop_assert_eq!(ext.delete(label), m.clone());
                }
                if !m.is_coloop(e) {
                    let ext = m.series_extension(e, label).unwrap();
                    prop_assert_eq!(ext.rank(), m.rank() + 1);
                    prop_assert_eq!(ext.contract(label), m);
                }
            }
        }
    }
}
