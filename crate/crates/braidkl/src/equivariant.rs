//! Class-function arithmetic for permutation groups and the equivariant
//! Kazhdan-Lusztig machinery: permutation characters by fixed-point
//! counting, induced characters, and the orbit recursion over flats that
//! computes the equivariant P- and Z-polynomials of a matroid with a group
//! action.
//!
//! Virtual representations are modelled as rational-valued class functions;
//! fixed-point counting fully determines every identity checked here, so no
//! decomposition into irreducibles is needed.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::exactmath::{IntPolynomial, Rat};
use crate::klcalc::braid_kl;
use crate::matroid::{bits, Matroid};
use crate::report::VerifyReport;
use crate::spenum::{enum_qsp, enum_simple_qsp};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("element set is not closed under composition")]
    NotClosed,
    #[error("identity element missing")]
    NoIdentity,
    #[error("permutation degrees differ")]
    MixedDegrees,
    #[error("not a subgroup: element not contained in the ambient group")]
    NotASubgroup,
    #[error("action is inconsistent: a group element moves a point outside the set")]
    ActionInconsistent,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EqError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("matroid has a loop; equivariant axioms require loopless input")]
    LoopyInput,
    #[error("group degree {0} does not match ground size {1}")]
    DegreeMismatch(usize, usize),
    #[error("group does not act on the matroid: some element moves the bases")]
    NotAnAction,
    #[error("equivariant validation failure: {0}")]
    Validation(String),
}

/// A permutation of {0,..,m-1} in image notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm((0..m).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// self after other: (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn apply_to_mask(&self, mask: u16) -> u16 {
        bits(mask).fold(0u16, |acc, i| acc | (1 << self.0[i]))
    }

    /// Cycle type as a weakly decreasing partition of the degree.
    pub fn cycle_type(&self) -> Vec<usize> {
        let m = self.0.len();
        let mut seen = vec![false; m];
        let mut parts = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                at = self.0[at];
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// Partition string like "3+1+1".
    pub fn cycle_type_string(&self) -> String {
        self.cycle_type()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone)]
pub struct ClassInfo {
    /// Index of the class representative in the element list.
    pub rep: usize,
    pub size: usize,
}

/// A permutation group held by explicit element enumeration, with its
/// conjugacy classes precomputed. Elements are kept sorted, so the element
/// list doubles as a canonical key for memoization.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    class_of: Vec<usize>,
    classes: Vec<ClassInfo>,
}

impl PermGroup {
    pub fn from_elements(elements: Vec<Perm>) -> Result<Self, GroupError> {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(GroupError::NoIdentity);
        }
        let degree = elements[0].degree();
        if elements.iter().any(|p| p.degree() != degree) {
            return Err(GroupError::MixedDegrees);
        }
        let index: HashMap<Perm, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        if !index.contains_key(&Perm::identity(degree)) {
            return Err(GroupError::NoIdentity);
        }
        for a in &elements {
            if !index.contains_key(&a.inverse()) {
                return Err(GroupError::NotClosed);
            }
            for b in &elements {
                if !index.contains_key(&a.compose(b)) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        Ok(Self::assemble(degree, elements, index))
    }

    /// Construction path for sets already known to be subgroups (stabilizers,
    /// homomorphic images); skips the quadratic closure validation.
    fn from_subgroup_elements(elements: Vec<Perm>) -> Self {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        let degree = elements[0].degree();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self::assemble(degree, elements, index)
    }

    fn assemble(degree: usize, elements: Vec<Perm>, index: HashMap<Perm, usize>) -> Self {
        // conjugacy classes as conjugation orbits
        let k = elements.len();
        let mut class_of = vec![usize::MAX; k];
        let mut classes = Vec::new();
        for i in 0..k {
            if class_of[i] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut size = 0;
            for x in &elements {
                let conj = x.inverse().compose(&elements[i]).compose(x);
                let j = index[&conj];
                if class_of[j] == usize::MAX {
                    class_of[j] = cid;
                    size += 1;
                }
            }
            classes.push(ClassInfo { rep: i, size });
        }
        PermGroup {
            degree,
            elements,
            index,
            class_of,
            classes,
        }
    }

    /// The full symmetric group on {0,..,m-1}.
    pub fn symmetric(m: usize) -> Self {
        let mut elements = Vec::new();
        crate::matroid::permutations(m, &mut |p| elements.push(Perm(p.to_vec())));
        if m == 0 {
            elements.push(Perm::identity(0));
        }
        Self::from_subgroup_elements(elements)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_subgroup_elements(vec![Perm::identity(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_rep(&self, c: usize) -> &Perm {
        &self.elements[self.classes[c].rep]
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn class_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| self.class_of[i])
    }

    pub fn class_of_index(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn identity_class(&self) -> usize {
        self.class_of(&Perm::identity(self.degree)).expect("identity")
    }

    /// Subgroup of elements fixing a ground-subset setwise.
    pub fn stabilizer_of_mask(&self, mask: u16) -> PermGroup {
        Self::from_subgroup_elements(
            self.elements
                .iter()
                .filter(|p| p.apply_to_mask(mask) == mask)
                .cloned()
                .collect(),
        )
    }

    pub fn is_subgroup_of(&self, g: &PermGroup) -> bool {
        self.degree == g.degree && self.elements.iter().all(|p| g.contains(p))
    }

    /// Canonical key for memo tables.
    pub fn key(&self) -> Vec<Perm> {
        self.elements.clone()
    }
}

/// A class function: one rational value per conjugacy class, aligned with a
/// specific group's class list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<Rat>,
}

impl ClassFunction {
    pub fn zero(group: &PermGroup) -> Self {
        ClassFunction {
            values: vec![Rat::zero(); group.class_count()],
        }
    }

    pub fn trivial(group: &PermGroup) -> Self {
        ClassFunction {
            values: vec![Rat::one(); group.class_count()],
        }
    }

    pub fn add(&self, rhs: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rat::is_zero)
    }

    /// Genuine permutation characters take nonnegative integer values.
    pub fn is_nonneg_integral(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.is_integer() && !v.is_negative())
    }

    pub fn value_at(&self, group: &PermGroup, p: &Perm) -> Option<Rat> {
        group.class_of(p).map(|c| self.values[c].clone())
    }

    /// JSON table keyed by the cycle type of each class representative.
    pub fn to_json(&self, group: &PermGroup) -> Value {
        let mut map = Map::new();
        for (c, v) in self.values.iter().enumerate() {
            let key = group.class_rep(c).cycle_type_string();
            let rendered = if v.is_integer() {
                v.to_integer().to_string()
            } else {
                v.to_string()
            };
            map.insert(key, json!(rendered));
        }
        Value::Object(map)
    }
}

/// Permutation character of a group action on a finite point set: the value
/// on each class is the number of fixed points of its representative. The
/// action is checked to stay inside the point set.
pub fn perm_character<P, F>(
    group: &PermGroup,
    points: &[P],
    act: F,
) -> Result<ClassFunction, GroupError>
where
    P: Eq + Hash + Clone,
    F: Fn(&Perm, &P) -> P,
{
    let set: HashSet<&P> = points.iter().collect();
    if cfg!(debug_assertions) {
        for g in group.elements() {
            for p in points {
                if !set.contains(&act(g, p)) {
                    return Err(GroupError::ActionInconsistent);
                }
            }
        }
    }
    let mut values = Vec::with_capacity(group.class_count());
    for c in 0..group.class_count() {
        let rep = group.class_rep(c);
        let mut fixed = 0usize;
        for p in points {
            let image = act(rep, p);
            if !set.contains(&image) {
                return Err(GroupError::ActionInconsistent);
            }
            if image == *p {
                fixed += 1;
            }
        }
        values.push(Rat::from_integer(BigInt::from(fixed)));
    }
    Ok(ClassFunction { values })
}

/// Induced class function from a subgroup:
/// (ind chi)(s) = (1/|H|) sum over x in G with x^-1 s x in H of chi(x^-1 s x).
pub fn induce(
    group: &PermGroup,
    subgroup: &PermGroup,
    chi: &ClassFunction,
) -> Result<ClassFunction, GroupError> {
    if !subgroup.is_subgroup_of(group) {
        return Err(GroupError::NotASubgroup);
    }
    let h_order = Rat::from_integer(BigInt::from(subgroup.order()));
    let mut values = Vec::with_capacity(group.class_count());
    for c in 0..group.class_count() {
        let s = group.class_rep(c);
        let mut acc = Rat::zero();
        for x in group.elements() {
            let conj = x.inverse().compose(s).compose(x);
            if let Some(hc) = subgroup.class_of(&conj) {
                acc += &chi.values[hc];
            }
        }
        values.push(acc / &h_order);
    }
    Ok(ClassFunction { values })
}

/// Polynomial with class-function coefficients over a fixed group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantPoly {
    pub rank: usize,
    pub coeffs: Vec<ClassFunction>,
}

impl EquivariantPoly {
    pub fn coeff(&self, i: usize, group: &PermGroup) -> ClassFunction {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| ClassFunction::zero(group))
    }

    /// Evaluate every coefficient at the identity, recovering the ordinary
    /// polynomial of dimensions.
    pub fn eval_identity(&self, group: &PermGroup) -> Result<IntPolynomial, EqError> {
        let id = group.identity_class();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for cf in &self.coeffs {
            let v = &cf.values[id];
            if !v.is_integer() {
                return Err(EqError::Validation(format!(
                    "identity evaluation {v} is not an integer"
                )));
            }
            coeffs.push(v.to_integer());
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// Palindromicity at the class-function level: coefficient i equals
    /// coefficient d-i as class functions.
    pub fn is_palindromic_charwise(&self, group: &PermGroup) -> bool {
        let d = self.rank;
        (0..=d).all(|i| self.coeff(i, group) == self.coeff(d - i, group))
    }

    /// Every coefficient takes nonnegative integer values, as a genuine
    /// permutation character does.
    pub fn is_permutation_character_poly(&self) -> bool {
        self.coeffs.iter().all(ClassFunction::is_nonneg_integral)
    }

    pub fn to_json(&self, group: &PermGroup) -> Value {
        Value::Array(self.coeffs.iter().map(|c| c.to_json(group)).collect())
    }
}

type MemoKey = (Matroid, Vec<Perm>);

/// Equivariant engine. The memo table maps (canonical simplified matroid,
/// canonical acting-group element list) to the computed pair; it tolerates
/// concurrent lookups and idempotent inserts.
#[derive(Default)]
pub struct EqKlEngine {
    memo: Mutex<HashMap<MemoKey, (EquivariantPoly, EquivariantPoly)>>,
}

impl EqKlEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Equivariant Kazhdan-Lusztig and Z-polynomials of a loopless matroid
    /// under a group acting on its ground set. Recursion over group orbits
    /// of flats: contract, simplify, recurse with the image group, pull
    /// back, induce from the stabilizer, and complete palindromically at
    /// the class-function level.
    pub fn equivariant_kl(
        &self,
        m: &Matroid,
        group: &PermGroup,
    ) -> Result<(EquivariantPoly, EquivariantPoly), EqError> {
        if group.degree() != m.ground_size() {
            return Err(EqError::DegreeMismatch(group.degree(), m.ground_size()));
        }
        if !m.is_loopless() {
            return Err(EqError::LoopyInput);
        }
        for g in group.elements() {
            if m.relabel(&g.0) != *m {
                return Err(EqError::NotAnAction);
            }
        }
        if m.is_simple() {
            return self.eq_kl_simple(m, group);
        }
        // pass to the simplification with the induced action on parallel
        // classes, then pull the coefficients back
        let simp = m.simplify();
        let (quotient, hom) = action_on_classes(group, &simp.class_of);
        let (p_sub, z_sub) = self.eq_kl_simple(&simp.matroid, &quotient)?;
        Ok((
            pull_back(group, &quotient, &hom, &p_sub),
            pull_back(group, &quotient, &hom, &z_sub),
        ))
    }

    fn eq_kl_simple(
        &self,
        m: &Matroid,
        group: &PermGroup,
    ) -> Result<(EquivariantPoly, EquivariantPoly), EqError> {
        let key = (m.clone(), group.key());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let d = m.rank();
        let result = if d == 0 {
            let triv = EquivariantPoly {
                rank: 0,
                coeffs: vec![ClassFunction::trivial(group)],
            };
            (triv.clone(), triv)
        } else {
            let lattice = m.flats_lattice();
            let mut tail: Vec<ClassFunction> =
                (0..=d).map(|_| ClassFunction::zero(group)).collect();
            let mut visited: HashSet<u16> = HashSet::new();
            for (r, flat) in lattice.iter() {
                if r == 0 || visited.contains(&flat) {
                    continue;
                }
                // sweep out the orbit, keep the lexicographically least flat
                let mut orbit: Vec<u16> = group
                    .elements()
                    .iter()
                    .map(|g| g.apply_to_mask(flat))
                    .collect();
                orbit.sort_unstable();
                orbit.dedup();
                let rep = orbit[0];
                visited.extend(orbit.iter().copied());

                let stab = group.stabilizer_of_mask(rep);
                let contraction = m.contract_set(rep);
                let (restricted, to_restricted) =
                    restrict_action(&stab, m.ground_mask(), rep);
                let simp = contraction.simplify();
                let (image, to_image) = action_on_classes(&restricted, &simp.class_of);
                let (p_sub, _) = self.eq_kl_simple(&simp.matroid, &image)?;
                // pull back along stabilizer -> restriction -> class action,
                // then induce up to the full group coefficient by coefficient
                let hom: Vec<usize> = to_restricted.iter().map(|&i| to_image[i]).collect();
                let pulled = pull_back(&stab, &image, &hom, &p_sub);
                for (i, cf) in pulled.coeffs.iter().enumerate() {
                    let induced = induce(group, &stab, cf)?;
                    tail[r + i] = tail[r + i].add(&induced);
                }
            }
            let mut p_coeffs = Vec::new();
            let mut i = 0;
            while 2 * i < d {
                p_coeffs.push(tail[d - i].sub(&tail[i]));
                i += 1;
            }
            let p = EquivariantPoly {
                rank: d,
                coeffs: p_coeffs,
            };
            let z_coeffs: Vec<ClassFunction> = (0..=d)
                .map(|i| tail[i].add(&p.coeff(i, group)))
                .collect();
            let z = EquivariantPoly {
                rank: d,
                coeffs: z_coeffs,
            };
            if !z.is_palindromic_charwise(group) {
                return Err(EqError::Validation(
                    "completed Z is not palindromic at the class-function level".into(),
                ));
            }
            (p, z)
        };
        self.memo
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| result.clone());
        Ok(result)
    }
}

/// Restrict a group fixing `removed` setwise to its action on the remaining
/// elements, renumbered order-preservingly. Returns the image group and the
/// homomorphism as an index map (the restriction need not be faithful).
fn restrict_action(stab: &PermGroup, ground: u16, removed: u16) -> (PermGroup, Vec<usize>) {
    let keep: Vec<usize> = bits(ground & !removed).collect();
    let pos_of: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let images: Vec<Perm> = stab
        .elements()
        .iter()
        .map(|g| Perm(keep.iter().map(|&e| pos_of[&g.apply(e)]).collect()))
        .collect();
    let quotient = PermGroup::from_subgroup_elements(images.clone());
    let hom = images
        .iter()
        .map(|im| {
            quotient
                .elements()
                .binary_search(im)
                .expect("image element present")
        })
        .collect();
    (quotient, hom)
}

/// Image of a group action on the parallel classes of a simplification,
/// together with the homomorphism as an index map (source element index ->
/// image element index).
fn action_on_classes(group: &PermGroup, class_of: &[Option<usize>]) -> (PermGroup, Vec<usize>) {
    let class_count = class_of
        .iter()
        .filter_map(|c| *c)
        .max()
        .map_or(0, |c| c + 1);
    // representative element of each class
    let mut rep_of_class = vec![usize::MAX; class_count];
    for (e, c) in class_of.iter().enumerate() {
        if let Some(c) = c {
            if rep_of_class[*c] == usize::MAX {
                rep_of_class[*c] = e;
            }
        }
    }
    let images: Vec<Perm> = group
        .elements()
        .iter()
        .map(|g| {
            Perm(
                rep_of_class
                    .iter()
                    .map(|&rep| class_of[g.apply(rep)].expect("non-loop maps to non-loop"))
                    .collect(),
            )
        })
        .collect();
    let quotient = PermGroup::from_subgroup_elements(images.clone());
    let hom: Vec<usize> = images
        .iter()
        .map(|im| {
            quotient
                .elements()
                .binary_search(im)
                .expect("image element present")
        })
        .collect();
    (quotient, hom)
}

/// Pull a polynomial of class functions on the image group back along a
/// surjection: the value at a source class is the value at the image of its
/// representative.
fn pull_back(
    source: &PermGroup,
    image: &PermGroup,
    hom: &[usize],
    poly: &EquivariantPoly,
) -> EquivariantPoly {
    let coeffs = poly
        .coeffs
        .iter()
        .map(|cf| ClassFunction {
            values: (0..source.class_count())
                .map(|c| {
                    let src_idx = source.classes()[c].rep;
                    cf.values[image.class_of_index(hom[src_idx])].clone()
                })
                .collect(),
        })
        .collect();
    EquivariantPoly {
        rank: poly.rank,
        coeffs,
    }
}

/// Index of the edge {i,j} of the complete graph on n vertices in
/// lexicographic order.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (0..i).map(|a| n - 1 - a).sum::<usize>() + (j - i - 1)
}

/// Lift a permutation of the vertices of the complete graph to the induced
/// permutation of its edges.
pub fn vertex_perm_to_edge_perm(n: usize, vperm: &Perm) -> Perm {
    let mut image = vec![0usize; n * (n - 1) / 2];
    for i in 0..n {
        for j in i + 1..n {
            image[edge_index(n, i, j)] = edge_index(n, vperm.apply(i), vperm.apply(j));
        }
    }
    Perm(image)
}

/// The subgroup of the symmetric group on n vertices fixing the last vertex,
/// acting on the edges of the complete graph. Returns the edge-permutation
/// group and the map from each degree-(n-1) vertex permutation to its edge
/// lift.
pub fn edge_action_of_vertex_stabilizer(n: usize) -> (PermGroup, HashMap<Perm, Perm>) {
    let mut edge_perms = Vec::new();
    let mut lift = HashMap::new();
    crate::matroid::permutations(n - 1, &mut |p| {
        let mut v = p.to_vec();
        v.push(n - 1);
        let eperm = vertex_perm_to_edge_perm(n, &Perm(v));
        lift.insert(Perm(p.to_vec()), eperm.clone());
        edge_perms.push(eperm);
    });
    (PermGroup::from_subgroup_elements(edge_perms), lift)
}

/// Theorem check: for the symmetric-group-on-(n-1) action on the braid
/// matroid, every coefficient of the equivariant P equals the fixed-point
/// character on simple quasi series-parallel matroids of the complementary
/// rank, and every coefficient of Z the character on all of them; identity
/// evaluation recovers the ordinary polynomials.
pub fn verify_theorem_equivariant(n: usize) -> Result<VerifyReport, EqError> {
    assert!((3..=6).contains(&n), "supported range is 3..=6");
    let braid = Matroid::braid(n).expect("n within braid range");
    let (edge_group, lift) = edge_action_of_vertex_stabilizer(n);
    let engine = EqKlEngine::new();
    let (p, z) = engine.equivariant_kl(&braid, &edge_group)?;

    let vertex_group = PermGroup::symmetric(n - 1);
    let simple = enum_simple_qsp(n - 1).expect("within enumeration limits");
    let all = enum_qsp(n - 1, false).expect("within enumeration limits");
    let act = |g: &Perm, m: &Matroid| m.relabel(&g.0);

    // per-coefficient class-function tables keyed by the cycle type of the
    // underlying vertex permutation
    let render = |v: &Rat| -> String {
        if v.is_integer() {
            v.to_integer().to_string()
        } else {
            v.to_string()
        }
    };
    let computed_table = |cf: &ClassFunction| -> String {
        let map: std::collections::BTreeMap<String, String> = (0..vertex_group.class_count())
            .map(|c| {
                let vrep = vertex_group.class_rep(c);
                let value = cf.value_at(&edge_group, &lift[vrep]).expect("lift in group");
                (vrep.cycle_type_string(), render(&value))
            })
            .collect();
        serde_json::to_string(&map).expect("table json")
    };
    let character_table = |cf: &ClassFunction| -> String {
        let map: std::collections::BTreeMap<String, String> = (0..vertex_group.class_count())
            .map(|c| {
                (
                    vertex_group.class_rep(c).cycle_type_string(),
                    render(&cf.values[c]),
                )
            })
            .collect();
        serde_json::to_string(&map).expect("table json")
    };

    let mut report = VerifyReport::new(format!("theorem-equivariant n={n}"));
    for i in 0..n - 1 {
        let rank = n - 1 - i;
        let chi_simple = perm_character(&vertex_group, &simple[rank], act)?;
        let chi_all = perm_character(&vertex_group, &all[rank], act)?;
        report.check_eq(
            format!("[t^{i}] P^eq = character on simple-qsp({}, {rank})", n - 1),
            computed_table(&p.coeff(i, &edge_group)),
            character_table(&chi_simple),
        );
        report.check_eq(
            format!("[t^{i}] Z^eq = character on qsp({}, {rank})", n - 1),
            computed_table(&z.coeff(i, &edge_group)),
            character_table(&chi_all),
        );
    }
    let ordinary = braid_kl(n).map_err(|e| EqError::Validation(e.to_string()))?;
    report.check_eq(
        "identity evaluation of P^eq",
        p.eval_identity(&edge_group)?,
        ordinary.p,
    );
    report.check_eq(
        "identity evaluation of Z^eq",
        z.eval_identity(&edge_group)?,
        ordinary.z,
    );
    report.check(
        "coefficients are genuine permutation characters",
        p.is_permutation_character_poly() && z.is_permutation_character_poly(),
        "nonnegative integer values on every class",
    );
    report.check(
        "Z^eq palindromic at the class-function level",
        z.is_palindromic_charwise(&edge_group),
        format!("degree {}", z.rank),
    );
    Ok(report)
}
