//! Enumeration of covering classes: orbits of monodromy triples
//! (g0, g1, g_inf) with prescribed cycle types under simultaneous
//! conjugation, with automorphism orders and connectivity.
//!
//! The algorithm fixes one slot's permutation as the canonical class
//! representative, generates candidates for an adjacent slot, derives the
//! third from the product relation, and deduplicates candidates under the
//! centralizer of the fixed permutation. Orbit-stabilizer then gives the
//! automorphism order of each class as (centralizer order) / (orbit length)
//! without enumerating any stabilizer.
//!
//! Slots are rearranged per scheme before enumeration: a triple for any
//! rotation of the scheme, or for the reversed scheme with each permutation
//! inverted, is a triple for the original, so we always iterate candidates
//! over the smallest conjugacy class and fix the slot with the smallest
//! centralizer among the remaining two. Results are mapped back to the
//! original slot order and re-normalized, so output is independent of the
//! arrangement chosen.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::mass::Mass;
use crate::partition::{centralizer_order, class_size, Partition, RamificationScheme};
use crate::perm::{is_transitive, Permutation};

/// Degrees beyond this overflow the packed candidate representation.
pub const HARD_MAX_DEGREE: u32 = 16;

/// Tunable resource limits for enumeration.
#[derive(Clone, Debug)]
pub struct EnumerationLimits {
    /// Soft degree cap; schemes above it are refused with a resource error.
    pub max_degree: u32,
    /// Conjugacy classes smaller than this are iterated plainly instead of
    /// through the pruned backtracking generator.
    pub plain_threshold: u64,
    /// Upper bound on stored candidate permutations per scheme.
    pub max_candidates: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_degree: 12,
            plain_threshold: 4096,
            max_candidates: 32_000_000,
        }
    }
}

/// A conjugation orbit of monodromy triples for one scheme.
///
/// The representative is canonical: g0 is the canonical class representative
/// of lambda0 and the triple is a deterministic function of the scheme.
#[derive(Clone, PartialEq, Eq)]
pub struct CoveringClass {
    scheme: RamificationScheme,
    g0: Permutation,
    g1: Permutation,
    g_inf: Permutation,
    aut_order: u64,
    connected: bool,
}

impl CoveringClass {
    fn new(scheme: RamificationScheme, triple: [Permutation; 3], aut_order: u64) -> Self {
        let [g0, g1, g_inf] = triple;
        let n = scheme.degree() as usize;
        assert!(
            g0.compose(&g1).compose(&g_inf).is_identity(),
            "monodromy product must be the identity"
        );
        assert_eq!(g0.cycle_type(), *scheme.lambda0(), "g0 cycle type");
        assert_eq!(g1.cycle_type(), *scheme.lambda1(), "g1 cycle type");
        assert_eq!(g_inf.cycle_type(), *scheme.lambda_inf(), "g_inf cycle type");
        assert!(aut_order >= 1);
        let connected = is_transitive(&[g0.clone(), g1.clone()], n);
        if connected {
            // Centralizers of transitive groups act freely.
            assert_eq!(
                n as u64 % aut_order,
                0,
                "automorphism order must divide the degree for connected classes"
            );
        }
        CoveringClass {
            scheme,
            g0,
            g1,
            g_inf,
            aut_order,
            connected,
        }
    }

    pub fn scheme(&self) -> &RamificationScheme {
        &self.scheme
    }

    pub fn g0(&self) -> &Permutation {
        &self.g0
    }

    pub fn g1(&self) -> &Permutation {
        &self.g1
    }

    pub fn g_inf(&self) -> &Permutation {
        &self.g_inf
    }

    pub fn triple(&self) -> [&Permutation; 3] {
        [&self.g0, &self.g1, &self.g_inf]
    }

    /// Order of the simultaneous centralizer of the triple, i.e. |Aut| of
    /// the covering.
    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    /// Whether the monodromy group acts transitively, i.e. the covering
    /// surface is connected.
    pub fn connected(&self) -> bool {
        self.connected
    }
}

impl std::fmt::Debug for CoveringClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}|{}|{} aut={} connected={}",
            self.g0, self.g1, self.g_inf, self.aut_order, self.connected
        )
    }
}

/// Slot rearrangement: optionally reverse (with inversion), then rotate.
#[derive(Clone, Copy, Debug)]
struct Arrangement {
    reversed: bool,
    rotation: u8,
}

impl Arrangement {
    fn all() -> impl Iterator<Item = Arrangement> {
        (0..6).map(|i| Arrangement {
            reversed: i >= 3,
            rotation: i % 3,
        })
    }

    /// The scheme seen by the enumeration frame.
    fn apply(&self, s: &RamificationScheme) -> [Partition; 3] {
        let mut lams = [
            s.lambda0().clone(),
            s.lambda1().clone(),
            s.lambda_inf().clone(),
        ];
        if self.reversed {
            lams.swap(0, 2);
        }
        lams.rotate_left(self.rotation as usize);
        lams
    }

    /// Maps a triple found in the enumeration frame back to the original
    /// slot order. Rotation conjugates the product relation and reversal
    /// inverts it, so both preserve orbits, automorphism orders and the
    /// generated monodromy group.
    fn restore(&self, mut triple: [Permutation; 3]) -> [Permutation; 3] {
        triple.rotate_right(self.rotation as usize);
        if self.reversed {
            triple = [
                triple[2].inverse(),
                triple[1].inverse(),
                triple[0].inverse(),
            ];
        }
        triple
    }
}

/// Picks the cheapest arrangement: iterate candidates over the smallest
/// class, and among the two arrangements doing so, fix the slot whose class
/// is largest (smallest centralizer, hence fewest stored candidates and the
/// cheapest orbit walks). Deterministic.
fn choose_arrangement(s: &RamificationScheme) -> Arrangement {
    Arrangement::all()
        .min_by_key(|arr| {
            let lams = arr.apply(s);
            (
                class_size(&lams[1]),
                centralizer_order(&lams[0]),
                arr.reversed,
                arr.rotation,
            )
        })
        .expect("nonempty arrangement list")
}

const UNSET: u8 = 0xFF;

fn pack(images: &[u8]) -> u64 {
    let mut key = 0u64;
    for &v in images {
        key = (key << 4) | u64::from(v);
    }
    key
}

fn unpack(mut key: u64, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (key & 0xF) as u8;
        key >>= 4;
    }
}

/// Undo record for one edge of the partial product graph.
enum EdgeUndo {
    Closed { len: usize, prev_max: usize },
    Merged { u: u8, v: u8, s_u: u8, e_v: u8, old_edges: u16 },
}

/// Backtracking generator for candidates g1: builds permutations of type
/// lambda1 cycle by cycle (each cycle anchored at the smallest unused point,
/// so every class element is produced exactly once) while tracking the
/// partial product h = g0 * g1 as a union of paths and closed cycles. Each
/// single image assignment adds exactly one edge to h; a branch dies as soon
/// as h closes a cycle whose length cannot be matched by the remaining parts
/// of lambda_inf, or grows a path no remaining part can contain.
struct Search {
    n: usize,
    full_mask: u32,
    g0_inv: Vec<u8>,
    g1: Vec<u8>,
    used: u32,
    /// Remaining multiset of lambda1 cycle lengths.
    cycle_counts: Vec<u16>,
    /// Remaining multiset of lambda_inf cycle lengths.
    face_counts: Vec<u16>,
    faces_left: u16,
    max_face: usize,
    /// Path bookkeeping for h: valid at current path endpoints only.
    start_of: Vec<u8>,
    end_of: Vec<u8>,
    path_edges: Vec<u16>,
    out: Vec<u64>,
    max_candidates: usize,
    overflow: bool,
}

impl Search {
    fn new(g0: &Permutation, lambda1: &Partition, lambda_inf: &Partition, max_candidates: usize) -> Self {
        let n = g0.degree();
        let mut cycle_counts = vec![0u16; n + 1];
        for &p in lambda1.parts() {
            cycle_counts[p as usize] += 1;
        }
        let mut face_counts = vec![0u16; n + 1];
        for &p in lambda_inf.parts() {
            face_counts[p as usize] += 1;
        }
        let max_face = (1..=n).rev().find(|&l| face_counts[l] > 0).unwrap_or(0);
        Search {
            n,
            full_mask: (1u32 << n) - 1,
            g0_inv: g0.inverse().images().to_vec(),
            g1: vec![UNSET; n],
            used: 0,
            cycle_counts,
            face_counts,
            faces_left: lambda_inf.num_parts() as u16,
            max_face,
            start_of: (0..n as u8).collect(),
            end_of: (0..n as u8).collect(),
            path_edges: vec![0u16; n],
            out: Vec::new(),
            max_candidates,
            overflow: false,
        }
    }

    /// Adds the h-edge induced by assigning g1[a] = b, or None if the branch
    /// is pruned. h(x) = g1(g0(x)), so the edge runs g0^-1(a) -> b.
    fn add_edge(&mut self, a: usize, b: usize) -> Option<EdgeUndo> {
        let u = self.g0_inv[a] as usize;
        let v = b;
        let s_u = self.start_of[u] as usize;
        if s_u == v {
            // Closes a cycle of h.
            let len = self.path_edges[v] as usize + 1;
            if self.face_counts[len] == 0 {
                return None;
            }
            self.face_counts[len] -= 1;
            self.faces_left -= 1;
            let prev_max = self.max_face;
            if len == self.max_face && self.face_counts[len] == 0 {
                self.max_face = (1..len).rev().find(|&l| self.face_counts[l] > 0).unwrap_or(0);
            }
            Some(EdgeUndo::Closed { len, prev_max })
        } else {
            // Merges the path ending at u with the path starting at v.
            let e_v = self.end_of[v] as usize;
            let new_edges = self.path_edges[s_u] + 1 + self.path_edges[v];
            if new_edges as usize + 1 > self.max_face {
                return None;
            }
            let old_edges = self.path_edges[s_u];
            self.start_of[e_v] = s_u as u8;
            self.end_of[s_u] = e_v as u8;
            self.path_edges[s_u] = new_edges;
            Some(EdgeUndo::Merged {
                u: u as u8,
                v: v as u8,
                s_u: s_u as u8,
                e_v: e_v as u8,
                old_edges,
            })
        }
    }

    fn undo_edge(&mut self, undo: EdgeUndo) {
        match undo {
            EdgeUndo::Closed { len, prev_max } => {
                self.face_counts[len] += 1;
                self.faces_left += 1;
                self.max_face = prev_max;
            }
            EdgeUndo::Merged { u, v, s_u, e_v, old_edges } => {
                self.start_of[e_v as usize] = v;
                self.end_of[s_u as usize] = u;
                self.path_edges[s_u as usize] = old_edges;
            }
        }
    }

    fn run(&mut self) {
        if self.overflow {
            return;
        }
        if self.used == self.full_mask {
            debug_assert_eq!(self.faces_left, 0);
            if self.out.len() >= self.max_candidates {
                self.overflow = true;
                return;
            }
            self.out.push(pack(&self.g1));
            return;
        }
        let anchor = (!self.used).trailing_zeros() as usize;
        self.used |= 1 << anchor;
        for len in 1..=self.n {
            if self.cycle_counts[len] == 0 {
                continue;
            }
            self.cycle_counts[len] -= 1;
            self.extend_cycle(anchor, anchor, len - 1);
            self.cycle_counts[len] += 1;
        }
        self.used &= !(1 << anchor);
    }

    fn extend_cycle(&mut self, first: usize, prev: usize, remaining: usize) {
        if self.overflow {
            return;
        }
        if remaining == 0 {
            if let Some(undo) = self.add_edge(prev, first) {
                self.g1[prev] = first as u8;
                self.run();
                self.g1[prev] = UNSET;
                self.undo_edge(undo);
            }
            return;
        }
        let mut avail = !self.used & self.full_mask;
        while avail != 0 {
            let x = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            if let Some(undo) = self.add_edge(prev, x) {
                self.g1[prev] = x as u8;
                self.used |= 1 << x;
                self.extend_cycle(first, x, remaining - 1);
                self.used &= !(1 << x);
                self.g1[prev] = UNSET;
                self.undo_edge(undo);
            }
        }
    }
}

/// Plain candidate generation: iterate the whole class of lambda1 by the
/// same anchored construction, then filter on the full product's cycle
/// type. Used below the threshold, and as the independent twin of the
/// pruned generator in tests.
struct PlainSearch {
    n: usize,
    full_mask: u32,
    g0: Vec<u8>,
    g1: Vec<u8>,
    used: u32,
    cycle_counts: Vec<u16>,
    target_counts: Vec<u16>,
    out: Vec<u64>,
    max_candidates: usize,
    overflow: bool,
}

impl PlainSearch {
    fn new(g0: &Permutation, lambda1: &Partition, lambda_inf: &Partition, max_candidates: usize) -> Self {
        let n = g0.degree();
        let mut cycle_counts = vec![0u16; n + 1];
        for &p in lambda1.parts() {
            cycle_counts[p as usize] += 1;
        }
        let mut target_counts = vec![0u16; n + 1];
        for &p in lambda_inf.parts() {
            target_counts[p as usize] += 1;
        }
        PlainSearch {
            n,
            full_mask: (1u32 << n) - 1,
            g0: g0.images().to_vec(),
            g1: vec![UNSET; n],
            used: 0,
            cycle_counts,
            target_counts,
            out: Vec::new(),
            max_candidates,
            overflow: false,
        }
    }

    fn run(&mut self) {
        if self.overflow {
            return;
        }
        if self.used == self.full_mask {
            if self.product_type_matches() {
                if self.out.len() >= self.max_candidates {
                    self.overflow = true;
                    return;
                }
                self.out.push(pack(&self.g1));
            }
            return;
        }
        let anchor = (!self.used).trailing_zeros() as usize;
        self.used |= 1 << anchor;
        for len in 1..=self.n {
            if self.cycle_counts[len] == 0 {
                continue;
            }
            self.cycle_counts[len] -= 1;
            self.extend_cycle(anchor, anchor, len - 1);
            self.cycle_counts[len] += 1;
        }
        self.used &= !(1 << anchor);
    }

    fn extend_cycle(&mut self, first: usize, prev: usize, remaining: usize) {
        if self.overflow {
            return;
        }
        if remaining == 0 {
            self.g1[prev] = first as u8;
            self.run();
            self.g1[prev] = UNSET;
            return;
        }
        let mut avail = !self.used & self.full_mask;
        while avail != 0 {
            let x = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            self.g1[prev] = x as u8;
            self.used |= 1 << x;
            self.extend_cycle(first, x, remaining - 1);
            self.used &= !(1 << x);
            self.g1[prev] = UNSET;
        }
    }

    fn product_type_matches(&self) -> bool {
        let mut counts = [0u16; 33];
        let mut seen = 0u32;
        for start in 0..self.n {
            if seen & (1 << start) != 0 {
                continue;
            }
            let mut len = 0usize;
            let mut x = start;
            while seen & (1 << x) == 0 {
                seen |= 1 << x;
                len += 1;
                x = self.g1[self.g0[x] as usize] as usize;
            }
            counts[len] += 1;
        }
        (1..=self.n).all(|l| counts[l] == self.target_counts[l])
    }
}

/// Partitions sorted candidate keys into orbits under the centralizer of the
/// fixed permutation, acting by conjugation. Returns (representative key,
/// automorphism order) pairs in ascending key order; the representative is
/// the orbit's lexicographic minimum.
fn orbit_partition(keys: &[u64], n: usize, zgens: &[Vec<u8>], z_order: u64) -> Vec<(u64, u64)> {
    let mut visited = vec![false; keys.len()];
    let mut out = Vec::new();
    let mut element = vec![0u8; n];
    let mut conjugated = vec![0u8; n];
    for seed in 0..keys.len() {
        if visited[seed] {
            continue;
        }
        visited[seed] = true;
        let mut stack = vec![keys[seed]];
        let mut orbit_len = 1u64;
        while let Some(key) = stack.pop() {
            unpack(key, &mut element);
            for z in zgens {
                for i in 0..n {
                    conjugated[z[i] as usize] = z[element[i] as usize];
                }
                let neighbor = pack(&conjugated);
                let idx = keys
                    .binary_search(&neighbor)
                    .expect("conjugate escaped the candidate set");
                if !visited[idx] {
                    visited[idx] = true;
                    orbit_len += 1;
                    stack.push(neighbor);
                }
            }
        }
        assert_eq!(z_order % orbit_len, 0, "orbit length must divide |Z(g0)|");
        out.push((keys[seed], z_order / orbit_len));
    }
    out
}

/// Relabeling permutation c with p.conjugate(&c) equal to the canonical
/// representative of p's cycle type. Deterministic: cycles taken in
/// (length descending, smallest element ascending) order.
fn relabel_to_canonical(p: &Permutation) -> Permutation {
    let mut cycles = p.cycles();
    cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut images = vec![0u8; p.degree()];
    let mut next = 0u8;
    for cycle in &cycles {
        for &point in cycle {
            images[point - 1] = next;
            next += 1;
        }
    }
    Permutation::from_images(images)
}

/// All orbits of monodromy triples with the scheme's cycle types, connected
/// and disconnected, each with its automorphism order. Deterministic output:
/// representatives have g0 canonical and classes are sorted by g1's image
/// array; neither the slot arrangement nor worker counts affect the bytes.
pub fn enumerate_classes(
    scheme: &RamificationScheme,
    limits: &EnumerationLimits,
) -> Result<Vec<CoveringClass>> {
    let n = scheme.degree();
    if n > limits.max_degree {
        return Err(Error::Budget {
            scheme: scheme.to_string(),
            reason: format!("degree {n} exceeds the configured cap {}", limits.max_degree),
        });
    }
    if n > HARD_MAX_DEGREE {
        return Err(Error::Budget {
            scheme: scheme.to_string(),
            reason: format!("degree {n} exceeds the enumeration limit {HARD_MAX_DEGREE}"),
        });
    }

    let arrangement = choose_arrangement(scheme);
    let [a0, a1, a2] = arrangement.apply(scheme);
    let fixed = Permutation::canonical_of_type(&a0);

    let plain = class_size(&a1) < BigUint::from(limits.plain_threshold);
    let (keys, overflow) = if plain {
        let mut search = PlainSearch::new(&fixed, &a1, &a2, limits.max_candidates);
        search.run();
        (search.out, search.overflow)
    } else {
        let mut search = Search::new(&fixed, &a1, &a2, limits.max_candidates);
        search.run();
        (search.out, search.overflow)
    };
    if overflow {
        return Err(Error::Budget {
            scheme: scheme.to_string(),
            reason: format!("more than {} candidate permutations", limits.max_candidates),
        });
    }
    let mut keys = keys;
    keys.sort_unstable();
    debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));

    let zgens: Vec<Vec<u8>> = fixed
        .centralizer_generators()
        .iter()
        .map(|g| g.images().to_vec())
        .collect();
    let z_order = centralizer_order(&a0)
        .to_u64()
        .expect("centralizer order fits u64 at enumerable degrees");
    let orbits = orbit_partition(&keys, n as usize, &zgens, z_order);

    let mut classes = Vec::with_capacity(orbits.len());
    for (key, aut_order) in orbits {
        let mut images = vec![0u8; n as usize];
        unpack(key, &mut images);
        let e1 = Permutation::from_images(images);
        let e2 = fixed.compose(&e1).inverse();
        let restored = arrangement.restore([fixed.clone(), e1, e2]);
        let relabel = relabel_to_canonical(&restored[0]);
        let triple = [
            restored[0].conjugate(&relabel),
            restored[1].conjugate(&relabel),
            restored[2].conjugate(&relabel),
        ];
        debug_assert_eq!(triple[0], Permutation::canonical_of_type(scheme.lambda0()));
        classes.push(CoveringClass::new(scheme.clone(), triple, aut_order));
    }
    classes.sort_by(|a, b| a.g1.cmp(&b.g1).then(a.g0.cmp(&b.g0)));
    Ok(classes)
}

/// Sum of 1/aut over classes; over connected classes only if asked.
pub fn class_mass_sum(classes: &[CoveringClass], connected_only: bool) -> Mass {
    let mut total = Mass::zero();
    for class in classes {
        if !connected_only || class.connected {
            total += &Mass::one_over(class.aut_order);
        }
    }
    total
}

/// Sum of 1/aut over connected classes of the scheme.
pub fn connected_mass(scheme: &RamificationScheme, limits: &EnumerationLimits) -> Result<Mass> {
    Ok(class_mass_sum(&enumerate_classes(scheme, limits)?, true))
}

/// Number of connected classes; the scheme is exceptional iff this is 1.
pub fn count_connected(scheme: &RamificationScheme, limits: &EnumerationLimits) -> Result<usize> {
    Ok(enumerate_classes(scheme, limits)?
        .iter()
        .filter(|c| c.connected)
        .count())
}
