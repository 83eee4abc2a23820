//! Channel systems viewed as set systems over `[q]`: reduction, separable
//! splitting, the pairs graph, structural classification, and exact clique
//! computations on the pairs graph.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{Alphabet, ColoringChannel};
use crate::error::{Error, Result};

/// Largest alphabet for which [`edge_clique_cover`] runs its exact search.
pub const MAX_COVER_ALPHABET: usize = 16;

/// An alphabet together with an ordered, nonempty tuple of coloring channels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SystemSpec", into = "SystemSpec")]
pub struct ChannelSystem {
    alphabet: Alphabet,
    channels: Vec<ColoringChannel>,
}

/// Plain-data form of a [`ChannelSystem`]: `q` plus 1-based letter lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub q: usize,
    pub channels: Vec<Vec<usize>>,
}

impl TryFrom<SystemSpec> for ChannelSystem {
    type Error = Error;

    fn try_from(spec: SystemSpec) -> Result<Self> {
        ChannelSystem::from_lists(spec.q, &spec.channels)
    }
}

impl From<ChannelSystem> for SystemSpec {
    fn from(system: ChannelSystem) -> Self {
        SystemSpec {
            q: system.q(),
            channels: system
                .channels
                .iter()
                .map(|c| c.letters().map(usize::from).collect())
                .collect(),
        }
    }
}

impl ChannelSystem {
    pub fn new(alphabet: Alphabet, channels: Vec<ColoringChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::EmptySystem);
        }
        let full = alphabet.full_mask();
        if let Some(c) = channels.iter().find(|c| c.mask() & !full != 0) {
            return Err(Error::LetterOutOfRange {
                letter: c.max_letter() as usize,
                q: alphabet.size(),
            });
        }
        Ok(Self { alphabet, channels })
    }

    /// Convenience constructor from 1-based letter lists.
    pub fn from_lists<L: AsRef<[usize]>>(q: usize, channels: &[L]) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        let channels = channels
            .iter()
            .map(|c| ColoringChannel::new(alphabet, c.as_ref().iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, channels)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn q(&self) -> usize {
        self.alphabet.size()
    }

    pub fn channels(&self) -> &[ColoringChannel] {
        &self.channels
    }

    /// Number of channels `t`.
    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Mask of every letter seen by at least one channel.
    pub fn support(&self) -> u32 {
        self.channels.iter().fold(0, |acc, c| acc | c.mask())
    }

    /// No channel is contained in another and the system is not separable.
    pub fn is_irreducible(&self) -> bool {
        remove_dominated(self).len() == self.len() && separable_split(self).len() == 1
    }

    pub fn to_spec(&self) -> SystemSpec {
        self.clone().into()
    }
}

impl fmt::Display for ChannelSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.channels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ") over q={}", self.q())
    }
}

/// Drops every channel contained in another one. Among equal channels the
/// first occurrence survives; survivors keep their order.
pub fn remove_dominated(system: &ChannelSystem) -> ChannelSystem {
    let chans = &system.channels;
    let kept = chans
        .iter()
        .enumerate()
        .filter(|&(i, c)| {
            !chans.iter().enumerate().any(|(j, d)| {
                j != i && c.is_subset_of(*d) && (c.mask() != d.mask() || j < i)
            })
        })
        .map(|(_, c)| *c)
        .collect();
    ChannelSystem {
        alphabet: system.alphabet,
        channels: kept,
    }
}

/// Finest split of the channels into groups with pairwise disjoint letter
/// unions. Groups are ordered by their first channel and keep channel order.
pub fn separable_split(system: &ChannelSystem) -> Vec<ChannelSystem> {
    let t = system.channels.len();
    let mut group: Vec<usize> = (0..t).collect();
    fn find(group: &mut [usize], mut i: usize) -> usize {
        while group[i] != i {
            group[i] = group[group[i]];
            i = group[i];
        }
        i
    }
    for i in 0..t {
        for j in (i + 1)..t {
            if system.channels[i].intersects(system.channels[j]) {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut parts: Vec<Vec<ColoringChannel>> = Vec::new();
    for i in 0..t {
        let r = find(&mut group, i);
        match roots.iter().position(|&x| x == r) {
            Some(pos) => parts[pos].push(system.channels[i]),
            None => {
                roots.push(r);
                parts.push(vec![system.channels[i]]);
            }
        }
    }
    parts
        .into_iter()
        .map(|channels| ChannelSystem {
            alphabet: system.alphabet,
            channels,
        })
        .collect()
}

/// Undirected graph on the letters `1..=q`; `{u, v}` is an edge when both
/// letters lie in a common channel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairsGraph {
    alphabet: Alphabet,
    adj: Vec<u32>,
}

impl PairsGraph {
    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            adj: vec![0; alphabet.size()],
        }
    }

    pub fn from_edges(alphabet: Alphabet, edges: &[(u8, u8)]) -> Result<Self> {
        let mut g = Self::empty(alphabet);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn add_edge(&mut self, u: u8, v: u8) -> Result<()> {
        let u = self.alphabet.check_letter(u as usize)?;
        let v = self.alphabet.check_letter(v as usize)?;
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop on letter {u}")));
        }
        self.adj[(u - 1) as usize] |= 1 << (v - 1);
        self.adj[(v - 1) as usize] |= 1 << (u - 1);
        Ok(())
    }

    pub fn has_edge(&self, u: u8, v: u8) -> bool {
        u != v
            && (1..=self.alphabet.size() as u8).contains(&u)
            && (1..=self.alphabet.size() as u8).contains(&v)
            && self.adj[(u - 1) as usize] & (1 << (v - 1)) != 0
    }

    /// Neighbour mask of `letter` (bit `i` is letter `i + 1`).
    pub fn neighbours(&self, letter: u8) -> u32 {
        self.adj[(letter - 1) as usize]
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(u8, u8)> {
        let q = self.alphabet.size() as u8;
        let mut out = Vec::new();
        for u in 1..=q {
            for v in (u + 1)..=q {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Mask of letters with at least one incident edge.
    pub fn non_isolated(&self) -> u32 {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, m)| **m != 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn is_subgraph_of(&self, other: &PairsGraph) -> bool {
        self.alphabet == other.alphabet
            && self.adj.iter().zip(&other.adj).all(|(a, b)| a & !b == 0)
    }

    /// Whether every two letters of `mask` are adjacent.
    pub fn is_clique(&self, mask: u32) -> bool {
        (0..self.alphabet.size())
            .filter(|i| mask & (1 << i) != 0)
            .all(|i| mask & !(1 << i) & !self.adj[i] == 0)
    }

    /// The system with one two-letter channel per edge, in edge order.
    pub fn edge_system(&self) -> Result<ChannelSystem> {
        let channels = self
            .edges()
            .into_iter()
            .map(|(u, v)| ColoringChannel::from_mask((1 << (u - 1)) | (1 << (v - 1))))
            .collect::<Result<Vec<_>>>()?;
        if channels.is_empty() {
            return Err(Error::NoEdges);
        }
        ChannelSystem::new(self.alphabet, channels)
    }
}

pub fn pairs_graph(system: &ChannelSystem) -> PairsGraph {
    let mut g = PairsGraph::empty(system.alphabet);
    for c in &system.channels {
        let m = c.mask();
        for i in 0..system.q() {
            if m & (1 << i) != 0 {
                g.adj[i] |= m & !(1 << i);
            }
        }
    }
    g
}

/// Structural class of a channel system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum SystemClass {
    /// One channel with `size` letters.
    SingleChannel { size: usize },
    /// Irreducible system whose pairs graph is complete on the `size`
    /// letters it uses.
    FullClique { size: usize },
    Sunflower { k: usize, p: usize, t: usize },
    /// Two intersecting channels; a `(k, p, 2)`-sunflower as well when `p1 == p2`.
    TwoSets { k: usize, p1: usize, p2: usize },
    Path { t: usize },
    Cycle { t: usize },
    Separable { components: Vec<ChannelSystem> },
    Reducible { reduced: ChannelSystem },
    General,
}

impl SystemClass {
    pub fn tag(&self) -> &'static str {
        match self {
            SystemClass::SingleChannel { .. } => "single_channel",
            SystemClass::FullClique { .. } => "full_clique",
            SystemClass::Sunflower { .. } => "sunflower",
            SystemClass::TwoSets { .. } => "two_sets",
            SystemClass::Path { .. } => "path",
            SystemClass::Cycle { .. } => "cycle",
            SystemClass::Separable { .. } => "separable",
            SystemClass::Reducible { .. } => "reducible",
            SystemClass::General => "general",
        }
    }

    /// For `TwoSets` with equal sides, the sunflower parameters that also apply.
    pub fn also_sunflower(&self) -> Option<(usize, usize, usize)> {
        match *self {
            SystemClass::TwoSets { k, p1, p2 } if p1 == p2 => Some((k, p1, 2)),
            _ => None,
        }
    }
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemClass::SingleChannel { size } => write!(f, "single channel of size {size}"),
            SystemClass::FullClique { size } => write!(f, "clique on {size} letters"),
            SystemClass::Sunflower { k, p, t } => write!(f, "({k},{p},{t})-sunflower"),
            SystemClass::TwoSets { k, p1, p2 } => {
                write!(f, "two sets (k={k}, p1={p1}, p2={p2})")?;
                if p1 == p2 {
                    write!(f, " or ({k},{p1},2)-sunflower")?;
                }
                Ok(())
            }
            SystemClass::Path { t } => write!(f, "path of length {t}"),
            SystemClass::Cycle { t } => write!(f, "cycle of length {t}"),
            SystemClass::Separable { components } => {
                write!(f, "separable into {} components", components.len())
            }
            SystemClass::Reducible { reduced } => write!(f, "reducible to {reduced}"),
            SystemClass::General => f.write_str("general"),
        }
    }
}

/// Classifies a system. Reduction takes precedence, then separability, then
/// the single-channel and clique cases, then exact structural matches.
pub fn classify(system: &ChannelSystem) -> SystemClass {
    let reduced = remove_dominated(system);
    if reduced.len() != system.len() {
        return SystemClass::Reducible { reduced };
    }
    let components = separable_split(system);
    if components.len() > 1 {
        return SystemClass::Separable { components };
    }
    classify_irreducible(system)
}

pub(crate) fn classify_irreducible(system: &ChannelSystem) -> SystemClass {
    let chans = &system.channels;
    if chans.len() == 1 {
        return SystemClass::SingleChannel {
            size: chans[0].len(),
        };
    }
    let support = system.support();
    if pairs_graph(system).is_clique(support) {
        return SystemClass::FullClique {
            size: support.count_ones() as usize,
        };
    }
    if let Some((k, p1, p2)) = two_sets_params(system) {
        return SystemClass::TwoSets { k, p1, p2 };
    }
    if let Some((k, p, t)) = sunflower_params(system) {
        return SystemClass::Sunflower { k, p, t };
    }
    if let Some(t) = path_length(system) {
        return SystemClass::Path { t };
    }
    if let Some(t) = cycle_length(system) {
        if t >= 4 {
            return SystemClass::Cycle { t };
        }
    }
    SystemClass::General
}

/// `(k, p1, p2)` when the system is two channels with all three of
/// `|I1 ∩ I2|`, `|I1 \ I2|`, `|I2 \ I1|` positive. The two differences are
/// reported with `p1 <= p2` so the answer does not depend on channel order.
pub fn two_sets_params(system: &ChannelSystem) -> Option<(usize, usize, usize)> {
    match system.channels.as_slice() {
        [a, b] => {
            let (a, b) = (a.mask(), b.mask());
            let k = (a & b).count_ones() as usize;
            let d1 = (a & !b).count_ones() as usize;
            let d2 = (b & !a).count_ones() as usize;
            let (p1, p2) = (d1.min(d2), d1.max(d2));
            (k >= 1 && p1 >= 1).then_some((k, p1, p2))
        }
        _ => None,
    }
}

/// `(k, p, t)` when the channels form a uniform sunflower with `k, p >= 1`
/// and `t >= 2`.
pub fn sunflower_params(system: &ChannelSystem) -> Option<(usize, usize, usize)> {
    let chans = &system.channels;
    let t = chans.len();
    if t < 2 {
        return None;
    }
    let core = chans.iter().fold(u32::MAX, |acc, c| acc & c.mask());
    let k = core.count_ones() as usize;
    let size = chans[0].len();
    if k == 0 || size <= k || chans.iter().any(|c| c.len() != size) {
        return None;
    }
    for i in 0..t {
        for j in (i + 1)..t {
            if chans[i].mask() & chans[j].mask() != core {
                return None;
            }
        }
    }
    Some((k, size - k, t))
}

fn two_letter_degrees(system: &ChannelSystem) -> Option<(u32, Vec<u32>)> {
    if system.channels.iter().any(|c| c.len() != 2) {
        return None;
    }
    let g = pairs_graph(system);
    if g.edge_count() != system.len() {
        return None;
    }
    let degrees = g.adj.iter().map(|m| m.count_ones()).collect();
    Some((g.non_isolated(), degrees))
}

fn is_connected(system: &ChannelSystem) -> bool {
    separable_split(system).len() == 1
}

/// `t` when the channels are `{σ0,σ1}, …, {σ(t-1),σt}` on distinct letters
/// (in any channel order), `t >= 2`.
pub fn path_length(system: &ChannelSystem) -> Option<usize> {
    let t = system.len();
    let (used, degrees) = two_letter_degrees(system)?;
    (t >= 2
        && used.count_ones() as usize == t + 1
        && degrees.iter().all(|&d| d <= 2)
        && is_connected(system))
    .then_some(t)
}

/// `t` when the channels form a closed chain on `t >= 3` distinct letters.
pub fn cycle_length(system: &ChannelSystem) -> Option<usize> {
    let t = system.len();
    let (used, degrees) = two_letter_degrees(system)?;
    (t >= 3
        && used.count_ones() as usize == t
        && degrees.iter().all(|&d| d == 0 || d == 2)
        && is_connected(system))
    .then_some(t)
}

/// All maximal cliques of the graph, as letter masks, including isolated
/// vertices as singleton cliques.
pub fn maximal_cliques(g: &PairsGraph) -> Vec<u32> {
    fn expand(g: &PairsGraph, r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        let pivot = (0..g.adj.len())
            .filter(|i| (p | x) & (1 << i) != 0)
            .max_by_key(|&i| (p & g.adj[i]).count_ones())
            .expect("candidate set is nonempty");
        let mut candidates = p & !g.adj[pivot];
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let bit = 1u32 << v;
            expand(g, r | bit, p & g.adj[v], x & g.adj[v], out);
            p &= !bit;
            x |= bit;
        }
    }
    let mut out = Vec::new();
    expand(g, 0, g.alphabet.full_mask(), 0, &mut out);
    out.sort_unstable();
    out
}

/// Size of the largest clique, by exhaustive branch and bound.
pub fn clique_number(g: &PairsGraph) -> usize {
    fn search(g: &PairsGraph, size: usize, mut p: u32, best: &mut usize) {
        if p == 0 {
            *best = (*best).max(size);
            return;
        }
        while p != 0 {
            if size + p.count_ones() as usize <= *best {
                return;
            }
            let v = p.trailing_zeros() as usize;
            p &= p - 1;
            search(g, size + 1, p & g.adj[v], best);
        }
    }
    let mut best = 0;
    search(g, 0, g.alphabet.full_mask(), &mut best);
    best
}

/// A minimum set of cliques whose pairs cover every edge. Each clique is a
/// sorted letter list; the list of cliques is sorted.
pub fn edge_clique_cover(g: &PairsGraph) -> Result<Vec<Vec<u8>>> {
    let q = g.alphabet.size();
    if q > MAX_COVER_ALPHABET {
        return Err(Error::GraphTooLarge {
            q,
            max: MAX_COVER_ALPHABET,
        });
    }
    let edges = g.edges();
    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    // Edge sets fit in a u128: at most C(16, 2) = 120 edges.
    let edge_bit = |u: u8, v: u8| -> u128 {
        let idx = edges.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
        1u128 << idx
    };
    let cliques: Vec<(u32, u128)> = maximal_cliques(g)
        .into_iter()
        .filter(|m| m.count_ones() >= 2)
        .map(|m| {
            let letters: Vec<u8> = (0..q as u8).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect();
            let mut covered = 0u128;
            for (a, &u) in letters.iter().enumerate() {
                for &v in &letters[a + 1..] {
                    covered |= edge_bit(u, v);
                }
            }
            (m, covered)
        })
        .collect();
    let all: u128 = if edges.len() == 128 { u128::MAX } else { (1u128 << edges.len()) - 1 };
    let widest = cliques.iter().map(|c| c.1.count_ones()).max().unwrap_or(1);

    fn dfs(
        cliques: &[(u32, u128)],
        all: u128,
        widest: u32,
        covered: u128,
        budget: usize,
        chosen: &mut Vec<u32>,
    ) -> bool {
        let missing = all & !covered;
        if missing == 0 {
            return true;
        }
        if budget == 0 || (missing.count_ones()).div_ceil(widest) as usize > budget {
            return false;
        }
        // Branch on the uncovered edge with the fewest cliques through it.
        let mut best: Option<(u32, u128)> = None;
        let mut rest = missing;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            let n = cliques.iter().filter(|c| c.1 & bit != 0).count() as u32;
            if best.is_none_or(|(bn, _)| n < bn) {
                best = Some((n, bit));
            }
        }
        let (_, bit) = best.unwrap();
        for &(mask, cov) in cliques.iter().filter(|c| c.1 & bit != 0) {
            chosen.push(mask);
            if dfs(cliques, all, widest, covered | cov, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    let mut budget = 1;
    while !dfs(&cliques, all, widest, 0, budget, &mut chosen) {
        budget += 1;
    }
    let mut out: Vec<Vec<u8>> = chosen
        .into_iter()
        .map(|m| (0..q as u8).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Reads a clique cover back as a channel system over the graph's alphabet.
pub fn cover_system(alphabet: Alphabet, cover: &[Vec<u8>]) -> Result<ChannelSystem> {
    let channels = cover
        .iter()
        .map(|c| ColoringChannel::new(alphabet, c.iter().map(|&l| l as usize)))
        .collect::<Result<Vec<_>>>()?;
    ChannelSystem::new(alphabet, channels)
}
