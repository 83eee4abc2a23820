//! Brute-force ground truth.
//!
//! Exhaustive enumeration of output tuples over `Σ^n`, the exact
//! composition-count products for sunflowers and paths, and reconstruction
//! of a channel view from its two-letter projections.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::channel::{project_into, ColoringChannel, Word};
use crate::error::{Error, Result};
use crate::system::{pairs_graph, ChannelSystem};

/// Default cap on the number of enumerated words.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationConfig {
    /// Largest number of words that may be enumerated.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub n: usize,
    /// `|A_S(n)|`, the number of distinct output tuples.
    pub count: BigUint,
    /// `(1/n) log_q count`; zero when `n = 0`.
    pub rate: f64,
    pub elapsed: Duration,
}

fn check_budget(letters: usize, n: usize, budget: u64) -> Result<()> {
    let states = BigUint::from(letters).pow(n as u32);
    if states > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            states: states.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Number of distinct output tuples of `system` over all words of length
/// `n` drawn from `letters`.
pub fn count_outputs_over(
    system: &ChannelSystem,
    letters: &[u8],
    n: usize,
    config: &EnumerationConfig,
) -> Result<BigUint> {
    for &l in letters {
        system.alphabet().check_letter(l as usize)?;
    }
    if letters.is_empty() {
        return Ok(if n == 0 { BigUint::one() } else { BigUint::zero() });
    }
    check_budget(letters.len(), n, config.budget)?;
    let masks: Vec<u32> = system.channels().iter().map(|c| c.mask()).collect();
    let count = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| distinct_outputs(&masks, letters, n)),
        None => distinct_outputs(&masks, letters, n),
    };
    Ok(BigUint::from(count))
}

/// `|A_S(n)|` by exhaustive enumeration of `[q]^n`.
pub fn count_outputs(
    system: &ChannelSystem,
    n: usize,
    config: &EnumerationConfig,
) -> Result<EnumerationReport> {
    let start = Instant::now();
    let letters: Vec<u8> = system.alphabet().letters().collect();
    let count = count_outputs_over(system, &letters, n, config)?;
    let rate = if n == 0 {
        0.0
    } else {
        biguint_ln(&count) / (system.q() as f64).ln() / n as f64
    };
    Ok(EnumerationReport {
        n,
        count,
        rate,
        elapsed: start.elapsed(),
    })
}

fn biguint_ln(x: &BigUint) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let bits = x.bits();
            let shift = bits.saturating_sub(60);
            (x >> shift).to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Serialises the output tuple of `word` into `key`: per channel a `u32`
/// length followed by the kept symbols.
fn encode(masks: &[u32], word: &[u8], key: &mut Vec<u8>) {
    key.clear();
    for &m in masks {
        let at = key.len();
        key.extend_from_slice(&[0; 4]);
        project_into(word, m, key);
        let len = (key.len() - at - 4) as u32;
        key[at..at + 4].copy_from_slice(&len.to_le_bytes());
    }
}

fn distinct_outputs(masks: &[u32], letters: &[u8], n: usize) -> usize {
    let b = letters.len();
    // Partition by a prefix long enough to feed the pool.
    let target = rayon::current_num_threads() * 8;
    let mut depth = 0;
    let mut chunks = 1usize;
    while depth < n && chunks < target {
        depth += 1;
        chunks *= b;
    }
    let sets: Vec<HashSet<Box<[u8]>>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut word = vec![0u8; n];
            let mut c = chunk;
            for pos in (0..depth).rev() {
                word[pos] = letters[c % b];
                c /= b;
            }
            let mut digits = vec![0usize; n - depth];
            for slot in &mut word[depth..] {
                *slot = letters[0];
            }
            let mut seen: HashSet<Box<[u8]>> = HashSet::new();
            let mut key = Vec::new();
            loop {
                encode(masks, &word, &mut key);
                if !seen.contains(key.as_slice()) {
                    seen.insert(key.clone().into_boxed_slice());
                }
                // Odometer over the suffix, last position fastest.
                let mut pos = n - depth;
                loop {
                    if pos == 0 {
                        return seen;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < b {
                        word[depth + pos] = letters[digits[pos]];
                        break;
                    }
                    digits[pos] = 0;
                    word[depth + pos] = letters[0];
                }
            }
        })
        .collect();
    let mut iter = sets.into_iter();
    let mut all = iter.next().unwrap_or_default();
    for set in iter {
        if set.len() > all.len() {
            let small = std::mem::replace(&mut all, set);
            all.extend(small);
        } else {
            all.extend(set);
        }
    }
    all.len()
}

/// Outcome of [`empirical_rate_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateSweep {
    pub reports: Vec<EnumerationReport>,
    /// Set when enumeration stopped early because the next length exceeded
    /// the budget.
    pub truncated: bool,
}

/// Reports for `n = 1..=n_max`, stopping at the first length over budget.
pub fn empirical_rate_sweep(
    system: &ChannelSystem,
    n_max: usize,
    config: &EnumerationConfig,
) -> Result<RateSweep> {
    let mut reports = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        match count_outputs(system, n, config) {
            Ok(r) => reports.push(r),
            Err(Error::BudgetExceeded { .. }) => {
                return Ok(RateSweep {
                    reports,
                    truncated: true,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RateSweep {
        reports,
        truncated: false,
    })
}

/// Checks `|A_S(n)| = |A_{E_S}(n)|` for an irreducible system with `t >= 2`.
pub fn verify_pairs_equality(
    system: &ChannelSystem,
    n: usize,
    config: &EnumerationConfig,
) -> Result<bool> {
    if system.len() < 2 || !system.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let edges = pairs_graph(system).edge_system()?;
    let a = count_outputs(system, n, config)?;
    let b = count_outputs(&edges, n, config)?;
    Ok(a.count == b.count)
}

/// Composition parameters together with their exact output count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionCount {
    pub parameters: Vec<u64>,
    pub count: BigUint,
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `k^{j1} p^{Σ i_l} Π_l C(j1 + i_l, i_l)`: distinct outputs of a
/// `(k, p, t)`-sunflower over words with `j1` core letters and `i_l` letters
/// from petal `l`.
pub fn composition_count_sunflower(
    k: u64,
    p: u64,
    t: usize,
    petals: &[u64],
    core: u64,
) -> Result<CompositionCount> {
    if k == 0 || p == 0 || t == 0 {
        return Err(Error::InvalidParameter("k, p and t must be positive".into()));
    }
    if petals.len() != t {
        return Err(Error::InvalidParameter(format!(
            "expected {t} petal counts, got {}",
            petals.len()
        )));
    }
    let petal_total: u64 = petals.iter().sum();
    let mut count = BigUint::from(k).pow(core as u32) * BigUint::from(p).pow(petal_total as u32);
    for &i in petals {
        count *= binomial(core + i, i);
    }
    let mut parameters = petals.to_vec();
    parameters.push(core);
    Ok(CompositionCount { parameters, count })
}

/// `Π_{i=1..t} C(a_{i-1} + a_i, a_i)`: distinct outputs of a path of length
/// `t` over words with `a_i` copies of the `i`-th path letter.
pub fn composition_count_path(counts: &[u64]) -> Result<CompositionCount> {
    if counts.len() < 2 {
        return Err(Error::InvalidParameter(
            "a path needs at least two letter counts".into(),
        ));
    }
    let count = counts
        .windows(2)
        .map(|w| binomial(w[0] + w[1], w[1]))
        .product();
    Ok(CompositionCount {
        parameters: counts.to_vec(),
        count,
    })
}

fn for_each_composition(parts: usize, total: u64, f: &mut dyn FnMut(&[u64])) {
    fn rec(buf: &mut Vec<u64>, parts: usize, left: u64, f: &mut dyn FnMut(&[u64])) {
        if buf.len() + 1 == parts {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for v in 0..=left {
            buf.push(v);
            rec(buf, parts, left - v, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(parts);
    rec(&mut buf, parts, total, f);
}

/// Sum of sunflower composition counts over all `(i_1..i_t, j1)` summing to `n`.
pub fn sunflower_composition_total(k: u64, p: u64, t: usize, n: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    let mut err = None;
    for_each_composition(t + 1, n, &mut |c| {
        match composition_count_sunflower(k, p, t, &c[..t], c[t]) {
            Ok(cc) => total += cc.count,
            Err(e) => err = Some(e),
        }
    });
    err.map_or(Ok(total), Err)
}

/// Sum of path composition counts over all `(a_0..a_t)` summing to `n`.
pub fn path_composition_total(t: usize, n: u64) -> Result<BigUint> {
    if t == 0 {
        return Err(Error::InvalidParameter("path length must be positive".into()));
    }
    let mut total = BigUint::zero();
    for_each_composition(t + 1, n, &mut |c| {
        total += composition_count_path(c).expect("t >= 1").count;
    });
    Ok(total)
}

fn pair_key(a: u8, b: u8) -> (u8, u8) {
    (a.min(b), a.max(b))
}

/// The projections of `x` onto every two-letter subset of `channel`.
pub fn pair_projections(x: &Word, channel: ColoringChannel) -> BTreeMap<(u8, u8), Word> {
    let letters: Vec<u8> = channel.letters().collect();
    let mut out = BTreeMap::new();
    for (i, &a) in letters.iter().enumerate() {
        for &b in &letters[i + 1..] {
            let mut view = Vec::new();
            project_into(x.symbols(), (1 << (a - 1)) | (1 << (b - 1)), &mut view);
            out.insert((a, b), Word::from_raw(view));
        }
    }
    out
}

/// Rebuilds the view of `channel` from its pair views by repeatedly
/// eliminating every letter that loses a pairwise "who comes first" test.
pub fn reconstruct_view(
    pair_views: &BTreeMap<(u8, u8), Word>,
    channel: ColoringChannel,
) -> Result<Word> {
    let letters: Vec<u8> = channel.letters().collect();
    if letters.len() < 2 {
        return Err(Error::InvalidParameter(
            "reconstruction needs a channel with at least two letters".into(),
        ));
    }
    let mut views: Vec<((u8, u8), &[u8])> = Vec::new();
    for (i, &a) in letters.iter().enumerate() {
        for &b in &letters[i + 1..] {
            let view = pair_views.get(&(a, b)).ok_or(Error::MissingPair(a, b))?;
            if let Some(&bad) = view.symbols().iter().find(|&&s| s != a && s != b) {
                return Err(Error::InconsistentViews(format!(
                    "view of {{{a},{b}}} contains letter {bad}"
                )));
            }
            views.push((pair_key(a, b), view.symbols()));
        }
    }
    if let Some(&(a, b)) = pair_views.keys().find(|&&(a, b)| !channel.contains(a) || !channel.contains(b)) {
        return Err(Error::InconsistentViews(format!(
            "unexpected view for pair {{{a},{b}}}"
        )));
    }

    let mut cursor = vec![0usize; views.len()];
    let mut out = Vec::new();
    loop {
        let mut alive: u32 = 0;
        for (v, &(_, sym)) in views.iter().enumerate() {
            if let Some(&s) = sym.get(cursor[v]) {
                alive |= 1 << (s - 1);
            }
        }
        if alive == 0 {
            break;
        }
        let mut survivors = alive;
        for (v, &((a, b), sym)) in views.iter().enumerate() {
            if let Some(&first) = sym.get(cursor[v]) {
                let loser = if first == a { b } else { a };
                survivors &= !(1 << (loser - 1));
            }
        }
        if survivors.count_ones() != 1 {
            return Err(Error::InconsistentViews(format!(
                "no unique next letter after {} symbols",
                out.len()
            )));
        }
        let z = survivors.trailing_zeros() as u8 + 1;
        for (v, &((a, b), sym)) in views.iter().enumerate() {
            if a == z || b == z {
                if sym.get(cursor[v]) != Some(&z) {
                    return Err(Error::InconsistentViews(format!(
                        "letter {z} count disagrees in view of {{{a},{b}}}"
                    )));
                }
                cursor[v] += 1;
            }
        }
        out.push(z);
    }
    Ok(Word::from_raw(out))
}
