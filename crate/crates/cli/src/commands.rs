//! Command implementations, independent of argument parsing and I/O.

use std::collections::BTreeMap;

use colorcap::oracle::{count_outputs, pair_projections, reconstruct_view, EnumerationConfig};
use colorcap::{
    bounds_cycle, bounds_general, capacity, classify, pairs_graph, remove_dominated, ChannelSystem,
    Error, SystemClass, Word,
};

use crate::document::{
    EnumerationRow, PairView, PairsCheck, Reconstruction, ResultDocument, SystemDocument,
    TableDocument, TableRow, ViewsDocument,
};
use crate::format::capacity_display;
use crate::CliError;

pub fn cmd_classify(doc: SystemDocument, system: &ChannelSystem) -> ResultDocument {
    let mut out = ResultDocument::new(doc);
    out.class = Some(classify(system));
    out
}

pub fn cmd_capacity(doc: SystemDocument, system: &ChannelSystem) -> ResultDocument {
    let mut out = ResultDocument::new(doc);
    out.class = Some(classify(system));
    out.capacity = Some(capacity(system));
    out
}

/// Clique bounds for the reduced system, plus the cycle bounds when it is
/// a cycle.
pub fn cmd_bounds(doc: SystemDocument, system: &ChannelSystem) -> Result<ResultDocument, CliError> {
    let reduced = remove_dominated(system);
    let general = bounds_general(&reduced).map_err(|e| match e {
        Error::NotIrreducible => CliError::Unsupported(
            "bounds need a system that is irreducible after removing dominated channels, with at least two channels"
                .into(),
        ),
        e => CliError::Unsupported(e.to_string()),
    })?;
    let class = classify(&reduced);
    let mut out = ResultDocument::new(doc);
    if let SystemClass::Cycle { t } = class {
        out.bounds
            .push(bounds_cycle(t, system.q()).map_err(|e| CliError::Unsupported(e.to_string()))?);
    }
    out.bounds.push(general);
    out.class = Some(class);
    Ok(out)
}

fn budget_error(e: Error) -> CliError {
    match e {
        Error::BudgetExceeded { states, budget } => CliError::Budget(format!(
            "enumeration needs {states} words, over the budget of {budget}"
        )),
        e => CliError::Unsupported(e.to_string()),
    }
}

pub fn cmd_enumerate(
    doc: SystemDocument,
    system: &ChannelSystem,
    n: usize,
    sweep: bool,
    verify_pairs: bool,
    config: &EnumerationConfig,
) -> Result<ResultDocument, CliError> {
    // The largest length decides whether anything runs at all.
    let words = (system.q() as u128).checked_pow(n as u32);
    if words.is_none_or(|w| w > config.budget as u128) {
        let states = num_bigint::BigUint::from(system.q()).pow(n as u32);
        return Err(budget_error(Error::BudgetExceeded {
            states: states.to_string(),
            budget: config.budget,
        }));
    }
    let edges = if verify_pairs {
        if system.len() < 2 || !system.is_irreducible() {
            return Err(CliError::Unsupported(
                "--verify-pairs needs an irreducible system with at least two channels".into(),
            ));
        }
        Some(pairs_graph(system).edge_system().map_err(|e| CliError::Unsupported(e.to_string()))?)
    } else {
        None
    };
    let lengths: Vec<usize> = if sweep { (1..=n).collect() } else { vec![n] };
    let mut out = ResultDocument::new(doc);
    for len in lengths {
        let report = count_outputs(system, len, config).map_err(budget_error)?;
        if let Some(edges) = &edges {
            let pairs = count_outputs(edges, len, config).map_err(budget_error)?;
            out.pairs_check.push(PairsCheck {
                n: len,
                count: report.count.to_string(),
                pairs_count: pairs.count.to_string(),
                equal: report.count == pairs.count,
            });
        }
        out.enumeration.push(EnumerationRow {
            n: len,
            count: report.count.to_string(),
            rate: report.rate,
        });
    }
    Ok(out)
}

fn channel_at(system: &ChannelSystem, index: usize) -> Result<colorcap::ColoringChannel, CliError> {
    if index == 0 || index > system.len() {
        return Err(CliError::Schema(format!(
            "--channel: index {index} outside 1..={}",
            system.len()
        )));
    }
    Ok(system.channels()[index - 1])
}

pub fn cmd_reconstruct(
    doc: SystemDocument,
    system: &ChannelSystem,
    index: usize,
    views: &ViewsDocument,
) -> Result<ResultDocument, CliError> {
    let channel = channel_at(system, index)?;
    let mut map = BTreeMap::new();
    for (i, v) in views.views.iter().enumerate() {
        let [a, b] = v.pair;
        let key = (a.min(b), a.max(b));
        let word = Word::new(system.alphabet(), v.word.clone())
            .map_err(|e| CliError::Schema(format!("views[{i}].word: {e}")))?;
        if map.insert(key, word).is_some() {
            return Err(CliError::Reconstruction(format!(
                "pair {{{},{}}} given more than once",
                key.0, key.1
            )));
        }
    }
    let word = reconstruct_view(&map, channel).map_err(|e| match e {
        Error::MissingPair(a, b) => CliError::Reconstruction(format!("missing view for pair {{{a},{b}}}")),
        Error::InconsistentViews(m) => CliError::Reconstruction(format!("inconsistent views: {m}")),
        e => CliError::Reconstruction(e.to_string()),
    })?;
    let mut out = ResultDocument::new(doc);
    out.reconstruction = Some(Reconstruction {
        channel: index,
        letters: channel.letters().collect(),
        word: word.into_symbols(),
    });
    Ok(out)
}

/// Pair views of `word` for channel `index`, in the format `reconstruct` reads.
pub fn cmd_project(system: &ChannelSystem, index: usize, word: &str) -> Result<ViewsDocument, CliError> {
    let channel = channel_at(system, index)?;
    let word = parse_word(word, system)?;
    let views = pair_projections(&word, channel)
        .into_iter()
        .map(|((a, b), w)| PairView {
            pair: [a, b],
            word: w.into_symbols(),
        })
        .collect();
    Ok(ViewsDocument { views })
}

/// Digits (`"3121"`) or comma-separated letters (`"3,12,1"`).
fn parse_word(text: &str, system: &ChannelSystem) -> Result<Word, CliError> {
    let a = system.alphabet();
    let w = if text.contains(',') {
        let letters = text
            .split(',')
            .enumerate()
            .map(|(i, s)| {
                s.trim()
                    .parse::<u8>()
                    .map_err(|_| CliError::Schema(format!("--word[{i}]: `{s}` is not a letter")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(a, letters)
    } else {
        Word::from_digits(a, text)
    };
    w.map_err(|e| CliError::Schema(format!("--word: {e}")))
}

const TABLE_Q3: &[&[&[usize]]] = &[&[&[1, 2, 3]], &[&[1, 3], &[2, 3]]];

const TABLE_Q4: &[&[&[usize]]] = &[
    &[&[1, 2, 3, 4]],
    &[&[1, 2, 3], &[1, 3, 4]],
    &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]],
    &[&[1, 2], &[1, 3, 4]],
    &[&[1, 2], &[1, 3], &[1, 4]],
    &[&[1, 2], &[2, 3], &[3, 4]],
];

/// Recomputes the capacity catalogue of all irreducible systems using every
/// letter of a ternary or quaternary alphabet.
pub fn cmd_table(which: &str) -> Result<TableDocument, CliError> {
    let (q, systems) = match which {
        "q3" => (3, TABLE_Q3),
        "q4" => (4, TABLE_Q4),
        other => {
            return Err(CliError::Schema(format!("--which: expected q3 or q4, found `{other}`")))
        }
    };
    let rows = systems
        .iter()
        .map(|chans| {
            let system = ChannelSystem::from_lists(q, chans).expect("table systems are valid");
            let result = capacity(&system);
            TableRow {
                system: SystemDocument::from_system(&system, None),
                class: classify(&system),
                display: capacity_display(&result.capacity),
                capacity: result,
            }
        })
        .collect();
    Ok(TableDocument {
        which: which.into(),
        rows,
    })
}
