//! Capacity bounds for systems without an exact formula.

use std::f64::consts::E;

use crate::exact::{capacity_path, CapacityResult, Method, PathSolution, Witness};
use crate::error::{Error, Result};
use crate::oracle::{count_outputs, EnumerationConfig};
use crate::special::{entropy_unchecked as h, log_q};
use crate::system::{clique_number, pairs_graph, remove_dominated, ChannelSystem};

/// Clique bounds `log_q ω ≤ C ≤ min(1, log_q(ω t e))` for an irreducible
/// system with `t >= 2` channels.
pub fn bounds_general(system: &ChannelSystem) -> Result<CapacityResult> {
    if system.len() < 2 || !system.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let q = system.q();
    let t = system.len();
    let omega = clique_number(&pairs_graph(system));
    let lower = log_q(omega as f64, q);
    let upper = log_q(omega as f64 * t as f64 * E, q).min(1.0);
    Ok(CapacityResult::bounds(
        lower,
        upper,
        Method::GeneralBounds,
        Witness::GeneralBounds { omega, t },
    ))
}

/// `2^(1/√3 + (1 + 1/√3) H(2 - √3))`, the base of the 4-cycle upper bound.
pub fn four_cycle_upper_base() -> f64 {
    let s = 1.0 / 3f64.sqrt();
    (s + (1.0 + s) * h(2.0 - 3f64.sqrt())).exp2()
}

/// Bounds for a cycle of length `t >= 4` on distinct letters: the path of
/// length `t - 1` below, `log_q 3.732…` (t = 4) or `log_q 4` (t >= 5) above.
pub fn bounds_cycle(t: usize, q: usize) -> Result<CapacityResult> {
    if t < 4 {
        return Err(Error::CycleTooShort(t));
    }
    let lower_result = capacity_path(t - 1, q)?;
    if t > q {
        return Err(Error::Infeasible { needed: t, q });
    }
    let lower = lower_result.capacity.lower();
    let upper_base = if t == 4 { four_cycle_upper_base() } else { 4.0 };
    Ok(CapacityResult::bounds(
        lower,
        log_q(upper_base, q),
        Method::CycleBounds,
        Witness::CycleBounds {
            t,
            lower_path: PathSolution::new(t - 1)?,
            upper_base,
        },
    ))
}

/// Checks `|A_S(n)| <= |A_S2(n)|` by enumeration, given that the pairs graph
/// of `s` is a subgraph of that of `s2`. Both systems must be over the same
/// alphabet and, after dropping dominated channels, use only channels of at
/// least two letters (so the pairs graph determines the output count).
pub fn subgraph_monotonic_check(
    s: &ChannelSystem,
    s2: &ChannelSystem,
    n: usize,
    config: &EnumerationConfig,
) -> Result<bool> {
    if s.alphabet() != s2.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: s.q(),
            found: s2.q(),
        });
    }
    for sys in [s, s2] {
        if remove_dominated(sys).channels().iter().any(|c| c.len() < 2) {
            return Err(Error::InvalidParameter(
                "systems must not keep single-letter channels".into(),
            ));
        }
    }
    if !pairs_graph(s).is_subgraph_of(&pairs_graph(s2)) {
        return Err(Error::NotSubgraph);
    }
    let small = count_outputs(s, n, config)?;
    let large = count_outputs(s2, n, config)?;
    Ok(small.count <= large.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::capacity_sunflower;

    fn sys(q: usize, chans: &[&[usize]]) -> ChannelSystem {
        ChannelSystem::from_lists(q, chans).unwrap()
    }

    #[test]
    fn general_bounds_examples() {
        let path = bounds_general(&sys(4, &[&[1, 2], &[2, 3], &[3, 4]])).unwrap();
        assert_eq!(path.capacity.lower(), 0.5);
        assert_eq!(path.capacity.upper(), 1.0);

        let star = bounds_general(&sys(4, &[&[1, 2], &[1, 3], &[1, 4]])).unwrap();
        assert_eq!((star.capacity.lower(), star.capacity.upper()), (0.5, 1.0));

        let clique = bounds_general(&sys(3, &[&[1, 2], &[2, 3], &[1, 3]])).unwrap();
        assert_eq!((clique.capacity.lower(), clique.capacity.upper()), (1.0, 1.0));
    }

    #[test]
    fn general_bounds_unclamped() {
        // ω = 2, t = 2 over q = 16: log_16(4e) < 1.
        let r = bounds_general(&sys(16, &[&[1, 2], &[2, 3]])).unwrap();
        assert!((r.capacity.upper() - (4.0 * E).ln() / 16f64.ln()).abs() < 1e-15);
        assert!(r.capacity.upper() < 1.0);
    }

    #[test]
    fn general_bounds_preconditions() {
        assert_eq!(bounds_general(&sys(4, &[&[1, 2, 3]])), Err(Error::NotIrreducible));
        assert_eq!(bounds_general(&sys(4, &[&[1, 2], &[3, 4]])), Err(Error::NotIrreducible));
        assert_eq!(bounds_general(&sys(4, &[&[1, 2], &[1, 2, 3]])), Err(Error::NotIrreducible));
    }

    #[test]
    fn cycle_bounds() {
        let r = bounds_cycle(4, 4).unwrap();
        assert!((r.capacity.lower() - 0.79248).abs() < 5e-6);
        assert!((r.capacity.upper() - 0.94998).abs() < 5e-6);
        assert!((four_cycle_upper_base() - (2.0 + 3f64.sqrt())).abs() < 1e-12);

        let r = bounds_cycle(5, 5).unwrap();
        let lower = capacity_path(4, 5).unwrap().capacity.lower();
        assert_eq!(r.capacity.lower(), lower);
        assert!((r.capacity.upper() - 0.861_353_116).abs() < 1e-9);

        let r = bounds_cycle(4, 5).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let expected = (s + (1.0 + s) * h(2.0 - 3f64.sqrt())) * 2f64.ln() / 5f64.ln();
        assert!((r.capacity.upper() - expected).abs() < 1e-15);
    }

    #[test]
    fn four_cycle_upper_is_sunflower() {
        for q in 4..=8 {
            let cycle = bounds_cycle(4, q).unwrap().capacity.upper();
            let sun = capacity_sunflower(2, 1, 2, q).unwrap().capacity.lower();
            assert!((cycle - sun).abs() < 1e-9, "q={q}");
        }
    }

    #[test]
    fn cycle_errors() {
        assert_eq!(bounds_cycle(3, 4), Err(Error::CycleTooShort(3)));
        assert_eq!(bounds_cycle(2, 4), Err(Error::CycleTooShort(2)));
        assert!(matches!(bounds_cycle(5, 4), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn monotonic_check() {
        let cfg = EnumerationConfig::default();
        let path = sys(4, &[&[1, 2], &[2, 3], &[3, 4]]);
        let cycle = sys(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]]);
        assert!(subgraph_monotonic_check(&path, &cycle, 6, &cfg).unwrap());
        assert!(subgraph_monotonic_check(&cycle, &cycle, 5, &cfg).unwrap());
        assert!(subgraph_monotonic_check(&sys(3, &[&[1, 2]]), &sys(3, &[&[1, 2, 3]]), 5, &cfg).unwrap());
        assert_eq!(
            subgraph_monotonic_check(&cycle, &path, 3, &cfg),
            Err(Error::NotSubgraph)
        );
        assert!(subgraph_monotonic_check(&sys(3, &[&[1], &[2]]), &sys(3, &[&[1, 2]]), 3, &cfg).is_err());
    }
}
