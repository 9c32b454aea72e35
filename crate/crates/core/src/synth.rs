//! Seeded generators for synthetic networks and lattices, shared by the
//! property tests, the acceptance suite, and the benchmarks.

use rand::Rng;

use crate::formats::{Lattice, LatticeArc};
use crate::network::{AltItem, AltNetwork, Alternative, NetWord, Slot};

#[derive(Debug, Clone)]
pub struct NetworkParams {
    pub max_slots: usize,
    pub max_alternatives: usize,
    pub max_words_per_alternative: usize,
    pub alphabet: Vec<String>,
    /// Chance that a slot offers an explicit empty alternative.
    pub p_empty_alternative: f64,
    /// Chance that a word carries the optional-deletion flag.
    pub p_optional_word: f64,
    /// Hard cap on the expanded path product of the generated network.
    pub max_expansions: u64,
}

impl Default for NetworkParams {
    fn default() -> NetworkParams {
        NetworkParams {
            max_slots: 4,
            max_alternatives: 3,
            max_words_per_alternative: 3,
            alphabet: ["A", "B", "C", "D", "E"].iter().map(|s| s.to_string()).collect(),
            p_empty_alternative: 0.2,
            p_optional_word: 0.1,
            max_expansions: 10_000,
        }
    }
}

impl NetworkParams {
    /// Hypothesis-side networks never carry optional words.
    pub fn hypothesis() -> NetworkParams {
        NetworkParams {
            p_optional_word: 0.0,
            ..NetworkParams::default()
        }
    }
}

pub fn random_network<R: Rng>(rng: &mut R, params: &NetworkParams) -> AltNetwork {
    let target_slots = rng.gen_range(0..=params.max_slots);
    let mut net = AltNetwork::new();
    for _ in 0..target_slots {
        let n_alts = rng.gen_range(1..=params.max_alternatives);
        let mut slot = Slot::default();
        for _ in 0..n_alts {
            let n_words = rng.gen_range(1..=params.max_words_per_alternative);
            let items = (0..n_words)
                .map(|_| {
                    let surface = &params.alphabet[rng.gen_range(0..params.alphabet.len())];
                    let word = if rng.gen_bool(params.p_optional_word) {
                        NetWord::optional(surface.clone())
                    } else {
                        NetWord::new(surface.clone())
                    };
                    AltItem::Word(word)
                })
                .collect();
            let alt = Alternative { items };
            if !slot.alternatives.contains(&alt) {
                slot.alternatives.push(alt);
            }
        }
        if rng.gen_bool(params.p_empty_alternative) {
            slot.ensure_empty_alternative();
        }
        net.slots.push(slot);
        if net.expansion_count() > params.max_expansions {
            net.slots.pop();
            break;
        }
    }
    net
}

#[derive(Debug, Clone)]
pub struct LatticeParams {
    /// States beyond the two mandatory endpoints.
    pub max_states: usize,
    /// Extra arcs on top of the connecting chain.
    pub max_extra_arcs: usize,
    pub alphabet: Vec<String>,
    pub p_silence: f64,
    pub max_weight: f64,
}

impl Default for LatticeParams {
    fn default() -> LatticeParams {
        LatticeParams {
            max_states: 10,
            max_extra_arcs: 8,
            alphabet: ["A", "B", "C", "D", "E", "F"].iter().map(|s| s.to_string()).collect(),
            p_silence: 0.15,
            max_weight: 5.0,
        }
    }
}

/// A random acyclic time-aligned lattice: states carry strictly increasing
/// frame times, every arc spans its endpoint frames, state 0 is the start
/// and the last state the only final. Every path therefore covers the whole
/// frame range, which keeps frame-cut posterior sums meaningful.
pub fn random_time_aligned_lattice<R: Rng>(rng: &mut R, params: &LatticeParams) -> Lattice {
    let n = rng.gen_range(2..=params.max_states.max(2));
    let mut frames = Vec::with_capacity(n);
    let mut t = 0u32;
    for _ in 0..n {
        frames.push(t);
        t += rng.gen_range(1..=20);
    }
    let label = |rng: &mut R| {
        if rng.gen_bool(params.p_silence) {
            "<SIL>".to_string()
        } else {
            params.alphabet[rng.gen_range(0..params.alphabet.len())].clone()
        }
    };
    let mut arcs = Vec::new();
    // Chain guaranteeing connectivity; extra arcs add ambiguity.
    for i in 0..n - 1 {
        arcs.push(LatticeArc {
            from: i,
            to: i + 1,
            label: label(rng),
            start_frame: frames[i],
            end_frame: frames[i + 1],
            weight: rng.gen_range(0.0..params.max_weight),
        });
    }
    for _ in 0..rng.gen_range(0..=params.max_extra_arcs) {
        let from = rng.gen_range(0..n - 1);
        let to = rng.gen_range(from + 1..n);
        arcs.push(LatticeArc {
            from,
            to,
            label: label(rng),
            start_frame: frames[from],
            end_frame: frames[to],
            weight: rng.gen_range(0.0..params.max_weight),
        });
    }
    Lattice {
        start: 0,
        arcs,
        finals: vec![(n - 1, rng.gen_range(0.0..1.0))],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn networks_respect_expansion_cap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let params = NetworkParams {
            max_slots: 12,
            max_expansions: 500,
            ..NetworkParams::default()
        };
        for _ in 0..50 {
            let net = random_network(&mut rng, &params);
            assert!(net.expansion_count() <= 500);
            assert!(net.is_flat());
        }
    }

    #[test]
    fn lattices_parse_and_connect() {
        use crate::formats::{parse_lattice, write_lattice};
        use crate::lattice_ops::connect;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let lat = random_time_aligned_lattice(&mut rng, &LatticeParams::default());
            let parsed = parse_lattice(&write_lattice(&lat)).unwrap();
            assert_eq!(parsed, lat);
            assert_eq!(connect(&lat).unwrap().arcs.len(), lat.arcs.len());
        }
    }
}
