//! Acyclic weighted word lattices in a plain text format.
//!
//! One declaration per line, two kinds:
//!
//! ```text
//! from to label start_frame end_frame weight
//! final state weight
//! ```
//!
//! Weights are negative log probabilities; frames are 10 ms units by
//! convention. The start state is the source state of the first arc line
//! (or the first declared final state for an arcless lattice), so writers
//! emit the start state's arcs first.

use super::{content_lines, parse_f64, parse_u32, parse_usize};
use crate::error::{Error, Result};

pub const EPSILON_LABEL: &str = "<eps>";

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeArc {
    pub from: usize,
    pub to: usize,
    pub label: String,
    pub start_frame: u32,
    pub end_frame: u32,
    /// Negative log probability.
    pub weight: f64,
}

/// Acyclic weighted word graph with per-arc frame extents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lattice {
    pub start: usize,
    pub arcs: Vec<LatticeArc>,
    pub finals: Vec<(usize, f64)>,
}

impl Lattice {
    pub fn num_states(&self) -> usize {
        let mut max = self.start;
        for a in &self.arcs {
            max = max.max(a.from).max(a.to);
        }
        for (s, _) in &self.finals {
            max = max.max(*s);
        }
        max + 1
    }

    /// Outgoing arc indices per state.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for (i, a) in self.arcs.iter().enumerate() {
            out[a.from].push(i);
        }
        out
    }

    /// Incoming arc indices per state.
    pub fn in_arcs(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_states()];
        for (i, a) in self.arcs.iter().enumerate() {
            inc[a.to].push(i);
        }
        inc
    }

    pub fn final_weight(&self, state: usize) -> Option<f64> {
        self.finals.iter().find(|(s, _)| *s == state).map(|(_, w)| *w)
    }

    pub fn min_frame(&self) -> u32 {
        self.arcs.iter().map(|a| a.start_frame).min().unwrap_or(0)
    }

    pub fn max_frame(&self) -> u32 {
        self.arcs.iter().map(|a| a.end_frame).max().unwrap_or(0)
    }

    /// States in topological order; fails on cycles.
    pub fn topo_order(&self) -> Result<Vec<usize>> {
        let n = self.num_states();
        let mut indegree = vec![0usize; n];
        for a in &self.arcs {
            indegree[a.to] += 1;
        }
        let out = self.out_arcs();
        let mut stack: Vec<usize> = (0..n).filter(|&s| indegree[s] == 0).collect();
        stack.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(s) = stack.pop() {
            order.push(s);
            for &ai in &out[s] {
                let t = self.arcs[ai].to;
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    stack.push(t);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Cycle);
        }
        Ok(order)
    }
}

pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let mut arcs: Vec<LatticeArc> = Vec::new();
    let mut finals = Vec::new();
    let mut start: Option<usize> = None;
    for (lineno, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() == Some(&"final") {
            if fields.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    format!("final declaration expects 3 fields, got {}", fields.len()),
                ));
            }
            let state = parse_usize(lineno, "state", fields[1])?;
            let weight = parse_f64(lineno, "weight", fields[2])?;
            if start.is_none() {
                start = Some(state);
            }
            finals.push((state, weight));
            continue;
        }
        if fields.len() != 6 {
            return Err(Error::parse(
                lineno,
                format!(
                    "arc declaration expects 6 fields (from to label start_frame end_frame weight), got {}",
                    fields.len()
                ),
            ));
        }
        let arc = LatticeArc {
            from: parse_usize(lineno, "from", fields[0])?,
            to: parse_usize(lineno, "to", fields[1])?,
            label: fields[2].to_ascii_uppercase(),
            start_frame: parse_u32(lineno, "start_frame", fields[3])?,
            end_frame: parse_u32(lineno, "end_frame", fields[4])?,
            weight: parse_f64(lineno, "weight", fields[5])?,
        };
        if arc.end_frame < arc.start_frame {
            return Err(Error::parse(
                lineno,
                format!(
                    "field end_frame: {} is before start_frame {}",
                    arc.end_frame, arc.start_frame
                ),
            ));
        }
        if start.is_none() {
            start = Some(arc.from);
        }
        arcs.push(arc);
    }
    let lat = Lattice {
        start: start.unwrap_or(0),
        arcs,
        finals,
    };
    lat.topo_order()?;
    Ok(lat)
}

pub fn write_lattice(lat: &Lattice) -> String {
    let mut out = String::new();
    for a in &lat.arcs {
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            a.from, a.to, a.label, a.start_frame, a.end_frame, a.weight
        ));
    }
    for (s, w) in &lat.finals {
        out.push_str(&format!("final {s} {w}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_single_arc() {
        let lat = parse_lattice("0 1 HELLO 0 10 0.5\nfinal 1 0\n").unwrap();
        assert_eq!(lat.start, 0);
        assert_eq!(lat.arcs.len(), 1);
        assert_eq!(lat.arcs[0].label, "HELLO");
        assert_eq!(lat.finals, vec![(1, 0.0)]);
    }

    #[test]
    fn round_trip() {
        let text = "0 1 HELLO 0 10 0.5\n1 2 WORLD 10 20 1.25\nfinal 2 0\n";
        let lat = parse_lattice(text).unwrap();
        assert_eq!(write_lattice(&lat), text);
    }

    #[test]
    fn five_field_line_names_the_line() {
        let err = parse_lattice("0 1 HELLO 0 10 0.5\n1 2 WORLD 10 20\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn cycle_rejected() {
        let err = parse_lattice("0 1 A 0 5 0\n1 0 B 5 9 0\nfinal 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Cycle));
    }

    #[test]
    fn exact_weight_round_trip() {
        let w = 0.1f64 + 0.2f64;
        let lat = Lattice {
            start: 0,
            arcs: vec![LatticeArc {
                from: 0,
                to: 1,
                label: "A".into(),
                start_frame: 0,
                end_frame: 3,
                weight: w,
            }],
            finals: vec![(1, 0.0)],
        };
        let parsed = parse_lattice(&write_lattice(&lat)).unwrap();
        assert_eq!(parsed.arcs[0].weight, w);
    }
}
