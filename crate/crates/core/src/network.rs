//! Alternative networks: the common currency of filtering, alignment, and
//! oracle scoring.
//!
//! A network is an ordered list of slots. Each slot holds a ranked list of
//! alternative word sequences; rank 0 is the preferred (as-written) form and
//! wins cost ties during alignment. An empty word sequence means the slot may
//! be skipped at zero cost. Individual words may additionally be flagged as
//! optional deletions.

use std::fmt;

/// One word inside a network alternative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetWord {
    pub surface: String,
    /// Optional-deletion flag; such a word may be skipped at zero cost.
    pub optional: bool,
}

impl NetWord {
    pub fn new(surface: impl Into<String>) -> NetWord {
        NetWord {
            surface: surface.into().to_ascii_uppercase(),
            optional: false,
        }
    }

    pub fn optional(surface: impl Into<String>) -> NetWord {
        NetWord {
            surface: surface.into().to_ascii_uppercase(),
            optional: true,
        }
    }
}

/// An item of an alternative: a plain word, or an embedded alternation left
/// behind by rule application and removed by
/// [`flatten_nested_alts`](crate::glm_filter::flatten_nested_alts).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AltItem {
    Word(NetWord),
    Group(Vec<Alternative>),
}

/// One ranked alternative of a slot. The rank is the index within the slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alternative {
    pub items: Vec<AltItem>,
}

impl Alternative {
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Alternative {
        Alternative {
            items: words
                .iter()
                .map(|w| AltItem::Word(NetWord::new(w.as_ref())))
                .collect(),
        }
    }

    pub fn empty() -> Alternative {
        Alternative { items: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.items.iter().all(|i| matches!(i, AltItem::Word(_)))
    }

    /// Words of a flat alternative. Panics on nested items; check
    /// [`is_flat`](Self::is_flat) first.
    pub fn words(&self) -> Vec<&NetWord> {
        self.items
            .iter()
            .map(|i| match i {
                AltItem::Word(w) => w,
                AltItem::Group(_) => panic!("words() on nested alternative"),
            })
            .collect()
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.words().iter().map(|w| w.surface.clone()).collect()
    }
}

/// One position of an [`AltNetwork`]: a ranked, non-empty list of alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Slot {
    pub alternatives: Vec<Alternative>,
}

impl Slot {
    pub fn single_word(word: NetWord) -> Slot {
        Slot {
            alternatives: vec![Alternative {
                items: vec![AltItem::Word(word)],
            }],
        }
    }

    pub fn is_flat(&self) -> bool {
        self.alternatives.iter().all(Alternative::is_flat)
    }

    /// Append an empty alternative at the lowest rank unless one is present.
    pub fn ensure_empty_alternative(&mut self) {
        if !self.alternatives.iter().any(Alternative::is_empty) {
            self.alternatives.push(Alternative::empty());
        }
    }

    pub fn has_empty_alternative(&self) -> bool {
        self.alternatives.iter().any(Alternative::is_empty)
    }
}

/// An acyclic sequence of slots holding ranked alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AltNetwork {
    pub slots: Vec<Slot>,
}

impl AltNetwork {
    pub fn new() -> AltNetwork {
        AltNetwork { slots: Vec::new() }
    }

    /// A network of singleton slots, one per word.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> AltNetwork {
        AltNetwork {
            slots: words
                .iter()
                .map(|w| Slot::single_word(NetWord::new(w.as_ref())))
                .collect(),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.slots.iter().all(Slot::is_flat)
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of expanded word sequences: the product over slots of the
    /// per-slot expansion counts, where an optional word doubles its
    /// alternative's count. Saturates at `u64::MAX`.
    pub fn expansion_count(&self) -> u64 {
        let mut total: u64 = 1;
        for slot in &self.slots {
            let mut per_slot: u64 = 0;
            for alt in &self.alternatives_expanded(slot) {
                let mut n: u64 = 1;
                for w in alt {
                    if w.optional {
                        n = n.saturating_mul(2);
                    }
                }
                per_slot = per_slot.saturating_add(n);
            }
            total = total.saturating_mul(per_slot.max(1));
        }
        total
    }

    fn alternatives_expanded(&self, slot: &Slot) -> Vec<Vec<NetWord>> {
        slot.alternatives
            .iter()
            .map(|a| {
                a.items
                    .iter()
                    .flat_map(|i| match i {
                        AltItem::Word(w) => Some(w.clone()),
                        AltItem::Group(_) => None,
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for AltNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, slot) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if slot.alternatives.len() == 1 && slot.alternatives[0].is_flat() {
                let words = slot.alternatives[0].surfaces();
                if words.is_empty() {
                    write!(f, "()")?;
                } else {
                    write!(f, "{}", words.join(" "))?;
                }
            } else {
                write!(f, "{{")?;
                for (r, alt) in slot.alternatives.iter().enumerate() {
                    if r > 0 {
                        write!(f, " / ")?;
                    }
                    if alt.is_flat() {
                        write!(f, "{}", alt.surfaces().join(" "))?;
                    } else {
                        write!(f, "<nested>")?;
                    }
                }
                write!(f, "}}")?;
            }
        }
        Ok(())
    }
}
