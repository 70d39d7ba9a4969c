// SPDX-License-Identifier: Apache-2.0

//! NCL threshold gates.
//!
//! A gate has up to four inputs named `a`..`d` and one state-holding output.
//! Its behaviour is fixed by the set function alone:
//!
//! | condition                | next output |
//! |--------------------------|-------------|
//! | set function true        | 1           |
//! | every input deasserted   | 0           |
//! | otherwise                | previous    |
//!
//! Set functions are positive sums of products kept in canonical form: only
//! minimal products, ordered by length and then by their letters.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::GateError;

pub const MAX_ARITY: usize = 4;

const LETTERS: [char; MAX_ARITY] = ['a', 'b', 'c', 'd'];

/// Sum of products over positive literals. Each product is an input bitmask
/// (bit `i` is input `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFunction {
    arity: usize,
    products: Vec<u8>,
}

fn product_key(mask: u8) -> (u32, Vec<u8>) {
    let idx = (0..MAX_ARITY as u8).filter(|i| mask & (1 << i) != 0).collect();
    (mask.count_ones(), idx)
}

impl SetFunction {
    /// Builds the canonical form: drops absorbed products and sorts.
    pub fn from_products(arity: usize, products: &[u8]) -> Result<Self, String> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(format!("arity {arity} outside [1, {MAX_ARITY}]"));
        }
        let full = (1u8 << arity) - 1;
        let mut kept: Vec<u8> = Vec::new();
        for &p in products {
            if p == 0 {
                return Err("empty product".into());
            }
            if p & !full != 0 {
                return Err(format!("product references an input beyond arity {arity}"));
            }
            kept.push(p);
        }
        kept.sort_unstable();
        kept.dedup();
        let minimal: Vec<u8> = kept
            .iter()
            .copied()
            .filter(|&p| !kept.iter().any(|&q| q != p && q & p == q))
            .collect();
        let mut minimal = minimal;
        minimal.sort_by_key(|&m| product_key(m));
        if minimal.is_empty() {
            return Err("set function has no products".into());
        }
        Ok(Self {
            arity,
            products: minimal,
        })
    }

    /// Minimal true points of `sum(weights[i] for asserted i) >= threshold`.
    pub fn from_threshold(weights: &[u32], threshold: u32) -> Result<Self, String> {
        let arity = weights.len();
        if arity == 0 || arity > MAX_ARITY {
            return Err(format!("arity {arity} outside [1, {MAX_ARITY}]"));
        }
        let trues: Vec<u8> = (1u8..(1 << arity))
            .filter(|&m| weighted_sum(weights, m) >= threshold)
            .collect();
        Self::from_products(arity, &trues)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn products(&self) -> &[u8] {
        &self.products
    }

    #[inline]
    pub fn eval_mask(&self, inputs: u8) -> bool {
        self.products.iter().any(|&p| inputs & p == p)
    }

    pub fn literal_count(&self) -> usize {
        self.products.iter().map(|p| p.count_ones() as usize).sum()
    }

    pub fn mean_product_len(&self) -> f64 {
        self.literal_count() as f64 / self.products.len() as f64
    }
}

fn weighted_sum(weights: &[u32], mask: u8) -> u32 {
    weights
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, w)| *w)
        .sum()
}

impl fmt::Display for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &p) in self.products.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            for (i, c) in LETTERS.iter().enumerate() {
                if p & (1 << i) != 0 {
                    write!(f, "{c}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parses a single product such as `"bcd"`.
pub fn parse_product(text: &str) -> Result<u8, String> {
    let mut mask = 0u8;
    if text.is_empty() {
        return Err("empty product".into());
    }
    for c in text.chars() {
        let i = LETTERS
            .iter()
            .position(|&l| l == c)
            .ok_or_else(|| format!("bad literal `{c}` (expected a..d)"))?;
        if mask & (1 << i) != 0 {
            return Err(format!("literal `{c}` repeated in `{text}`"));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

impl FromStr for SetFunction {
    type Err = String;

    /// Parses `"ab+ac+bcd"`; arity is taken from the highest literal used.
    fn from_str(s: &str) -> Result<Self, String> {
        let masks = s
            .split('+')
            .map(|t| parse_product(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        let all = masks.iter().fold(0u8, |a, m| a | m);
        let arity = 8 - all.leading_zeros() as usize;
        Self::from_products(arity, &masks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransistorCounts {
    pub pmos: u32,
    pub nmos: u32,
}

impl TransistorCounts {
    pub fn total(&self) -> u32 {
        self.pmos + self.nmos
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateSpec {
    pub name: String,
    pub set_function: SetFunction,
    pub weights: Option<Vec<u32>>,
    pub threshold: Option<u32>,
    pub counts: TransistorCounts,
    /// True when `counts` came from the fallback formula rather than a catalog.
    pub counts_estimated: bool,
    /// Inter-tier net count override for the M3D area model.
    pub miv_override: Option<u32>,
}

impl GateSpec {
    pub fn arity(&self) -> usize {
        self.set_function.arity()
    }

    fn check_arity(&self, got: usize) -> Result<(), GateError> {
        if got != self.arity() {
            return Err(GateError::ArityMismatch {
                name: self.name.clone(),
                expected: self.arity(),
                got,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn eval_mask(&self, inputs: u8) -> bool {
        self.set_function.eval_mask(inputs)
    }

    #[inline]
    pub fn next_mask(&self, inputs: u8, prev: bool) -> bool {
        if self.set_function.eval_mask(inputs) {
            true
        } else if inputs == 0 {
            false
        } else {
            prev
        }
    }

    fn validate(&self) -> Result<(), GateError> {
        let bad = |reason: String| GateError::InvalidSpec {
            name: self.name.clone(),
            reason,
        };
        if self.counts.pmos == 0 || self.counts.nmos == 0 {
            return Err(bad("transistor counts must be >= 1".into()));
        }
        match (&self.weights, self.threshold) {
            (Some(w), Some(t)) => {
                if w.len() != self.arity() {
                    return Err(bad(format!(
                        "{} weights for arity {}",
                        w.len(),
                        self.arity()
                    )));
                }
                if w.contains(&0) || t == 0 {
                    return Err(bad("weights and threshold must be positive".into()));
                }
                for m in 0u8..(1 << self.arity()) {
                    if self.eval_mask(m) != (weighted_sum(w, m) >= t) {
                        return Err(bad(format!(
                            "products disagree with weights/threshold at inputs {m:#06b}"
                        )));
                    }
                }
            }
            (None, None) => {}
            _ => return Err(bad("weights and threshold must be given together".into())),
        }
        Ok(())
    }
}

fn bits_to_mask(inputs: &[bool]) -> u8 {
    inputs
        .iter()
        .enumerate()
        .fold(0u8, |m, (i, &b)| m | ((b as u8) << i))
}

/// 1 iff some product of the set function has all its literals asserted.
pub fn eval_set(spec: &GateSpec, inputs: &[bool]) -> Result<bool, GateError> {
    spec.check_arity(inputs.len())?;
    Ok(spec.eval_mask(bits_to_mask(inputs)))
}

/// One step of the state-holding gate.
pub fn next_output(spec: &GateSpec, inputs: &[bool], prev: bool) -> Result<bool, GateError> {
    spec.check_arity(inputs.len())?;
    Ok(spec.next_mask(bits_to_mask(inputs), prev))
}

pub fn transistor_counts(spec: &GateSpec) -> TransistorCounts {
    spec.counts
}

/// Approximate counts for gates without catalog data: two devices per literal,
/// four for the hold network and two for the output inverter, split evenly.
pub fn fallback_counts(set: &SetFunction) -> TransistorCounts {
    let total = 2 * set.literal_count() as u32 + 6;
    TransistorCounts {
        pmos: total.div_ceil(2),
        nmos: total / 2,
    }
}

/// Parses `THmn` and weighted `THmnWw...` names.
///
/// Weights may be written as one digit run (`TH54w322`) or as separate groups
/// (`TH54W3W2W2`). Unlisted trailing inputs weigh 1.
pub fn parse_threshold_name(name: &str) -> Result<(Vec<u32>, u32), GateError> {
    let bad = |reason: &str| GateError::MalformedName {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    let rest = name
        .strip_prefix("TH")
        .ok_or_else(|| bad("expected `TH` prefix"))?;
    let mut chars = rest.chars();
    let m = chars
        .next()
        .and_then(|c| c.to_digit(10))
        .ok_or_else(|| bad("missing threshold digit"))?;
    let n = chars
        .next()
        .and_then(|c| c.to_digit(10))
        .ok_or_else(|| bad("missing input-count digit"))? as usize;
    let tail: String = chars.collect();
    if m == 0 {
        return Err(bad("threshold must be >= 1"));
    }
    if n == 0 || n > MAX_ARITY {
        return Err(bad("input count must be in 1..=4"));
    }
    let mut listed: Vec<u32> = Vec::new();
    if !tail.is_empty() {
        if !tail.starts_with(['w', 'W']) {
            return Err(bad("unexpected suffix"));
        }
        let groups: Vec<&str> = tail[1..].split(['w', 'W']).collect();
        if groups.iter().any(|g| g.is_empty() || !g.bytes().all(|b| b.is_ascii_digit())) {
            return Err(bad("weights must be digits"));
        }
        if groups.len() == 1 {
            listed = groups[0].bytes().map(|b| (b - b'0') as u32).collect();
        } else {
            for g in groups {
                listed.push(g.parse().map_err(|_| bad("weight out of range"))?);
            }
        }
    }
    if listed.len() > n {
        return Err(bad("more weights than inputs"));
    }
    if listed.iter().any(|&w| w == 0 || w > m) {
        return Err(bad("weights must lie in 1..=m"));
    }
    let mut weights = listed;
    weights.resize(n, 1);
    let total: u32 = weights.iter().sum();
    if m > total {
        return Err(GateError::UnreachableThreshold {
            name: name.to_string(),
            threshold: m,
            total,
        });
    }
    Ok((weights, m))
}

fn spec_from_threshold_name(name: &str) -> Result<GateSpec, GateError> {
    let (weights, threshold) = parse_threshold_name(name)?;
    let set = SetFunction::from_threshold(&weights, threshold).map_err(|reason| {
        GateError::MalformedName {
            name: name.into(),
            reason,
        }
    })?;
    let counts = fallback_counts(&set);
    Ok(GateSpec {
        name: name.to_string(),
        set_function: set,
        weights: Some(weights),
        threshold: Some(threshold),
        counts,
        counts_estimated: true,
        miv_override: None,
    })
}

/// One catalog file entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub arity: usize,
    pub products: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u32>,
    pub pmos: u32,
    pub nmos: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mivs: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    gates: BTreeMap<String, CatalogEntry>,
}

/// Named gate specs. Lookups fall back to the `THmn` grammar for names that
/// are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCatalog {
    entries: BTreeMap<String, GateSpec>,
}

/// Gates every default catalog must hold.
pub const REQUIRED_GATES: [&str; 12] = [
    "TH12", "TH13", "TH22", "TH23", "TH33", "TH44", "TH24", "TH34", "TH24comp", "THand0",
    "TH54w322", "TH34w2",
];

/// The six gates characterized in the reference table.
pub const STUDIED_GATES: [&str; 6] = ["TH22", "TH24", "TH34", "TH54w322", "THand0", "TH24comp"];

const DEFAULT_CATALOG: &str = include_str!("../data/catalog.toml");

impl GateCatalog {
    pub fn from_toml(text: &str) -> Result<Self, GateError> {
        let file: CatalogFile =
            toml::from_str(text).map_err(|e| GateError::Catalog(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for (name, e) in file.gates {
            let spec = spec_from_entry(&name, &e)?;
            entries.insert(name, spec);
        }
        Ok(Self { entries })
    }

    pub fn to_toml(&self) -> String {
        let gates = self
            .entries
            .iter()
            .map(|(n, s)| {
                (
                    n.clone(),
                    CatalogEntry {
                        arity: s.arity(),
                        products: s.set_function.to_string().split('+').map(String::from).collect(),
                        weights: s.weights.clone(),
                        threshold: s.threshold,
                        pmos: s.counts.pmos,
                        nmos: s.counts.nmos,
                        mivs: s.miv_override,
                    },
                )
            })
            .collect();
        toml::to_string(&CatalogFile { gates }).expect("catalog serializes")
    }

    /// The bundled catalog, parsed once.
    pub fn builtin() -> &'static GateCatalog {
        static CAT: OnceLock<GateCatalog> = OnceLock::new();
        CAT.get_or_init(|| GateCatalog::from_toml(DEFAULT_CATALOG).expect("bundled catalog is valid"))
    }

    pub fn get(&self, name: &str) -> Option<&GateSpec> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn insert(&mut self, spec: GateSpec) {
        self.entries.insert(spec.name.clone(), spec);
    }

    /// Adds every entry of `other`, replacing same-named gates.
    pub fn extend(&mut self, other: GateCatalog) {
        self.entries.extend(other.entries);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GateSpec> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Catalog lookup, then the threshold-name grammar.
    pub fn spec(&self, name: &str) -> Result<GateSpec, GateError> {
        if let Some(s) = self.entries.get(name) {
            return Ok(s.clone());
        }
        if !name.starts_with("TH") {
            return Err(GateError::UnknownGate(name.to_string()));
        }
        spec_from_threshold_name(name)
    }
}

fn spec_from_entry(name: &str, e: &CatalogEntry) -> Result<GateSpec, GateError> {
    let invalid = |reason: String| GateError::InvalidSpec {
        name: name.to_string(),
        reason,
    };
    let masks = e
        .products
        .iter()
        .map(|p| parse_product(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(invalid)?;
    let set = SetFunction::from_products(e.arity, &masks).map_err(invalid)?;
    let spec = GateSpec {
        name: name.to_string(),
        set_function: set,
        weights: e.weights.clone(),
        threshold: e.threshold,
        counts: TransistorCounts {
            pmos: e.pmos,
            nmos: e.nmos,
        },
        counts_estimated: false,
        miv_override: e.mivs,
    };
    spec.validate()?;
    Ok(spec)
}

/// Resolves a gate name against the bundled catalog.
pub fn spec_from_name(name: &str) -> Result<GateSpec, GateError> {
    GateCatalog::builtin().spec(name)
}
