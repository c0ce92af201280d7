//! Graded dimension tables between generator pairs: the object both
//! pipelines must agree on, with JSON and TSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::simplicial::Face;

/// Dimensions of graded Hom/Ext between ordered generator pairs, keyed by
/// the subsets labeling the generators. Only nonzero dimensions are stored.
///
/// Serializes as a JSON object keyed by `"{src}->{dst}"` with the subsets
/// in brace notation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtTable {
    pub entries: BTreeMap<(Face, Face), BTreeMap<i64, usize>>,
}

impl Serialize for ExtTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, &BTreeMap<i64, usize>> = self
            .entries
            .iter()
            .map(|((a, b), dims)| (format!("{a}->{b}"), dims))
            .collect();
        keyed.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExtTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let keyed: BTreeMap<String, BTreeMap<i64, usize>> =
            BTreeMap::deserialize(deserializer)?;
        let mut entries = BTreeMap::new();
        for (key, dims) in keyed {
            let (a, b) = key
                .split_once("->")
                .ok_or_else(|| serde::de::Error::custom(format!("bad pair key {key}")))?;
            let parse = |text: &str| -> Result<Face, D::Error> {
                let inner = text
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| serde::de::Error::custom(format!("bad subset {text}")))?;
                if inner.is_empty() {
                    return Ok(Face::EMPTY);
                }
                let verts: Vec<usize> = inner
                    .split(',')
                    .map(|v| {
                        v.parse::<usize>()
                            .map_err(|_| serde::de::Error::custom(format!("bad vertex {v}")))
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Face::from_verts(&verts))
            };
            entries.insert((parse(a)?, parse(b)?), dims);
        }
        Ok(ExtTable { entries })
    }
}

impl ExtTable {
    pub fn insert(&mut self, src: Face, dst: Face, dims: BTreeMap<i64, usize>) {
        let nonzero: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        self.entries.insert((src, dst), nonzero);
    }

    pub fn get(&self, src: Face, dst: Face) -> Option<&BTreeMap<i64, usize>> {
        self.entries.get(&(src, dst))
    }

    /// First pair on which the two tables disagree, if any.
    pub fn first_difference<'a>(&'a self, other: &'a ExtTable) -> Option<(Face, Face)> {
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).collect();
        for &&(a, b) in keys.iter() {
            let lhs = self.entries.get(&(a, b));
            let rhs = other.entries.get(&(a, b));
            let empty = BTreeMap::new();
            if lhs.unwrap_or(&empty) != rhs.unwrap_or(&empty) {
                return Some((a, b));
            }
        }
        None
    }

    /// Tab-separated rendering: one row per pair with nonzero entries.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("src\tdst\tdims\n");
        for ((a, b), dims) in &self.entries {
            if dims.is_empty() {
                continue;
            }
            let cell: Vec<String> = dims.iter().map(|(d, k)| format!("{d}:{k}")).collect();
            let _ = writeln!(out, "{a}\t{b}\t{}", cell.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dims_are_dropped() {
        let mut t = ExtTable::default();
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(1, 0);
        t.insert(Face::EMPTY, Face::singleton(1), dims);
        assert_eq!(
            t.get(Face::EMPTY, Face::singleton(1)).unwrap().len(),
            1
        );
    }

    #[test]
    fn json_round_trip() {
        let mut t = ExtTable::default();
        t.insert(Face::from_verts(&[1, 2]), Face::EMPTY, [(1, 1)].into_iter().collect());
        t.insert(Face::EMPTY, Face::singleton(2), [(0, 1)].into_iter().collect());
        let text = serde_json::to_string(&t).unwrap();
        let back: ExtTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn difference_detection() {
        let mut a = ExtTable::default();
        let mut b = ExtTable::default();
        a.insert(Face::EMPTY, Face::EMPTY, [(0, 1)].into_iter().collect());
        b.insert(Face::EMPTY, Face::EMPTY, [(0, 1)].into_iter().collect());
        assert!(a.first_difference(&b).is_none());
        b.insert(Face::EMPTY, Face::singleton(1), [(1, 1)].into_iter().collect());
        assert_eq!(a.first_difference(&b), Some((Face::EMPTY, Face::singleton(1))));
    }
}
