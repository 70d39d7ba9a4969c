// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

/// One logical bit on two rails `(rail1, rail0)`.
///
/// | rail1 | rail0 | state   |
/// |-------|-------|---------|
/// | 0     | 0     | NULL    |
/// | 0     | 1     | DATA0   |
/// | 1     | 0     | DATA1   |
/// | 1     | 1     | INVALID |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DualRail {
    Null,
    Data0,
    Data1,
    Invalid,
}

impl DualRail {
    pub fn from_rails(rail1: bool, rail0: bool) -> Self {
        match (rail1, rail0) {
            (false, false) => DualRail::Null,
            (false, true) => DualRail::Data0,
            (true, false) => DualRail::Data1,
            (true, true) => DualRail::Invalid,
        }
    }

    pub fn data(bit: bool) -> Self {
        if bit {
            DualRail::Data1
        } else {
            DualRail::Data0
        }
    }

    /// `(rail1, rail0)`.
    pub fn rails(self) -> (bool, bool) {
        match self {
            DualRail::Null => (false, false),
            DualRail::Data0 => (false, true),
            DualRail::Data1 => (true, false),
            DualRail::Invalid => (true, true),
        }
    }

    pub fn is_data(self) -> bool {
        matches!(self, DualRail::Data0 | DualRail::Data1)
    }

    pub fn is_null(self) -> bool {
        self == DualRail::Null
    }

    /// The carried bit, if this is DATA.
    pub fn value(self) -> Option<bool> {
        match self {
            DualRail::Data0 => Some(false),
            DualRail::Data1 => Some(true),
            _ => None,
        }
    }
}

impl fmt::Display for DualRail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualRail::Null => "NULL",
            DualRail::Data0 => "DATA0",
            DualRail::Data1 => "DATA1",
            DualRail::Invalid => "INVALID",
        })
    }
}

/// Packs DATA outputs (LSB first) into an integer; `None` if any bit is not DATA.
pub fn word_value(bits: &[DualRail]) -> Option<u64> {
    bits.iter().enumerate().try_fold(0u64, |acc, (i, b)| {
        b.value().map(|v| acc | ((v as u64) << i))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rails_round_trip() {
        for r1 in [false, true] {
            for r0 in [false, true] {
                assert_eq!(DualRail::from_rails(r1, r0).rails(), (r1, r0));
            }
        }
        assert_eq!(DualRail::from_rails(false, true), DualRail::Data0);
        assert_eq!(DualRail::from_rails(true, false), DualRail::Data1);
        assert_eq!(DualRail::data(true).value(), Some(true));
        assert_eq!(DualRail::Invalid.value(), None);
    }

    #[test]
    fn words() {
        let w = [DualRail::Data1, DualRail::Data0, DualRail::Data1];
        assert_eq!(word_value(&w), Some(5));
        assert_eq!(word_value(&[DualRail::Data1, DualRail::Null]), None);
        assert_eq!(word_value(&[]), Some(0));
    }
}
