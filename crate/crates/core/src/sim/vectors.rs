// SPDX-License-Identifier: Apache-2.0

//! Vector files: one input word per line, decimal (`63`) or binary
//! (`0b00111111`). `#` starts a comment; blank lines are skipped. Bit `i` of
//! a word drives input port `i`.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::netlist::text::tokens;

pub fn parse_vectors(text: &str, width: usize, source_name: &str) -> Result<Vec<u64>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        let Some(&(col, tok)) = toks.first() else {
            continue;
        };
        let err = |m: String| ParseError::new(source_name, ln + 1, col, m);
        if toks.len() > 1 {
            return Err(ParseError::new(source_name, ln + 1, toks[1].0, "one word per line"));
        }
        let v = match tok.strip_prefix("0b") {
            Some(bits) => {
                let bits = bits.replace('_', "");
                u64::from_str_radix(&bits, 2).map_err(|e| err(format!("bad binary word: {e}")))?
            }
            None => tok.parse::<u64>().map_err(|e| err(format!("bad decimal word: {e}")))?,
        };
        if width < 64 && v >> width != 0 {
            return Err(err(format!("word {v} does not fit in {width} bits")));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn format_vectors(words: &[u64], width: usize) -> String {
    let mut s = String::new();
    for w in words {
        let _ = writeln!(s, "0b{:0width$b}", w, width = width);
    }
    s
}
