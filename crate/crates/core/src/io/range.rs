//! Integer range parameters such as `1,2,..,10,20,..,100`.

use crate::error::{invalid, Result};

/// Strictly increasing positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntRange(Vec<usize>);

impl IntRange {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn into_values(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Expands a comma list in which `..` continues the step between the two
/// preceding values up to the following value, which must be hit exactly.
pub fn parse_int_range(text: &str) -> Result<IntRange> {
    let bad = |msg: String| invalid(format!("range '{text}': {msg}"));
    let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
    let mut out: Vec<i64> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i];
        if t == ".." {
            let [a, b] = match out.as_slice() {
                [.., a, b] => [*a, *b],
                _ => return Err(bad("'..' needs two preceding values".into())),
            };
            let end: i64 = match tokens.get(i + 1) {
                Some(&e) if e != ".." => e.parse().map_err(|_| bad(format!("'{e}' is not an integer")))?,
                _ => return Err(bad("'..' needs an end value".into())),
            };
            let step = b - a;
            if step <= 0 {
                return Err(bad(format!("step {step} before '..' is not positive")));
            }
            if end <= b || (end - b) % step != 0 {
                return Err(bad(format!("{end} is not reached from {b} in steps of {step}")));
            }
            out.extend((1..=(end - b) / step).map(|s| b + s * step));
            i += 2;
            continue;
        }
        out.push(t.parse().map_err(|_| bad(format!("'{t}' is not an integer")))?);
        i += 1;
    }
    out.dedup();
    if let Some(&v) = out.iter().find(|&&v| v < 1) {
        return Err(bad(format!("{v} is not positive")));
    }
    if let Some(w) = out.windows(2).find(|w| w[0] >= w[1]) {
        return Err(bad(format!("{} follows {}; values must increase", w[1], w[0])));
    }
    Ok(IntRange(out.into_iter().map(|v| v as usize).collect()))
}
