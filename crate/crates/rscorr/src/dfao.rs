//! Finite automata with output over the binary alphabet.
//!
//! A [`Dfao`] reads the binary expansion of `n` most significant bit first
//! and emits the output attached to the final state. The four-state
//! automaton from [`rudin_shapiro_dfao`] tracks (previous bit, parity of
//! `11` blocks so far) and reproduces `(-1)^r11(n)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfaoError {
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("transition and output tables have different lengths")]
    LengthMismatch,
    #[error("state index {0} out of range")]
    BadState(usize),
    #[error("output {0} is not +1 or -1")]
    BadOutput(i32),
    #[error("empty pattern word")]
    EmptyWord,
}

/// A word over `{0, 1}`, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryWord {
    bits: Vec<u8>,
}

impl BinaryWord {
    /// # Panics
    /// Panics when any entry is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        BinaryWord { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Numeric value of the word (empty word reads as 0).
    ///
    /// # Panics
    /// Panics when the word is longer than 64 bits.
    pub fn value(&self) -> u64 {
        assert!(self.bits.len() <= 64, "word too long for u64");
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// Binary expansion of `n`, most significant bit first, no leading zeros.
/// `n = 0` yields the one-letter word `0`.
pub fn to_binary(n: u64) -> BinaryWord {
    if n == 0 {
        return BinaryWord { bits: vec![0] };
    }
    let len = 64 - n.leading_zeros();
    let bits = (0..len).rev().map(|i| ((n >> i) & 1) as u8).collect();
    BinaryWord { bits }
}

/// Deterministic finite automaton with output: a total transition table
/// over the binary alphabet plus a `+1`/`-1` output per state.
#[derive(Debug, Clone)]
pub struct Dfao {
    initial: usize,
    transitions: Vec<[usize; 2]>,
    outputs: Vec<i32>,
}

impl Dfao {
    pub fn new(
        initial: usize,
        transitions: Vec<[usize; 2]>,
        outputs: Vec<i32>,
    ) -> Result<Self, DfaoError> {
        let states = transitions.len();
        if states == 0 {
            return Err(DfaoError::NoStates);
        }
        if outputs.len() != states {
            return Err(DfaoError::LengthMismatch);
        }
        if initial >= states {
            return Err(DfaoError::BadState(initial));
        }
        for row in &transitions {
            for &t in row {
                if t >= states {
                    return Err(DfaoError::BadState(t));
                }
            }
        }
        for &o in &outputs {
            if o != 1 && o != -1 {
                return Err(DfaoError::BadOutput(o));
            }
        }
        Ok(Dfao {
            initial,
            transitions,
            outputs,
        })
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// Run the automaton over a word and return the final state's output.
    pub fn eval_word(&self, w: &BinaryWord) -> i32 {
        let mut state = self.initial;
        for &b in w.bits() {
            state = self.transitions[state][b as usize];
        }
        self.outputs[state]
    }
}

/// The four-state automaton computing `(-1)^r11(n)`.
///
/// States: (last bit, block parity) as q0 = (0, even), q1 = (1, even),
/// q2 = (1, odd), q3 = (0, odd); outputs +1, +1, -1, -1.
pub fn rudin_shapiro_dfao() -> Dfao {
    Dfao::new(
        0,
        vec![[0, 1], [0, 2], [3, 1], [3, 2]],
        vec![1, 1, -1, -1],
    )
    .expect("fixed table is valid")
}

/// Evaluate the automaton on the binary expansion of `n`.
pub fn dfao_eval(a: &Dfao, n: u64) -> i32 {
    a.eval_word(&to_binary(n))
}

/// Count (overlapping) occurrences of `w` in the binary expansion of `n`.
///
/// With `leading_zero_context`, the expansion is padded on the left with
/// `w.len() - 1` zeros, which exposes every occurrence that overlaps the
/// implicit run of leading zeros.
pub fn count_word_occurrences(
    w: &BinaryWord,
    n: u64,
    leading_zero_context: bool,
) -> Result<u64, DfaoError> {
    if w.is_empty() {
        return Err(DfaoError::EmptyWord);
    }
    let mut text = Vec::new();
    if leading_zero_context {
        text.resize(w.len() - 1, 0u8);
    }
    text.extend_from_slice(to_binary(n).bits());
    if text.len() < w.len() {
        return Ok(0);
    }
    let mut count = 0u64;
    for window in text.windows(w.len()) {
        if window == w.bits() {
            count += 1;
        }
    }
    Ok(count)
}
