//! Acyclic deterministic automata over {0,1} with one accept and one reject
//! terminal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum State {
    Branch { on0: usize, on1: usize },
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adfsa {
    n: usize,
    states: Vec<State>,
    start: usize,
    /// Longest path (in transitions) from each state to a terminal.
    height: Vec<usize>,
}

impl Adfsa {
    pub fn new(n: usize, states: Vec<State>, start: usize) -> Result<Self> {
        let len = states.len();
        if start >= len {
            return Err(Error::InvalidConcept(format!("start state {start} out of range")));
        }
        let accepts = states.iter().filter(|s| **s == State::Accept).count();
        let rejects = states.iter().filter(|s| **s == State::Reject).count();
        if accepts != 1 || rejects != 1 {
            return Err(Error::InvalidConcept(format!(
                "automaton needs exactly one accept and one reject state, found {accepts} and {rejects}"
            )));
        }
        for (i, s) in states.iter().enumerate() {
            if let State::Branch { on0, on1 } = *s {
                if on0 >= len || on1 >= len {
                    return Err(Error::InvalidConcept(format!("state {i} has a dangling transition")));
                }
            }
        }
        let height = heights(&states)?;
        if height[start] > n {
            return Err(Error::InvalidConcept(format!(
                "a path from the start takes {} transitions, more than n = {n}",
                height[start]
            )));
        }
        Ok(Adfsa {
            n,
            states,
            start,
            height,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, i: usize) -> State {
        self.states[i]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn height(&self, state: usize) -> usize {
        self.height[state]
    }

    pub fn accept_state(&self) -> usize {
        self.states.iter().position(|s| *s == State::Accept).unwrap()
    }

    pub fn reject_state(&self) -> usize {
        self.states.iter().position(|s| *s == State::Reject).unwrap()
    }

    pub fn branch_count(&self) -> usize {
        self.states.iter().filter(|s| matches!(s, State::Branch { .. })).count()
    }

    pub fn run(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() > self.n {
            return Err(Error::StringTooLong {
                len: bits.len(),
                n: self.n,
            });
        }
        let mut q = self.start;
        let mut pos = 0;
        loop {
            match self.states[q] {
                State::Accept => return Ok(true),
                State::Reject => return Ok(false),
                State::Branch { on0, on1 } => {
                    let Some(&b) = bits.get(pos) else {
                        return Err(Error::Exhausted { state: q, read: pos });
                    };
                    q = if b { on1 } else { on0 };
                    pos += 1;
                }
            }
        }
    }

    /// Output of the sub-automaton rooted at `state` reading `bits` from
    /// `offset`; `None` if the string runs out first.
    pub fn run_from(&self, state: usize, bits: &[bool], offset: usize) -> Option<bool> {
        let mut q = state;
        let mut pos = offset;
        loop {
            match self.states[q] {
                State::Accept => return Some(true),
                State::Reject => return Some(false),
                State::Branch { on0, on1 } => {
                    let b = *bits.get(pos)?;
                    q = if b { on1 } else { on0 };
                    pos += 1;
                }
            }
        }
    }

    /// Position at which the run from the start reads its bit in `state`, if
    /// the run passes through it.
    pub fn arrival_offset(&self, bits: &[bool], state: usize) -> Option<usize> {
        let mut q = self.start;
        let mut pos = 0;
        loop {
            if q == state {
                return Some(pos);
            }
            match self.states[q] {
                State::Branch { on0, on1 } => {
                    let b = *bits.get(pos)?;
                    q = if b { on1 } else { on0 };
                    pos += 1;
                }
                _ => return None,
            }
        }
    }
}

fn heights(states: &[State]) -> Result<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut mark = vec![0u8; states.len()];
    let mut height = vec![0usize; states.len()];
    for s in 0..states.len() {
        if mark[s] != 0 {
            continue;
        }
        let mut stack = vec![(s, false)];
        while let Some((q, expanded)) = stack.pop() {
            let succ = match states[q] {
                State::Branch { on0, on1 } => Some((on0, on1)),
                _ => None,
            };
            if expanded {
                height[q] = succ.map_or(0, |(a, b)| 1 + height[a].max(height[b]));
                mark[q] = 2;
                continue;
            }
            if mark[q] == 2 {
                continue;
            }
            mark[q] = 1;
            stack.push((q, true));
            if let Some((a, b)) = succ {
                for c in [b, a] {
                    match mark[c] {
                        1 => return Err(Error::InvalidConcept(format!("transition cycle through state {c}"))),
                        0 => stack.push((c, false)),
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(height)
}
