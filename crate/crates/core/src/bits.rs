//! Packed bit columns used for column-wise scoring of candidate hypotheses.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitColumn {
    words: Vec<u64>,
    len: usize,
}

impl BitColumn {
    pub fn zeros(len: usize) -> Self {
        BitColumn {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut c = BitColumn {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        c.mask_tail();
        c
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut c = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                c.set(i);
            }
        }
        c
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.len, other.len);
        let mut c = BitColumn {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            len: self.len,
        };
        c.mask_tail();
        c
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn and_not(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn not(&self) -> Self {
        let mut c = BitColumn {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        c.mask_tail();
        c
    }

    /// Popcount of `(self op other) ^ target` without allocating.
    pub fn count_mismatch(&self, other: &Self, target: &Self, op: impl Fn(u64, u64) -> u64) -> usize {
        let rem = self.len % 64;
        let last = self.words.len().saturating_sub(1);
        let mut total = 0usize;
        for (i, ((&a, &b), &t)) in self.words.iter().zip(&other.words).zip(&target.words).enumerate() {
            let mut w = op(a, b) ^ t;
            if i == last && rem != 0 {
                w &= (1u64 << rem) - 1;
            }
            total += w.count_ones() as usize;
        }
        total
    }
}

/// Three-valued column: `known` marks definite entries, `value` holds them
/// (zero wherever unknown).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriColumn {
    pub value: BitColumn,
    pub known: BitColumn,
}

impl TriColumn {
    pub fn definite(value: BitColumn) -> Self {
        let known = BitColumn::ones(value.len());
        TriColumn { value, known }
    }

    pub fn unknown(len: usize) -> Self {
        TriColumn {
            value: BitColumn::zeros(len),
            known: BitColumn::zeros(len),
        }
    }

    pub fn is_definite(&self) -> bool {
        self.known.count_ones() == self.known.len()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.known.get(i).then(|| self.value.get(i))
    }

    pub fn not(&self) -> Self {
        TriColumn {
            value: self.value.not().and(&self.known),
            known: self.known.clone(),
        }
    }

    /// Kleene conjunction: a definite 0 on either side decides the result.
    pub fn and(&self, other: &Self) -> Self {
        let zero_a = self.known.and_not(&self.value);
        let zero_b = other.known.and_not(&other.value);
        let known = self.known.and(&other.known).or(&zero_a).or(&zero_b);
        let value = self.value.and(&other.value).and(&known);
        TriColumn { value, known }
    }

    /// Kleene disjunction: a definite 1 on either side decides the result.
    pub fn or(&self, other: &Self) -> Self {
        let known = self.known.and(&other.known).or(&self.value).or(&other.value);
        let value = self.value.or(&other.value);
        TriColumn { value, known }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_clear() {
        let c = BitColumn::zeros(70).not();
        assert_eq!(c.count_ones(), 70);
        assert_eq!(BitColumn::ones(130).count_ones(), 130);
    }

    #[test]
    fn mismatch_count_matches_materialized() {
        let a = BitColumn::from_fn(100, |i| i % 3 == 0);
        let b = BitColumn::from_fn(100, |i| i % 5 == 0);
        let t = BitColumn::from_fn(100, |i| i % 7 == 0);
        let direct = a.or(&b).xor(&t).count_ones();
        assert_eq!(a.count_mismatch(&b, &t, |x, y| x | y), direct);
    }

    #[test]
    fn kleene_tables() {
        // entries: 0, 1, unknown
        let mk = |v: [Option<bool>; 3]| TriColumn {
            value: BitColumn::from_fn(3, |i| v[i] == Some(true)),
            known: BitColumn::from_fn(3, |i| v[i].is_some()),
        };
        let all = [Some(false), Some(true), None];
        for &a in &all {
            for &b in &all {
                let ca = mk([a, a, a]);
                let cb = mk([b, b, b]);
                let and = ca.and(&cb).get(0);
                let or = ca.or(&cb).get(0);
                let want_and = match (a, b) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                };
                let want_or = match (a, b) {
                    (Some(true), _) | (_, Some(true)) => Some(true),
                    (Some(false), Some(false)) => Some(false),
                    _ => None,
                };
                assert_eq!(and, want_and, "{a:?} and {b:?}");
                assert_eq!(or, want_or, "{a:?} or {b:?}");
            }
        }
    }
}
