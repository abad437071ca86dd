//! LZ76 complexity: the number of phrases in the exhaustive-history
//! left-to-right parsing, where each phrase is the shortest prefix of the
//! remaining sequence that does not occur as a substring of everything
//! scanned before the phrase's last symbol. The final phrase is counted even
//! when the sequence ends while it is still reproducible.

use super::{MetricsError, SymbolSequence};

const NO_TRANS: u32 = u32::MAX;

/// Suffix automaton over the full sequence, with the earliest end position
/// (`first`) of each state's substring class. A phrase starting at `i` is
/// extended while the matched prefix already occurs somewhere ending before
/// our own occurrence, which is exactly `first(state) < i + len - 1`.
struct Sam {
    k: usize,
    len: Vec<u32>,
    link: Vec<i32>,
    first: Vec<u32>,
    trans: Vec<u32>,
    last: usize,
}

impl Sam {
    fn new(k: usize, capacity: usize) -> Self {
        let cap = 2 * capacity + 2;
        let mut sam = Sam {
            k,
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            first: Vec::with_capacity(cap),
            trans: Vec::with_capacity(cap * k),
            last: 0,
        };
        sam.push_state(0, -1, 0);
        sam
    }

    fn push_state(&mut self, len: u32, link: i32, first: u32) -> usize {
        self.len.push(len);
        self.link.push(link);
        self.first.push(first);
        self.trans.resize(self.trans.len() + self.k, NO_TRANS);
        self.len.len() - 1
    }

    #[inline]
    fn t(&self, state: usize, c: usize) -> u32 {
        self.trans[state * self.k + c]
    }

    #[inline]
    fn set_t(&mut self, state: usize, c: usize, to: u32) {
        self.trans[state * self.k + c] = to;
    }

    fn extend(&mut self, c: usize, pos: usize) {
        let cur = self.push_state(self.len[self.last] + 1, -1, pos as u32);
        let mut p = self.last as i32;
        while p >= 0 && self.t(p as usize, c) == NO_TRANS {
            self.set_t(p as usize, c, cur as u32);
            p = self.link[p as usize];
        }
        if p < 0 {
            self.link[cur] = 0;
        } else {
            let q = self.t(p as usize, c) as usize;
            if self.len[p as usize] + 1 == self.len[q] {
                self.link[cur] = q as i32;
            } else {
                let clone = self.push_state(
                    self.len[p as usize] + 1,
                    self.link[q],
                    self.first[q],
                );
                for ch in 0..self.k {
                    let tq = self.t(q, ch);
                    self.set_t(clone, ch, tq);
                }
                while p >= 0 && self.t(p as usize, c) == q as u32 {
                    self.set_t(p as usize, c, clone as u32);
                    p = self.link[p as usize];
                }
                self.link[q] = clone as i32;
                self.link[cur] = clone as i32;
            }
        }
        self.last = cur;
    }
}

/// LZ76 production count of the sequence.
pub fn lz_complexity(seq: &SymbolSequence) -> Result<usize, MetricsError> {
    if seq.is_empty() {
        return Err(MetricsError::EmptySequence);
    }
    let s = seq.symbols();
    let n = s.len();
    let k = seq.alphabet();

    let mut sam = Sam::new(k, n);
    for (pos, &c) in s.iter().enumerate() {
        sam.extend(c as usize, pos);
    }

    let mut phrases = 0usize;
    let mut i = 0usize;
    while i < n {
        let mut v = 0usize;
        let mut l = 0usize;
        while i + l < n {
            let next = sam.t(v, s[i + l] as usize) as usize;
            let own_end = i + l;
            l += 1;
            if sam.first[next] as usize == own_end {
                // We are the first occurrence: phrase complete at length l.
                break;
            }
            debug_assert!((sam.first[next] as usize) < own_end);
            v = next;
        }
        phrases += 1;
        i += l;
    }
    Ok(phrases)
}

/// `c(n) * log_k(n) / n`; tends to 1 for i.i.d. uniform sequences.
pub fn normalized_lz(seq: &SymbolSequence) -> Result<f64, MetricsError> {
    let n = seq.len();
    if n < 2 {
        return Err(MetricsError::TooShort { n, min: 2 });
    }
    let c = lz_complexity(seq)? as f64;
    let log_k_n = (n as f64).ln() / (seq.alphabet() as f64).ln();
    Ok(c * log_k_n / n as f64)
}
