//! Perfect matchings on the support of a square matrix, kept
//! lexicographically smallest while edges are deleted.
//!
//! Rows and columns are stored as bitsets. A matching is lexicographically
//! smallest when no row `i` can switch to a smaller column `c` through an
//! alternating cycle that only touches rows after `i`.

const NONE: usize = usize::MAX;

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, k: usize) {
        self.words[k / 64] |= 1 << (k % 64);
    }

    fn remove(&mut self, k: usize) {
        self.words[k / 64] &= !(1 << (k % 64));
    }

    /// Makes the set exactly `{0, 1, ..., k - 1}`.
    fn reset_to_prefix(&mut self, k: usize) {
        for (w, word) in self.words.iter_mut().enumerate() {
            let lo = w * 64;
            *word = if k >= lo + 64 {
                !0
            } else if k <= lo {
                0
            } else {
                (1u64 << (k - lo)) - 1
            };
        }
    }

    fn contains(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    /// Smallest element `>= from` that is not in `exclude`.
    fn next_without(&self, from: usize, exclude: &BitSet) -> Option<usize> {
        self.next_masked(from, |w| !exclude.words[w])
    }

    /// Smallest element `>= from`.
    fn next(&self, from: usize) -> Option<usize> {
        self.next_masked(from, |_| !0)
    }

    fn next_masked(&self, from: usize, mask: impl Fn(usize) -> u64) -> Option<usize> {
        let mut w = from / 64;
        if w >= self.words.len() {
            return None;
        }
        let mut bits = self.words[w] & mask(w) & (!0u64 << (from % 64));
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            bits = self.words[w] & mask(w);
        }
    }
}

pub(crate) struct LexMatching {
    n: usize,
    row_adj: Vec<BitSet>,
    col_adj: Vec<BitSet>,
    col_of_row: Vec<usize>,
    row_of_col: Vec<usize>,
    /// Rows before this index hold the lexicographically smallest choice.
    settled: usize,
    // scratch space reused across calls
    seen: BitSet,
    blocked: BitSet,
    queue: Vec<usize>,
    next_col: Vec<usize>,
}

impl LexMatching {
    pub fn new(support: &[Vec<bool>]) -> Self {
        let n = support.len();
        let mut row_adj = vec![BitSet::new(n); n];
        let mut col_adj = vec![BitSet::new(n); n];
        for (r, row) in support.iter().enumerate() {
            for (c, &on) in row.iter().enumerate() {
                if on {
                    row_adj[r].insert(c);
                    col_adj[c].insert(r);
                }
            }
        }
        Self {
            n,
            row_adj,
            col_adj,
            col_of_row: vec![NONE; n],
            row_of_col: vec![NONE; n],
            settled: 0,
            seen: BitSet::new(n),
            blocked: BitSet::new(n),
            queue: Vec::with_capacity(n),
            next_col: vec![NONE; n],
        }
    }

    /// Deletes an edge; if it was matched the row becomes free.
    pub fn remove_edge(&mut self, r: usize, c: usize) {
        self.row_adj[r].remove(c);
        self.col_adj[c].remove(r);
        if self.col_of_row[r] == c {
            self.col_of_row[r] = NONE;
            self.row_of_col[c] = NONE;
            self.settled = self.settled.min(r);
        }
    }

    /// Lexicographically smallest perfect matching of the current support,
    /// as the column of each row; `None` if no perfect matching exists.
    pub fn smallest(&mut self) -> Option<Vec<usize>> {
        let before = self.col_of_row[..self.settled].to_vec();
        for row in 0..self.n {
            if self.col_of_row[row] == NONE {
                let mut seen = std::mem::replace(&mut self.seen, BitSet::new(0));
                seen.reset_to_prefix(0);
                let found = self.augment(row, &mut seen);
                self.seen = seen;
                if !found {
                    return None;
                }
            }
        }
        // rows whose column moved lose their settled status
        if let Some(first) = (0..before.len()).find(|&r| before[r] != self.col_of_row[r]) {
            self.settled = first;
        }
        self.canonicalize();
        Some(self.col_of_row.clone())
    }

    fn augment(&mut self, row: usize, seen: &mut BitSet) -> bool {
        let mut from = 0;
        while let Some(c) = self.row_adj[row].next_without(from, seen) {
            seen.insert(c);
            let owner = self.row_of_col[c];
            if owner == NONE || self.augment(owner, seen) {
                self.row_of_col[c] = row;
                self.col_of_row[row] = c;
                return true;
            }
            from = c + 1;
        }
        false
    }

    fn canonicalize(&mut self) {
        let n = self.n;
        for i in self.settled..n {
            let t = self.col_of_row[i];
            if self.row_adj[i].next(0).is_none_or(|c| c >= t) {
                continue;
            }
            // rows > i from which an alternating path reaches the column t;
            // `blocked` holds rows <= i and rows already reached
            self.blocked.reset_to_prefix(i + 1);
            self.queue.clear();
            self.queue.push(t);
            let mut head = 0;
            while head < self.queue.len() {
                let col = self.queue[head];
                head += 1;
                let mut from = 0;
                while let Some(r) = self.col_adj[col].next_without(from, &self.blocked) {
                    self.blocked.insert(r);
                    self.next_col[r] = col;
                    self.queue.push(self.col_of_row[r]);
                    from = r + 1;
                }
            }
            let mut better = None;
            let mut from = 0;
            while let Some(c) = self.row_adj[i].next(from) {
                if c >= t {
                    break;
                }
                let r = self.row_of_col[c];
                if r > i && self.blocked.contains(r) {
                    better = Some(c);
                    break;
                }
                from = c + 1;
            }
            if let Some(c) = better {
                let mut row = self.row_of_col[c];
                self.col_of_row[i] = c;
                self.row_of_col[c] = i;
                loop {
                    let col = self.next_col[row];
                    let displaced = self.row_of_col[col];
                    self.col_of_row[row] = col;
                    self.row_of_col[col] = row;
                    if col == t {
                        break;
                    }
                    row = displaced;
                }
            }
        }
        self.settled = n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support(rows: &[&str]) -> Vec<Vec<bool>> {
        rows.iter().map(|r| r.bytes().map(|b| b == b'1').collect()).collect()
    }

    fn brute_force_smallest(s: &[Vec<bool>]) -> Option<Vec<usize>> {
        fn go(s: &[Vec<bool>], row: usize, used: &mut Vec<bool>, acc: &mut Vec<usize>) -> bool {
            if row == s.len() {
                return true;
            }
            for c in 0..s.len() {
                if s[row][c] && !used[c] {
                    used[c] = true;
                    acc.push(c);
                    if go(s, row + 1, used, acc) {
                        return true;
                    }
                    acc.pop();
                    used[c] = false;
                }
            }
            false
        }
        let mut acc = Vec::new();
        go(s, 0, &mut vec![false; s.len()], &mut acc).then_some(acc)
    }

    #[test]
    fn finds_smallest_matching() {
        let s = support(&["110", "101", "011"]);
        assert_eq!(LexMatching::new(&s).smallest(), Some(vec![0, 2, 1]));
        let s = support(&["11", "10"]);
        assert_eq!(LexMatching::new(&s).smallest(), Some(vec![1, 0]));
        let s = support(&["11", "00"]);
        assert_eq!(LexMatching::new(&s).smallest(), None);
    }

    #[test]
    fn stays_smallest_under_deletions() {
        // every subset-support of a dense 5x5 pattern reached by deleting
        // edges one at a time in a fixed pseudo-random order
        let n = 5;
        let mut s = vec![vec![true; n]; n];
        let mut m = LexMatching::new(&s);
        let mut state = 12345u64;
        for _ in 0..20 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let (r, c) = ((state >> 33) as usize % n, (state >> 40) as usize % n);
            if !s[r][c] {
                continue;
            }
            s[r][c] = false;
            m.remove_edge(r, c);
            let expected = brute_force_smallest(&s);
            let got = m.smallest();
            assert_eq!(got, expected);
            if got.is_none() {
                break;
            }
        }
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let n = 130;
        let mut s = vec![vec![false; n]; n];
        for (r, row) in s.iter_mut().enumerate() {
            row[(r + 65) % n] = true;
            row[(r + 1) % n] = true;
        }
        let got = LexMatching::new(&s).smallest().unwrap();
        assert_eq!(got, brute_force_smallest(&s).unwrap());
    }
}
