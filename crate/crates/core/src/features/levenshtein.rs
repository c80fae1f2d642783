//! Character-level Levenshtein distance.
//!
//! [`Pattern`] precomputes match bitmasks for one string so it can be compared
//! against many others with the block-based bit-parallel recurrence
//! (Myers 1999, Hyyrö 2003): `O(ceil(m / 64) * n)` per comparison.
//! [`levenshtein_within`] is the banded variant that gives up once the
//! distance is known to exceed a bound.

use std::collections::HashMap;

const WORD: usize = 64;

/// Match bitmasks of a pattern string, one 64-bit block per 64 characters.
#[derive(Debug, Clone)]
pub struct Pattern {
    len: usize,
    blocks: usize,
    ascii: Vec<[u64; 128]>,
    other: HashMap<char, Vec<u64>>,
}

impl Pattern {
    pub fn new(chars: &[char]) -> Self {
        let len = chars.len();
        let blocks = len.div_ceil(WORD).max(1);
        let mut ascii = vec![[0u64; 128]; blocks];
        let mut other: HashMap<char, Vec<u64>> = HashMap::new();
        for (i, &c) in chars.iter().enumerate() {
            let (block, bit) = (i / WORD, 1u64 << (i % WORD));
            if c.is_ascii() {
                ascii[block][c as usize] |= bit;
            } else {
                other.entry(c).or_insert_with(|| vec![0; blocks])[block] |= bit;
            }
        }
        Pattern {
            len,
            blocks,
            ascii,
            other,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn mask(&self, block: usize, c: char) -> u64 {
        if c.is_ascii() {
            self.ascii[block][c as usize]
        } else {
            self.other.get(&c).map_or(0, |v| v[block])
        }
    }

    /// Edit distance from this pattern to `text`.
    pub fn distance(&self, text: &[char]) -> usize {
        if self.len == 0 {
            return text.len();
        }
        if text.is_empty() {
            return self.len;
        }
        let last = 1u64 << ((self.len - 1) % WORD);
        let mut vp = vec![!0u64; self.blocks];
        let mut vn = vec![0u64; self.blocks];
        let mut dist = self.len;

        for &c in text {
            // Row 0 of the DP matrix grows by one per text character.
            let mut hp_carry = 1u64;
            let mut hn_carry = 0u64;
            for w in 0..self.blocks {
                let eq = self.mask(w, c);
                let (pv, mv) = (vp[w], vn[w]);
                let x = eq | hn_carry;
                let d0 = ((x & pv).wrapping_add(pv) ^ pv) | x | mv;
                let mut hp = mv | !(d0 | pv);
                let mut hn = d0 & pv;
                if w + 1 == self.blocks {
                    if hp & last != 0 {
                        dist += 1;
                    }
                    if hn & last != 0 {
                        dist -= 1;
                    }
                }
                let next_hp = hp >> 63;
                let next_hn = hn >> 63;
                hp = (hp << 1) | hp_carry;
                hn = (hn << 1) | hn_carry;
                hp_carry = next_hp;
                hn_carry = next_hn;
                vp[w] = hn | !(d0 | hp);
                vn[w] = hp & d0;
            }
        }
        dist
    }
}

/// Edit distance between two strings, counted in Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

pub fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    // The shorter string as pattern needs fewer blocks.
    let (p, t) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    Pattern::new(p).distance(t)
}

/// Banded distance: `Some(d)` when `d <= max_dist`, `None` otherwise.
///
/// Only the diagonal band of width `2 * max_dist + 1` is evaluated, and the
/// scan stops as soon as every cell of a row exceeds the bound.
pub fn levenshtein_within(a: &[char], b: &[char], max_dist: usize) -> Option<usize> {
    let (m, n) = (a.len(), b.len());
    if m.abs_diff(n) > max_dist {
        return None;
    }
    let inf = max_dist + 1;
    let mut prev = vec![inf; n + 1];
    let mut cur = vec![inf; n + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(max_dist.min(n) + 1) {
        *cell = j;
    }
    for i in 1..=m {
        let lo = i.saturating_sub(max_dist);
        let hi = (i + max_dist).min(n);
        // Cells just outside the band must read as unreachable.
        if lo == 0 {
            cur[0] = i;
        } else {
            cur[lo - 1] = inf;
        }
        let mut row_min = if lo == 0 { i } else { inf };
        for j in lo.max(1)..=hi {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            let del = prev[j] + 1;
            let ins = cur[j - 1] + 1;
            let v = sub.min(del).min(ins).min(inf);
            cur[j] = v;
            row_min = row_min.min(v);
        }
        if hi < n {
            cur[hi + 1] = inf;
        }
        if row_min > max_dist {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[n];
    (d <= max_dist).then_some(d)
}

/// `1 - dist / max(len)`; two empty strings are fully similar.
pub fn similarity_from_distance(len_a: usize, len_b: usize, dist: usize) -> f64 {
    let longest = len_a.max(len_b);
    if longest == 0 {
        1.0
    } else {
        1.0 - dist as f64 / longest as f64
    }
}

pub fn similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    similarity_from_distance(a.len(), b.len(), levenshtein_chars(&a, &b))
}

/// Largest distance for which two strings with longer length `longest` are
/// still similar strictly above `threshold`. `None` when no distance qualifies.
pub fn duplicate_band(longest: usize, threshold: f64) -> Option<usize> {
    if longest == 0 {
        return (1.0 > threshold).then_some(0);
    }
    let mut k = ((1.0 - threshold) * longest as f64).floor().max(0.0) as usize;
    k = k.min(longest);
    loop {
        if similarity_from_distance(longest, longest, k) > threshold {
            return Some(k);
        }
        if k == 0 {
            return None;
        }
        k -= 1;
    }
}

/// True when the two strings are similar strictly above `threshold`,
/// decided with the banded early-exit distance.
pub fn is_near_duplicate(a: &[char], b: &[char], threshold: f64) -> bool {
    match duplicate_band(a.len().max(b.len()), threshold) {
        Some(k) => levenshtein_within(a, b, k).is_some(),
        None => false,
    }
}
