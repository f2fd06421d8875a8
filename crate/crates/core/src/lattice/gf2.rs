//! Dense GF(2) matrices with rows packed into `u64` words.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Builds a matrix from pre-packed rows of `cols.div_ceil(64)` words each.
    pub fn from_word_rows<I, R>(cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[u64]>,
    {
        let words_per_row = cols.div_ceil(64);
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), words_per_row, "row width mismatch");
            data.extend_from_slice(row);
            n += 1;
        }
        BitMatrix {
            rows: n,
            cols,
            words_per_row,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        let mask = 1u64 << (c % 64);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * w);
        head[lo * w..(lo + 1) * w].swap_with_slice(&mut tail[..w]);
    }

    /// `row[dst] ^= row[src]` over words `from..`.
    fn xor_row_from(&mut self, dst: usize, src: usize, from: usize) {
        let w = self.words_per_row;
        debug_assert_ne!(dst, src);
        let (d, s) = if dst < src {
            let (head, tail) = self.data.split_at_mut(src * w);
            (&mut head[dst * w..(dst + 1) * w], &tail[..w])
        } else {
            let (head, tail) = self.data.split_at_mut(dst * w);
            (&mut tail[..w], &head[src * w..(src + 1) * w])
        };
        for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
            *x ^= *y;
        }
    }

    /// Reduces in place to row echelon form and returns the rank.
    pub fn row_reduce(&mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let word = col / 64;
            let mask = 1u64 << (col % 64);
            let w = self.words_per_row;
            let Some(pivot) = (rank..self.rows).find(|&r| self.data[r * w + word] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(rank, pivot);
            for r in rank + 1..self.rows {
                if self.data[r * w + word] & mask != 0 {
                    // rows below the pivot are zero left of `col`
                    self.xor_row_from(r, rank, word);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce()
    }
}
