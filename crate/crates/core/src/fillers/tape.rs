//! A mutable word that records elementary moves as it is rewritten.
//!
//! Callers describe a rewrite as "replace this subword by that one"; the
//! tape finds the relator justifying it and emits a [`Move`] in the exact
//! `u α v → u β v` form. Free changes cost nothing and emit no move.

use crate::derivations::{Deriv, Derivation, Move};
use crate::words::{invert_letters, reduce_letters, Letter, Presentation, Word, A, S, T};

use super::FillError;

pub(crate) struct Tape {
    rels: Vec<(usize, bool, Vec<Letter>)>,
    start: Word,
    cur: Vec<Letter>,
    moves: Vec<Move>,
}

fn letter(g: crate::words::Gen, e: i64) -> Letter {
    Letter::new(g, e > 0)
}

/// Letters of `g^e`.
pub(crate) fn run(g: crate::words::Gen, e: i64) -> Vec<Letter> {
    vec![letter(g, e); e.unsigned_abs() as usize]
}

/// Splits a reduced word as `z c z⁻¹` with `c` cyclically reduced.
fn cyclic_core(w: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let mut i = 0;
    let mut j = w.len();
    while j - i >= 2 && w[i] == w[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (w[..i].to_vec(), w[i..j].to_vec())
}

impl Tape {
    pub(crate) fn new(pres: &Presentation, start: &Word) -> Self {
        let mut rels = Vec::new();
        for (i, r) in pres.relators().iter().enumerate() {
            let r = reduce_letters(r.letters());
            rels.push((i, false, r.clone()));
            rels.push((i, true, invert_letters(&r)));
        }
        Tape {
            rels,
            start: start.clone(),
            cur: start.letters(),
            moves: Vec::new(),
        }
    }

    pub(crate) fn letters(&self) -> &[Letter] {
        &self.cur
    }

    /// Replaces `cur[pos..pos+len]` by `new`, recording one move unless
    /// the two subwords are freely equal.
    pub(crate) fn replace(
        &mut self,
        pos: usize,
        len: usize,
        new: &[Letter],
    ) -> Result<(), FillError> {
        let old = &self.cur[pos..pos + len];
        let mut quotient = old.to_vec();
        quotient.extend(invert_letters(new));
        let c = reduce_letters(quotient);
        if !c.is_empty() {
            let (z, core) = cyclic_core(&c);
            let (idx, inverted, x) = self.find_rotation(&core).ok_or_else(|| {
                FillError::Internal(format!(
                    "`{}` → `{}` is not a relator application",
                    Word::from_letters(old),
                    Word::from_letters(new)
                ))
            })?;
            // u' = U z x⁻¹, α' = x z⁻¹ A, β' = x z⁻¹ B.
            let zinv = invert_letters(&z);
            let mut u = self.cur[..pos].to_vec();
            u.extend_from_slice(&z);
            u.extend(invert_letters(&x));
            let mut head = x.clone();
            head.extend_from_slice(&zinv);
            let mut alpha = head.clone();
            alpha.extend_from_slice(old);
            let mut beta = head;
            beta.extend_from_slice(new);
            self.moves.push(Move {
                u: Word::from_letters(&reduce_letters(u)),
                alpha: Word::from_letters(&reduce_letters(alpha)),
                beta: Word::from_letters(&reduce_letters(beta)),
                v: Word::from_letters(&self.cur[pos + len..]),
                relator: idx,
                inverted,
            });
        }
        self.cur.splice(pos..pos + len, new.iter().copied());
        Ok(())
    }

    /// A relator `r^{±1} = x y` with `core = y x`; returns `x`.
    fn find_rotation(&self, core: &[Letter]) -> Option<(usize, bool, Vec<Letter>)> {
        for (idx, inv, r) in &self.rels {
            if r.len() != core.len() {
                continue;
            }
            for k in 0..r.len() {
                if r[k..] == core[..r.len() - k] && r[..k] == core[r.len() - k..] {
                    return Some((*idx, *inv, r[..k].to_vec()));
                }
            }
        }
        None
    }

    /// Replaces the whole word by a freely equal one.
    pub(crate) fn set(&mut self, new: Vec<Letter>) -> Result<(), FillError> {
        if reduce_letters(new.iter().copied()) != reduce_letters(self.cur.iter().copied()) {
            return Err(FillError::Internal(format!(
                "`{}` is not freely equal to `{}`",
                Word::from_letters(&new),
                Word::from_letters(&self.cur)
            )));
        }
        self.cur = new;
        Ok(())
    }

    pub(crate) fn reduce(&mut self) {
        self.cur = reduce_letters(self.cur.iter().copied());
    }

    pub(crate) fn finish(self) -> Deriv {
        let to = Word::from_letters(&self.cur);
        Derivation::leaf_unchecked(self.start, self.moves, to)
    }

    /// Finishes at `target`, which must be freely equal to the current word.
    pub(crate) fn finish_at(mut self, target: &Word) -> Result<Deriv, FillError> {
        self.set(target.letters())?;
        Ok(self.finish())
    }

    /// Moves the `s⁻¹` at `pos` rightwards through letters `a^{±1}`, `t^{±1}`
    /// using `a^s = a a^t` and `[s, t]`. Returns its new position.
    pub(crate) fn push_s_inverse(&mut self, mut pos: usize) -> Result<usize, FillError> {
        let s_inv = letter(S, -1);
        debug_assert_eq!(self.cur[pos], s_inv);
        while let Some(&x) = self.cur.get(pos + 1) {
            let new: Vec<Letter> = if x.gen == T {
                vec![x, s_inv]
            } else if x.gen == A && x.positive {
                vec![
                    letter(A, 1),
                    letter(T, -1),
                    letter(A, 1),
                    letter(T, 1),
                    s_inv,
                ]
            } else if x.gen == A {
                vec![
                    letter(T, -1),
                    letter(A, -1),
                    letter(T, 1),
                    letter(A, -1),
                    s_inv,
                ]
            } else {
                break;
            };
            let step = new.len() - 1;
            self.replace(pos, 2, &new)?;
            pos += step;
        }
        Ok(pos)
    }

    /// Sorts the `s`/`t` letters of `cur[start..end]` so that all letters of
    /// `first` precede the others, one `[s, t]` move per transposition.
    /// Inverse pairs are cancelled as soon as they meet. Returns the new
    /// segment end.
    pub(crate) fn sort_st(
        &mut self,
        start: usize,
        end: usize,
        first: crate::words::Gen,
    ) -> Result<usize, FillError> {
        let mut end = self.reduce_segment(start, end)?;
        while let Some(i) = (start..end.saturating_sub(1))
            .find(|&i| self.cur[i].gen != first && self.cur[i + 1].gen == first)
        {
            let (x, y) = (self.cur[i], self.cur[i + 1]);
            self.replace(i, 2, &[y, x])?;
            end = self.reduce_segment(start, end)?;
        }
        Ok(end)
    }

    fn reduce_segment(&mut self, start: usize, end: usize) -> Result<usize, FillError> {
        let seg = reduce_letters(self.cur[start..end].iter().copied());
        let new_end = start + seg.len();
        let mut next = self.cur[..start].to_vec();
        next.extend(seg);
        next.extend_from_slice(&self.cur[end..]);
        self.set(next)?;
        Ok(new_end)
    }

    /// Collects the `a`-letters of the `{a, t}` segment `cur[start..end]` by
    /// depth (the exponent `k` in `a^{t^k}`), ascending or descending.
    ///
    /// Only letters at adjacent depths are ever transposed (one `[a, a^t]`
    /// move each). With a modulus, each depth's exponent is brought into
    /// `0..m` with `a^m` moves. Returns the new segment end.
    pub(crate) fn collect(
        &mut self,
        start: usize,
        end: usize,
        ascending: bool,
        modulus: Option<u64>,
    ) -> Result<usize, FillError> {
        let mut items = Vec::new();
        let mut cursor = 0i64;
        for l in &self.cur[start..end] {
            match l.gen {
                T => cursor += l.exp(),
                A => items.push((l.exp(), -cursor)),
                g => {
                    return Err(FillError::Internal(format!(
                        "unexpected `{g}` while collecting"
                    )))
                }
            }
        }
        let mut seg = Segment {
            items,
            tail: cursor,
        };
        seg.cancel();
        let mut end = self.write_segment(start, end, &seg)?;
        let out_of_order = |x: i64, y: i64| if ascending { x > y } else { x < y };
        loop {
            let mut swapped = false;
            let mut k = 0;
            while k + 1 < seg.items.len() {
                let (e1, d1) = seg.items[k];
                let (e2, d2) = seg.items[k + 1];
                if out_of_order(d1, d2) {
                    if (d1 - d2).abs() != 1 {
                        return Err(FillError::Internal(format!(
                            "collecting would swap depths {d1} and {d2}"
                        )));
                    }
                    // a^{e1} t^δ a^{e2} → t^δ a^{e2} t^{-δ} a^{e1} t^δ
                    let delta = d1 - d2;
                    let old_len = 2 + delta.unsigned_abs() as usize;
                    let mut new = run(T, delta);
                    new.push(letter(A, e2));
                    new.extend(run(T, -delta));
                    new.push(letter(A, e1));
                    new.extend(run(T, delta));
                    self.replace(start + seg.offset(k), old_len, &new)?;
                    end = end + new.len() - old_len;
                    seg.items.swap(k, k + 1);
                    seg.cancel();
                    end = self.write_segment(start, end, &seg)?;
                    swapped = true;
                }
                k += 1;
            }
            if !swapped {
                break;
            }
        }
        if let Some(m) = modulus {
            let m = m as i64;
            let mut k = 0;
            while k < seg.items.len() {
                let d = seg.items[k].1;
                let mut j = k;
                let mut value = 0;
                while j < seg.items.len() && seg.items[j].1 == d {
                    value += seg.items[j].0;
                    j += 1;
                }
                let pos = start + seg.offset(k);
                while value >= m {
                    self.replace(pos, m as usize, &[])?;
                    end -= m as usize;
                    value -= m;
                }
                while value < 0 {
                    self.replace(pos, 0, &run(A, m))?;
                    end += m as usize;
                    value += m;
                }
                seg.items
                    .splice(k..j, std::iter::repeat_n((1, d), value as usize));
                end = self.write_segment(start, end, &seg)?;
                k += value as usize;
            }
        }
        Ok(end)
    }

    /// Rewrites `cur[start..end]` as the canonical form of `seg` (free).
    fn write_segment(
        &mut self,
        start: usize,
        end: usize,
        seg: &Segment,
    ) -> Result<usize, FillError> {
        let body = seg.letters();
        let mut next = self.cur[..start].to_vec();
        next.extend_from_slice(&body);
        next.extend_from_slice(&self.cur[end..]);
        self.set(next)?;
        Ok(start + body.len())
    }
}

/// `a`-letters `(sign, depth)` in order, plus the final cursor.
struct Segment {
    items: Vec<(i64, i64)>,
    tail: i64,
}

impl Segment {
    /// Cancels adjacent inverse letters at equal depth.
    fn cancel(&mut self) {
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(self.items.len());
        for &it in &self.items {
            match out.last() {
                Some(&(e, d)) if d == it.1 && e == -it.0 => {
                    out.pop();
                }
                _ => out.push(it),
            }
        }
        self.items = out;
    }

    fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        let mut cursor = 0i64;
        for &(e, d) in &self.items {
            out.extend(run(T, -d - cursor));
            cursor = -d;
            out.push(letter(A, e));
        }
        out.extend(run(T, self.tail - cursor));
        out
    }

    /// Position of item `k` in [`Segment::letters`].
    fn offset(&self, k: usize) -> usize {
        let mut pos = 0usize;
        let mut cursor = 0i64;
        for &(_, d) in &self.items[..k] {
            pos += (-d - cursor).unsigned_abs() as usize + 1;
            cursor = -d;
        }
        pos + (-self.items[k].1 - cursor).unsigned_abs() as usize
    }
}
