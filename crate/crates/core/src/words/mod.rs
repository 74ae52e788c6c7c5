//! Free-group words over generators `a, b, c, …`.
//!
//! A letter is encoded as `2 * generator + inverted`, so the frozen letter
//! order is `a < A < b < B < …` (upper case denotes the inverse). Every
//! canonical form in the crate is defined with respect to this order.

mod automorphism;
mod fold;

pub use automorphism::{Automorphism, PeripheralConjugator};
pub use fold::{membership, SubgroupGraph};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub type Letter = u8;

#[inline]
pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

#[inline]
pub fn generator_of(l: Letter) -> usize {
    (l >> 1) as usize
}

pub fn letter_char(l: Letter) -> char {
    let base = if l & 1 == 0 { b'a' } else { b'A' };
    (base + (l >> 1)) as char
}

pub fn char_letter(c: char) -> Option<Letter> {
    match c {
        'a'..='z' => Some((c as u8 - b'a') << 1),
        'A'..='Z' => Some(((c as u8 - b'A') << 1) | 1),
        _ => None,
    }
}

/// Freely reduced word. Ordered shortlex (length first, then letters).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&inverse_letter(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![(g as u8) << 1])
    }

    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        let letters: Option<Vec<Letter>> = s.chars().map(char_letter).collect();
        letters
            .map(Word::reduce)
            .ok_or_else(|| Error::BadWord(s.to_string()))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used plus one.
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|&l| generator_of(l) + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| inverse_letter(l)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Splits `self = c · core · c⁻¹` with `core` cyclically reduced.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let w = &self.0;
        let n = w.len();
        let mut k = 0;
        while 2 * k + 1 < n && w[k] == inverse_letter(w[n - 1 - k]) {
            k += 1;
        }
        (Word(w[..k].to_vec()), Word(w[k..n - k].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != inverse_letter(l),
            _ => true,
        }
    }
}

pub fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

/// Lexicographically least rotation of a cyclic word.
pub fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    let mut best = 0;
    for r in 1..n {
        if rotation_cmp(w, r, best) == Ordering::Less {
            best = r;
        }
    }
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&w[best..]);
    out.extend_from_slice(&w[..best]);
    out
}

fn rotation_cmp(w: &[Letter], r: usize, s: usize) -> Ordering {
    let n = w.len();
    for k in 0..n {
        let o = w[(r + k) % n].cmp(&w[(s + k) % n]);
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Unoriented free-homotopy class of a closed curve: the least rotation
/// among the cyclic reduction and its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClass(Word);

impl ConjClass {
    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn parse(s: &str) -> Result<ConjClass> {
        conj_canonical(&Word::parse(s)?)
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConjClass({})", self.0)
    }
}

pub fn conj_canonical(w: &Word) -> Result<ConjClass> {
    if w.is_empty() {
        return Err(Error::IdentityWord);
    }
    let (_, core) = w.cyclic_split();
    let a = least_rotation(core.letters());
    let b = least_rotation(core.inverse().letters());
    Ok(ConjClass(Word(a.min(b))))
}

/// Oriented conjugacy invariant (least rotation of the cyclic reduction).
pub fn oriented_cyclic_form(w: &Word) -> Word {
    let (_, core) = w.cyclic_split();
    Word(least_rotation(core.letters()))
}

/// True when the cyclically reduced word `w` equals its conjugacy canonical
/// form; cheaper than building the form.
pub fn is_conj_canonical(w: &[Letter]) -> bool {
    let n = w.len();
    if n == 0 || (n > 1 && w[0] == inverse_letter(w[n - 1])) {
        return false;
    }
    for r in 1..n {
        if rotation_cmp(w, r, 0) == Ordering::Less {
            return false;
        }
    }
    let inv: Vec<Letter> = w.iter().rev().map(|&l| inverse_letter(l)).collect();
    for r in 0..n {
        for k in 0..n {
            match inv[(r + k) % n].cmp(&w[k]) {
                Ordering::Less => return false,
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    true
}

/// Shortlex-least element of the double coset `⟨u⟩ w ⟨v⟩`.
pub fn double_coset_canonical(u: &Word, w: &Word, v: &Word) -> Word {
    let cu = u.cyclic_split().1.len().max(1);
    let cv = v.cyclic_split().1.len().max(1);
    // Powers beyond this window only lengthen the product: at most |w| + |u|
    // + |v| letters can cancel against a power of a cyclically reduced core.
    let k = ((w.len() + u.len() + v.len()) / cu.min(cv)) as i64 + 2;
    let left: Vec<Word> = (-k..=k).map(|p| u.pow(p)).collect();
    let right: Vec<Word> = (-k..=k).map(|q| v.pow(q)).collect();
    let mut best = w.clone();
    for l in &left {
        let lw = l.concat(w);
        for r in &right {
            let cand = lw.concat(r);
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

/// True when neither `u^{±1}·w` nor `w·v^{±1}` is shorter than `w`; every
/// shortest double-coset representative passes this test.
pub fn is_locally_minimal(u: &Word, w: &[Letter], v: &Word) -> bool {
    let shorter = |x: &[Letter], y: &[Letter]| {
        let mut c = 0;
        while c < x.len() && c < y.len() && x[x.len() - 1 - c] == inverse_letter(y[c]) {
            c += 1;
        }
        2 * c > x.len()
    };
    let ui = u.inverse();
    let vi = v.inverse();
    !(shorter(u.letters(), w)
        || shorter(ui.letters(), w)
        || shorter_right(w, v.letters())
        || shorter_right(w, vi.letters()))
}

fn shorter_right(w: &[Letter], y: &[Letter]) -> bool {
    let mut c = 0;
    while c < w.len() && c < y.len() && w[w.len() - 1 - c] == inverse_letter(y[c]) {
        c += 1;
    }
    2 * c > y.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    pub(crate) fn word_strategy(rank: u8, max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0..2 * rank, 0..=max_len).prop_map(Word::reduce)
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w(""), Word::identity());
        assert_eq!(w("Aab"), w("b"));
        assert_eq!(w("aa").to_string(), "aa");
        assert!(Word::parse("a1").is_err());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(conj_canonical(&w("baB")).unwrap(), conj_canonical(&w("a")).unwrap());
        assert_eq!(conj_canonical(&w("ab")).unwrap(), conj_canonical(&w("BA")).unwrap());
        let x = w("A").concat(&w("abAB")).concat(&w("a"));
        let c = conj_canonical(&x).unwrap();
        assert_eq!(c, conj_canonical(&w("abAB")).unwrap());
        assert_eq!(c, conj_canonical(&w("baBA")).unwrap());
        // brute-force oracle: least of all rotations of the word and inverse
        let core = w("abAB");
        let mut all = Vec::new();
        for src in [core.clone(), core.inverse()] {
            let l = src.letters();
            for r in 0..l.len() {
                let mut v = l[r..].to_vec();
                v.extend_from_slice(&l[..r]);
                all.push(Word(v));
            }
        }
        all.sort_by(|a, b| a.letters().cmp(b.letters()));
        assert_eq!(c.word(), &all[0]);
        assert_eq!(conj_canonical(&Word::identity()), Err(Error::IdentityWord));
    }

    #[test]
    fn double_coset_examples() {
        let u = w("abAB");
        let x = w("ab");
        let moved = u.pow(2).concat(&x).concat(&u.pow(-1));
        assert_eq!(double_coset_canonical(&u, &moved, &u), double_coset_canonical(&u, &x, &u));
        let a = w("a");
        let b = w("b");
        assert_eq!(double_coset_canonical(&a, &w("aaab"), &b), Word::identity());
    }

    proptest! {
        #[test]
        fn reduce_idempotent(x in word_strategy(2, 20)) {
            prop_assert_eq!(Word::reduce(x.letters().iter().copied()), x);
        }

        #[test]
        fn conj_invariant(x in word_strategy(2, 14), u in word_strategy(2, 8)) {
            prop_assume!(!x.is_empty());
            let y = u.concat(&x).concat(&u.inverse());
            prop_assert_eq!(conj_canonical(&x).unwrap(), conj_canonical(&y).unwrap());
            prop_assert_eq!(conj_canonical(&x).unwrap(), conj_canonical(&x.inverse()).unwrap());
            let c = conj_canonical(&x).unwrap();
            prop_assert!(is_conj_canonical(c.word().letters()));
        }

        #[test]
        fn double_coset_invariant(x in word_strategy(2, 12), p in -3i64..=3, q in -3i64..=3) {
            let u = w("abAB");
            let v = w("abAB");
            let y = u.pow(p).concat(&x).concat(&v.pow(q));
            let cx = double_coset_canonical(&u, &x, &v);
            prop_assert_eq!(&cx, &double_coset_canonical(&u, &y, &v));
            prop_assert!(is_locally_minimal(&u, cx.letters(), &v));
            let (a, b) = (w("a"), w("AB"));
            let y = a.pow(p).concat(&x).concat(&b.pow(q));
            prop_assert_eq!(double_coset_canonical(&a, &x, &b), double_coset_canonical(&a, &y, &b));
        }
    }
}
