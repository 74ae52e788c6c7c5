//! Free-group automorphisms given by generator images.

use std::fmt;

use super::{generator_of, oriented_cyclic_form, Word};
use crate::error::{Error, Result};

/// Automorphism stored together with an explicit inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    name: String,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
    pmod_checked: bool,
}

/// Conjugator `u` with `φ(δ) = u δ u⁻¹` for a peripheral word `δ`.
pub type PeripheralConjugator = Word;

fn substitute(images: &[Word], w: &Word) -> Word {
    let mut out = Vec::new();
    for &l in w.letters() {
        let img = &images[generator_of(l)];
        if l & 1 == 0 {
            out.extend_from_slice(img.letters());
        } else {
            out.extend(img.inverse().letters());
        }
    }
    Word::reduce(out)
}

impl Automorphism {
    /// Validates that the two image lists are mutually inverse on generators.
    pub fn new(name: &str, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        if inverse_images.len() != rank {
            return Err(Error::NotInvertible(format!("{name}: rank mismatch")));
        }
        for g in 0..rank {
            let x = Word::generator(g);
            if substitute(&inverse_images, &substitute(&images, &x)) != x
                || substitute(&images, &substitute(&inverse_images, &x)) != x
            {
                return Err(Error::NotInvertible(name.to_string()));
            }
        }
        Ok(Automorphism {
            name: name.to_string(),
            images,
            inverse_images,
            pmod_checked: false,
        })
    }

    pub fn identity(rank: usize) -> Self {
        let gens: Vec<Word> = (0..rank).map(Word::generator).collect();
        Automorphism {
            name: "id".into(),
            images: gens.clone(),
            inverse_images: gens,
            pmod_checked: false,
        }
    }

    /// Twist `a ↦ a, b ↦ ba` on the rank-two free group.
    pub fn twist_a() -> Self {
        let p = |s| Word::parse(s).expect("literal");
        Automorphism::new("Ta", vec![p("a"), p("ba")], vec![p("a"), p("bA")]).expect("invertible")
    }

    /// Twist `a ↦ ab, b ↦ b` on the rank-two free group.
    pub fn twist_b() -> Self {
        let p = |s| Word::parse(s).expect("literal");
        Automorphism::new("Tb", vec![p("ab"), p("b")], vec![p("aB"), p("b")]).expect("invertible")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn pmod_checked(&self) -> bool {
        self.pmod_checked
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images, w)
    }

    pub fn inverse(&self) -> Self {
        let name = match self.name.strip_suffix("^-1") {
            Some(base) => base.to_string(),
            None => format!("{}^-1", self.name),
        };
        Automorphism {
            name,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
            pmod_checked: self.pmod_checked,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Self {
        Automorphism {
            name: format!("{}*{}", self.name, other.name),
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| substitute(&other.inverse_images, w))
                .collect(),
            pmod_checked: self.pmod_checked && other.pmod_checked,
        }
    }

    /// Verifies that every peripheral word is sent to a conjugate of itself
    /// with the same orientation, and marks the automorphism as pure.
    pub fn check_pmod(mut self, peripherals: &[Word]) -> Result<Self> {
        for d in peripherals {
            let img = self.apply(d);
            if oriented_cyclic_form(&img) != oriented_cyclic_form(d) {
                return Err(Error::NotPure(self.name.clone(), d.to_string()));
            }
        }
        self.pmod_checked = true;
        Ok(self)
    }

    /// For each peripheral word `δ`, a word `u` with `φ(δ) = u δ u⁻¹`.
    pub fn peripheral_conjugators(&self, peripherals: &[Word]) -> Result<Vec<PeripheralConjugator>> {
        peripherals
            .iter()
            .map(|d| {
                let img = self.apply(d);
                let (c, core) = img.cyclic_split();
                let (dd, dcore) = d.cyclic_split();
                let n = dcore.len();
                let target = core.letters();
                let r = (0..n.max(1))
                    .find(|&r| {
                        n == target.len()
                            && dcore.letters()[r..]
                                .iter()
                                .chain(&dcore.letters()[..r])
                                .eq(target.iter())
                    })
                    .ok_or_else(|| Error::NotPure(self.name.clone(), d.to_string()))?;
                let x = Word::reduce(dcore.letters()[..r].iter().copied());
                let u = c.concat(&x.inverse()).concat(&dd.inverse());
                debug_assert_eq!(u.concat(d).concat(&u.inverse()), img);
                Ok(u)
            })
            .collect()
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name)?;
        for (g, img) in self.images.iter().enumerate() {
            write!(f, "{}->{} ", super::letter_char((g as u8) << 1), img)?;
        }
        Ok(())
    }
}
