//! Free-group words over a lettered alphabet: lowercase letters are
//! generators, uppercase letters their inverses.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::algebra::ParseError;

/// Default largest radius accepted by [`enumerate_ball`].
pub const DEFAULT_BALL_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("ball too large: radius {radius} exceeds cap {cap}")]
    BallTooLarge { radius: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    pub fn new(names: Vec<char>) -> Result<Self, WordError> {
        if names.len() > 26 {
            return Err(WordError::InvalidAlphabet("more than 26 generators".into()));
        }
        for (k, c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(WordError::InvalidAlphabet(format!(
                    "generator names must be lowercase letters, got '{c}'"
                )));
            }
            if names[..k].contains(c) {
                return Err(WordError::InvalidAlphabet(format!(
                    "duplicate generator '{c}'"
                )));
            }
        }
        Ok(Self { names })
    }

    /// `Alphabet::from_letters("ab")`.
    pub fn from_letters(letters: &str) -> Result<Self, WordError> {
        Self::new(letters.chars().collect())
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    /// Generators and inverses in the order used by shortlex: `a < A < b < B < …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len() as u8).flat_map(|g| {
            [
                Letter {
                    generator: g,
                    inverse: false,
                },
                Letter {
                    generator: g,
                    inverse: true,
                },
            ]
        })
    }

    pub fn generator(&self, k: usize) -> Word {
        Word::from_letters([Letter {
            generator: k as u8,
            inverse: false,
        }])
    }

    pub fn generators(&self) -> Vec<Word> {
        (0..self.rank()).map(|k| self.generator(k)).collect()
    }

    pub fn letter_char(&self, l: Letter) -> char {
        let c = self.names[l.generator as usize];
        if l.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    fn letter_of(&self, ch: char) -> Option<Letter> {
        let lower = ch.to_ascii_lowercase();
        let g = self.names.iter().position(|&c| c == lower)?;
        Some(Letter {
            generator: g as u8,
            inverse: ch.is_ascii_uppercase(),
        })
    }

    /// Identity renders as `1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.letters.iter().map(|&l| self.letter_char(l)).collect()
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word. Ordered by shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Freely reduces the given letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: u32) -> Word {
        (0..n).fold(Word::identity(), |acc, _| acc.mul(self))
    }

    /// `u v u⁻¹ v⁻¹`.
    pub fn commutator(&self, v: &Word) -> Word {
        self.mul(v).mul(&self.inverse()).mul(&v.inverse())
    }

    /// `u w u⁻¹`.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.mul(self).mul(&u.inverse())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, WordError> {
    let trimmed = text.trim();
    if trimmed == "1" {
        return Ok(Word::identity());
    }
    let mut letters = Vec::new();
    for (pos, ch) in text.chars().enumerate() {
        if ch.is_whitespace() {
            continue;
        }
        match alphabet.letter_of(ch) {
            Some(l) if ch.is_ascii_alphabetic() => letters.push(l),
            _ => {
                return Err(ParseError::new(pos, format!("unknown letter '{ch}'")).into());
            }
        }
    }
    Ok(Word::from_letters(letters))
}

pub fn multiply(u: &Word, v: &Word) -> Word {
    u.mul(v)
}

pub fn invert(u: &Word) -> Word {
    u.inverse()
}

pub fn commutator(u: &Word, v: &Word) -> Word {
    u.commutator(v)
}

/// All reduced words of length at most `radius`, in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordBall {
    pub radius: usize,
    pub words: Vec<Word>,
}

impl WordBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index_of(w).is_some()
    }
}

pub fn enumerate_ball(alphabet: &Alphabet, radius: usize) -> Result<WordBall, WordError> {
    enumerate_ball_capped(alphabet, radius, DEFAULT_BALL_CAP)
}

pub fn enumerate_ball_capped(
    alphabet: &Alphabet,
    radius: usize,
    cap: usize,
) -> Result<WordBall, WordError> {
    if radius > cap {
        return Err(WordError::BallTooLarge { radius, cap });
    }
    let mut words = vec![Word::identity()];
    let mut shell = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &shell {
            for l in alphabet.letters() {
                if w.letters.last() == Some(&l.inv()) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(Word { letters });
            }
        }
        words.extend(next.iter().cloned());
        shell = next;
    }
    Ok(WordBall { radius, words })
}

pub struct DisplayWord<'a>(pub &'a Alphabet, pub &'a Word);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_letters("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(s, &ab()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(ab().render(&w("abA")), "abA");
        assert!(w("aA").is_identity());
        assert!(w("abBA").is_identity());
        assert!(w("1").is_identity());
        let err = parse_word("abc", &ab()).unwrap_err();
        assert_eq!(
            err,
            WordError::Parse(ParseError::new(2, "unknown letter 'c'"))
        );
    }

    #[test]
    fn product_examples() {
        assert!(multiply(&w("ab"), &w("BA")).is_identity());
        assert_eq!(invert(&w("ab")), w("BA"));
        assert_eq!(ab().render(&commutator(&w("a"), &w("b"))), "abAB");
    }

    #[test]
    fn ball_examples() {
        assert_eq!(enumerate_ball(&ab(), 0).unwrap().len(), 1);
        assert_eq!(enumerate_ball(&ab(), 1).unwrap().len(), 5);
        assert_eq!(enumerate_ball(&ab(), 2).unwrap().len(), 17);
        assert_eq!(
            enumerate_ball(&ab(), 9),
            Err(WordError::BallTooLarge { radius: 9, cap: 8 })
        );
        let ball = enumerate_ball(&ab(), 1).unwrap();
        let rendered: Vec<String> = ball.words.iter().map(|x| ab().render(x)).collect();
        assert_eq!(rendered, ["1", "a", "A", "b", "B"]);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::from_letters("aa").is_err());
        assert!(Alphabet::from_letters("aB").is_err());
        assert!(Alphabet::from_letters("abcdefghijklmnopqrstuvwxyz").is_ok());
    }
}
