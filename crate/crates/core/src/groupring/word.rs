use std::fmt;

/// A single syllable `x_gen^exp` of a free-group word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i64,
}

impl Letter {
    pub fn new(gen: usize, exp: i64) -> Self {
        Letter { gen, exp }
    }
}

/// Freely reduced word in the free group on indexed generators.
///
/// Stored as syllables with nonzero exponents and no two adjacent syllables
/// on the same generator, so structural equality is group equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn generator(gen: usize) -> Self {
        GroupWord { letters: vec![Letter::new(gen, 1)] }
    }

    pub fn power(gen: usize, exp: i64) -> Self {
        Self::reduce([Letter::new(gen, exp)])
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.gen == l.gen => {
                    top.exp += l.exp;
                    if top.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        GroupWord { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        Self::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| Letter::new(l.gen, -l.exp)).collect(),
        }
    }

    /// Total exponent sum of every generator weighted by `weights[gen]`.
    pub fn weighted_exponent(&self, weights: &[i64]) -> i64 {
        self.letters.iter().map(|l| weights.get(l.gen).copied().unwrap_or(0) * l.exp).sum()
    }

    /// Largest generator index used plus one.
    pub fn generator_bound(&self) -> usize {
        self.letters.iter().map(|l| l.gen + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "x{}", l.gen)?;
            } else {
                write!(f, "x{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[(usize, i64)]) -> GroupWord {
        GroupWord::reduce(letters.iter().map(|&(g, e)| Letter::new(g, e)))
    }

    #[test]
    fn cancels_inverse_pair() {
        assert!(w(&[(0, 1), (0, -1)]).is_identity());
    }

    #[test]
    fn no_reduction_across_generators() {
        let word = w(&[(0, 1), (1, 1), (1, 1), (0, 1)]);
        assert_eq!(word.letters(), &[Letter::new(0, 1), Letter::new(1, 2), Letter::new(0, 1)]);
    }

    #[test]
    fn nested_cancellation_merges_outer_letters() {
        let word = w(&[(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(word, GroupWord::power(0, 2));
    }

    #[test]
    fn inverse_is_two_sided() {
        let word = w(&[(0, 2), (1, -1), (2, 3)]);
        assert!(word.mul(&word.inverse()).is_identity());
        assert!(word.inverse().mul(&word).is_identity());
    }

    #[test]
    fn weighted_exponent_is_additive() {
        let a = w(&[(0, 1), (1, -2)]);
        let b = w(&[(1, 1), (0, 3)]);
        let wts = [1, 5];
        assert_eq!(a.mul(&b).weighted_exponent(&wts), a.weighted_exponent(&wts) + b.weighted_exponent(&wts));
    }
}
