/// Fixed-length bitset used as the carrier of state sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn empty(len: usize) -> Bits {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Bits {
        let mut b = Bits {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.trim();
        b
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Bits {
        let mut b = Bits::empty(len);
        for i in 0..len {
            if f(i) {
                b.insert(i);
            }
        }
        b
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn union(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Bits {
        let mut b = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        b.trim();
        b
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, other: &Bits, op: impl Fn(u64, u64) -> u64) -> Bits {
        assert_eq!(self.len, other.len, "bitset length mismatch");
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| op(*a, *b)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a = Bits::from_fn(70, |i| i % 2 == 0);
        let b = Bits::from_fn(70, |i| i % 3 == 0);
        assert_eq!(a.intersect(&b), Bits::from_fn(70, |i| i % 6 == 0));
        assert_eq!(a.complement().count(), 35);
        assert!(Bits::full(70).is_full());
        assert!(a.intersect(&b).is_subset(&a));
        assert_eq!(a.union(&a.complement()), Bits::full(70));
        assert_eq!(Bits::full(70).complement(), Bits::empty(70));
    }
}
