use std::fmt;

/// Maximum number of random variables a [`VarSet`] can index.
pub const MAX_VARS: usize = 62;

/// A subset of a problem's ordered variable list, stored as a bitmask.
///
/// Ordering is by the bitmask integer, which is also the canonical
/// coordinate order of an entropy profile. One bit above [`MAX_VARS`] is
/// reserved for the epigraph scalar of min-max objectives (see
/// [`VarSet::EPIGRAPH`]); it sorts after every ordinary coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet(u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);
    /// Auxiliary LP column `t` standing for `max{...}` in min-max objectives.
    pub const EPIGRAPH: VarSet = VarSet(1 << 63);

    pub const fn from_bits(bits: u64) -> Self {
        VarSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index {i} exceeds capacity");
        VarSet(1 << i)
    }

    /// All variables `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VARS);
        if n == 0 {
            VarSet(0)
        } else {
            VarSet(u64::MAX >> (64 - n))
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter()
            .fold(VarSet::EMPTY, |s, i| s | VarSet::singleton(i))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_epigraph(self) -> bool {
        self == VarSet::EPIGRAPH
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn without(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    /// Highest variable index plus one (0 for the empty set).
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, including the empty set, in increasing
    /// bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let mask = self.0;
        let mut cur: Option<u64> = Some(0);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == mask {
                None
            } else {
                Some((c.wrapping_sub(mask)) & mask)
            };
            Some(VarSet(c))
        })
    }

    /// Comma-separated names, e.g. `A,B,C`.
    pub fn names<'a>(self, names: &'a [String]) -> VarSetNames<'a> {
        VarSetNames { set: self, names }
    }
}

impl std::ops::BitOr for VarSet {
    type Output = VarSet;
    fn bitor(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for VarSet {
    fn bitor_assign(&mut self, rhs: VarSet) {
        self.0 |= rhs.0;
    }
}

impl std::ops::BitAnd for VarSet {
    type Output = VarSet;
    fn bitand(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 & rhs.0)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_epigraph() {
            return write!(f, "{{t}}");
        }
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

pub struct VarSetNames<'a> {
    set: VarSet,
    names: &'a [String],
}

impl fmt::Display for VarSetNames<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.set.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            match self.names.get(i) {
                Some(n) => write!(f, "{n}")?,
                None => write!(f, "#{i}")?,
            }
        }
        Ok(())
    }
}
