use std::fmt;

use crate::error::{EdiError, Result};

/// Worlds are enumerated exhaustively, so the vocabulary size is bounded.
pub const MAX_ATOMS: usize = 16;

/// An ordered set of atom names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    atoms: Vec<String>,
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && name != "true"
        && name != "false"
}

impl Vocabulary {
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(EdiError::InvalidVocabulary(format!(
                "need between 1 and {MAX_ATOMS} atoms, got {}",
                atoms.len()
            )));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !valid_atom_name(a) {
                return Err(EdiError::InvalidVocabulary(format!("bad atom name `{a}`")));
            }
            if atoms[..i].contains(a) {
                return Err(EdiError::InvalidVocabulary(format!("duplicate atom `{a}`")));
            }
        }
        Ok(Vocabulary { atoms })
    }

    /// `a0, a1, …` style vocabulary of the given size, mostly for sweeps.
    pub fn numbered(n: usize) -> Result<Self> {
        Vocabulary::new((0..n).map(|i| format!("p{i}")))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn world_count(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.world_count() as u32).map(World)
    }

    /// Parses a truth vector such as `"01"`.
    pub fn world(&self, vector: &str) -> Result<World> {
        World::from_truth_vector(vector, self.len())
    }
}

/// A complete truth assignment, identified by its position in descending
/// truth-vector order (index 0 is the all-true world).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World(u32);

impl World {
    pub fn new(index: usize, atoms: usize) -> Result<Self> {
        if index >= 1 << atoms {
            return Err(EdiError::InvalidWorld(format!(
                "index {index} out of range for {atoms} atoms"
            )));
        }
        Ok(World(index as u32))
    }

    pub(crate) const fn from_index(index: usize) -> Self {
        World(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Truth value of atom `atom` (0 = leftmost) in a vocabulary of `atoms`.
    pub fn satisfies_atom(self, atom: usize, atoms: usize) -> bool {
        debug_assert!(atom < atoms);
        (self.0 >> (atoms - 1 - atom)) & 1 == 0
    }

    pub fn from_truth_vector(vector: &str, atoms: usize) -> Result<Self> {
        if vector.len() != atoms {
            return Err(EdiError::InvalidWorld(format!(
                "`{vector}` is not a truth vector over {atoms} atoms"
            )));
        }
        let mut index = 0u32;
        for c in vector.chars() {
            let bit = match c {
                '1' => 0,
                '0' => 1,
                _ => {
                    return Err(EdiError::InvalidWorld(format!(
                        "`{vector}` is not a truth vector"
                    )))
                }
            };
            index = (index << 1) | bit;
        }
        Ok(World(index))
    }

    pub fn truth_vector(self, atoms: usize) -> String {
        (0..atoms)
            .map(|a| if self.satisfies_atom(a, atoms) { '1' } else { '0' })
            .collect()
    }

    /// Number of atoms on which the two worlds disagree.
    pub fn hamming(self, other: World) -> u32 {
        (self.0 ^ other.0).count_ones()
    }
}

/// A subset of the worlds over a fixed number of atoms, as a bitmask indexed
/// by world index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    atoms: usize,
    words: Vec<u64>,
}

impl WorldSet {
    fn word_count(atoms: usize) -> usize {
        (1usize << atoms).div_ceil(64)
    }

    pub fn empty(atoms: usize) -> Self {
        WorldSet {
            atoms,
            words: vec![0; Self::word_count(atoms)],
        }
    }

    pub fn full(atoms: usize) -> Self {
        let mut s = Self::empty(atoms);
        for i in 0..1usize << atoms {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    pub fn from_worlds<I: IntoIterator<Item = World>>(atoms: usize, worlds: I) -> Self {
        let mut s = Self::empty(atoms);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    /// Builds a set from a bitmask over at most 64 worlds (`atoms ≤ 6`).
    pub fn from_mask(atoms: usize, mask: u64) -> Self {
        assert!(atoms <= 6, "from_mask supports at most 64 worlds");
        let universe = 1usize << atoms;
        let mask = if universe == 64 { mask } else { mask & ((1u64 << universe) - 1) };
        WorldSet {
            atoms,
            words: vec![mask],
        }
    }

    /// The bitmask form, when the universe fits in 64 worlds.
    pub fn mask(&self) -> Option<u64> {
        (self.words.len() == 1).then(|| self.words[0])
    }

    /// Every subset of the universe, in ascending mask order (∅ first).
    /// Limited to `atoms ≤ 4`, i.e. at most 65 536 subsets.
    pub fn all_subsets(atoms: usize) -> Result<impl Iterator<Item = WorldSet>> {
        if atoms > 4 {
            return Err(EdiError::SuiteTooLarge(format!(
                "enumerating all world sets needs at most 4 atoms, got {atoms}"
            )));
        }
        let count = 1u64 << (1u64 << atoms);
        Ok((0..count).map(move |m| WorldSet::from_mask(atoms, m)))
    }

    /// Every non-empty subset, in ascending mask order.
    pub fn non_empty_subsets(atoms: usize) -> Result<impl Iterator<Item = WorldSet>> {
        Ok(Self::all_subsets(atoms)?.skip(1))
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn universe(&self) -> usize {
        1 << self.atoms
    }

    pub fn contains(&self, w: World) -> bool {
        let i = w.index();
        i < self.universe() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, w: World) {
        let i = w.index();
        assert!(i < self.universe(), "world {i} outside universe");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, w: World) {
        let i = w.index();
        if i < self.universe() {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    /// Members in ascending world index.
    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.universe())
            .filter(|&i| self.words[i / 64] >> (i % 64) & 1 == 1)
            .map(World::from_index)
    }

    pub fn first(&self) -> Option<World> {
        self.iter().next()
    }

    fn zip_with(&self, other: &WorldSet, f: impl Fn(u64, u64) -> u64) -> WorldSet {
        assert_eq!(self.atoms, other.atoms, "world sets over different vocabularies");
        WorldSet {
            atoms: self.atoms,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> WorldSet {
        WorldSet::full(self.atoms).difference(self)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Truth vectors of the members, e.g. `["11", "01"]`.
    pub fn truth_vectors(&self) -> Vec<String> {
        self.iter().map(|w| w.truth_vector(self.atoms)).collect()
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.truth_vectors().join(","))
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
