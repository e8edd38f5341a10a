//! Pseudo-distances over worlds, closest-world sets and the tie-broken
//! total order used by Lewis imaging.

use std::fmt;
use std::path::Path;

use serde_json::Value;

use crate::error::{EdiError, Result};
use crate::logic::{Vocabulary, World, WorldSet};
use crate::rational::parse_rational;

/// An integer distance table over `2^n × 2^n` worlds.
///
/// Tables built through [`PseudoDistance::from_table`] are not validated, so
/// that broken tables can be fed to [`validate_pseudo_distance`].
#[derive(Clone, PartialEq, Eq)]
pub struct PseudoDistance {
    atoms: usize,
    table: Vec<i64>,
    faithful: bool,
}

impl PseudoDistance {
    /// Hamming (Dalal) distance: the number of atoms two worlds disagree on.
    pub fn hamming(atoms: usize) -> Self {
        let size = 1usize << atoms;
        let mut table = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                table.push(World::from_index(i).hamming(World::from_index(j)) as i64);
            }
        }
        PseudoDistance { atoms, table, faithful: true }
    }

    /// Builds a table from a row-major `2^n × 2^n` matrix indexed by world
    /// index. The faithful flag is taken from the table itself.
    pub fn from_table(atoms: usize, table: Vec<i64>) -> Result<Self> {
        let size = 1usize << atoms;
        if table.len() != size * size {
            return Err(EdiError::InvalidDistance(format!(
                "expected {} entries, got {}",
                size * size,
                table.len()
            )));
        }
        let mut d = PseudoDistance { atoms, table, faithful: false };
        d.faithful = d.validate().faithfulness.is_none();
        Ok(d)
    }

    /// Builds a table from a function of world pairs.
    pub fn from_fn(atoms: usize, f: impl Fn(World, World) -> i64) -> Self {
        let size = 1usize << atoms;
        let table = (0..size * size)
            .map(|k| f(World::from_index(k / size), World::from_index(k % size)))
            .collect();
        Self::from_table(atoms, table).expect("table has the right size")
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn faithful(&self) -> bool {
        self.faithful
    }

    pub fn get(&self, w: World, v: World) -> i64 {
        self.table[w.index() * (1 << self.atoms) + v.index()]
    }

    /// `d^max`, the largest entry.
    pub fn d_max(&self) -> i64 {
        self.table.iter().copied().max().unwrap_or(0).max(0)
    }

    pub fn validate(&self) -> DistanceReport {
        validate_pseudo_distance(self)
    }

    fn worlds(&self) -> impl Iterator<Item = World> + Clone {
        (0..1usize << self.atoms).map(World::from_index)
    }

    /// `Min(α, w, d)`: the evidence worlds closest to `w`.
    pub fn min_worlds(&self, evidence: &WorldSet, w: World) -> Result<WorldSet> {
        let best = evidence
            .iter()
            .map(|v| self.get(v, w))
            .min()
            .ok_or(EdiError::EmptyEvidence)?;
        Ok(WorldSet::from_worlds(
            self.atoms,
            evidence.iter().filter(|&v| self.get(v, w) == best),
        ))
    }

    /// `w^α`: the least evidence world under distance from `w`, ties broken
    /// by ascending world index.
    pub fn li_closest(&self, evidence: &WorldSet, w: World) -> Result<World> {
        evidence
            .iter()
            .min_by_key(|&v| (self.get(v, w), v.index()))
            .ok_or(EdiError::EmptyEvidence)
    }

    /// Loads the JSON table format, mirroring unspecified symmetric pairs and
    /// defaulting the diagonal to 0. Tables that break any pseudo-distance
    /// condition other than faithfulness are rejected.
    pub fn from_json(value: &Value) -> Result<(Vocabulary, PseudoDistance)> {
        let bad = |m: String| EdiError::InvalidDistance(m);
        let atoms = value
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `atoms` array".into()))?
            .iter()
            .map(|a| a.as_str().map(str::to_string).ok_or_else(|| bad("atom names must be strings".into())))
            .collect::<Result<Vec<_>>>()?;
        let vocab = Vocabulary::new(atoms)?;
        let n = vocab.len();
        let size = vocab.world_count();
        let entries = value
            .get("entries")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing `entries` object".into()))?;
        let mut table: Vec<Option<i64>> = vec![None; size * size];
        for (key, raw) in entries {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| bad(format!("entry key `{key}` is not `w,w'`")))?;
            let w = World::from_truth_vector(a.trim(), n)?;
            let v = World::from_truth_vector(b.trim(), n)?;
            let text = match raw {
                Value::String(s) => s.clone(),
                Value::Number(num) => num.to_string(),
                _ => return Err(bad(format!("entry `{key}` must be an integer"))),
            };
            let q = parse_rational(&text)?;
            if !q.is_integer() {
                return Err(bad(format!("entry `{key}` must be an integer")));
            }
            let value: i64 = q
                .to_integer()
                .try_into()
                .map_err(|_| bad(format!("entry `{key}` out of range")))?;
            let slot = w.index() * size + v.index();
            if table[slot].is_some_and(|old| old != value) {
                return Err(bad(format!("entry `{key}` given twice with different values")));
            }
            table[slot] = Some(value);
        }
        let mut full = vec![0i64; size * size];
        for i in 0..size {
            for j in 0..size {
                full[i * size + j] = match (table[i * size + j], table[j * size + i]) {
                    (Some(x), _) => x,
                    (None, Some(y)) => y,
                    (None, None) if i == j => 0,
                    (None, None) => {
                        return Err(bad(format!(
                            "no entry for ({},{})",
                            World::from_index(i).truth_vector(n),
                            World::from_index(j).truth_vector(n)
                        )))
                    }
                };
            }
        }
        let d = PseudoDistance::from_table(n, full)?;
        let report = d.validate();
        if !report.is_pseudo_distance() {
            return Err(bad(report.to_string()));
        }
        Ok((vocab, d))
    }

    pub fn load(path: &Path) -> Result<(Vocabulary, PseudoDistance)> {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }
}

impl fmt::Debug for PseudoDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let size = 1usize << self.atoms;
        writeln!(f, "PseudoDistance(faithful={})", self.faithful)?;
        for i in 0..size {
            let row: Vec<String> = (0..size).map(|j| self.table[i * size + j].to_string()).collect();
            writeln!(f, "  {}: {}", World::from_index(i).truth_vector(self.atoms), row.join(" "))?;
        }
        Ok(())
    }
}

/// Per-condition outcome of [`validate_pseudo_distance`]: `None` when the
/// condition holds, otherwise the first violating tuple in index order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistanceReport {
    pub atoms: usize,
    pub non_negativity: Option<(World, World)>,
    pub identity: Option<World>,
    pub symmetry: Option<(World, World)>,
    pub triangle: Option<(World, World, World)>,
    pub faithfulness: Option<(World, World)>,
}

impl DistanceReport {
    /// The four conditions every pseudo-distance must meet.
    pub fn is_pseudo_distance(&self) -> bool {
        self.non_negativity.is_none()
            && self.identity.is_none()
            && self.symmetry.is_none()
            && self.triangle.is_none()
    }

    pub fn all_pass(&self) -> bool {
        self.is_pseudo_distance() && self.faithfulness.is_none()
    }
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tv = |w: World| w.truth_vector(self.atoms);
        let mut parts = Vec::new();
        if let Some((a, b)) = self.non_negativity {
            parts.push(format!("non-negativity fails at ({},{})", tv(a), tv(b)));
        }
        if let Some(a) = self.identity {
            parts.push(format!("identity fails at {}", tv(a)));
        }
        if let Some((a, b)) = self.symmetry {
            parts.push(format!("symmetry fails at ({},{})", tv(a), tv(b)));
        }
        if let Some((a, b, c)) = self.triangle {
            parts.push(format!("triangle inequality fails at ({},{},{})", tv(a), tv(b), tv(c)));
        }
        if let Some((a, b)) = self.faithfulness {
            parts.push(format!("faithfulness fails at ({},{})", tv(a), tv(b)));
        }
        if parts.is_empty() {
            write!(f, "all conditions hold")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Checks non-negativity, identity, symmetry, the triangle inequality
/// `d(a,c) ≤ d(a,b) + d(b,c)`, and faithfulness.
pub fn validate_pseudo_distance(d: &PseudoDistance) -> DistanceReport {
    let mut r = DistanceReport { atoms: d.atoms, ..Default::default() };
    for a in d.worlds() {
        if r.identity.is_none() && d.get(a, a) != 0 {
            r.identity = Some(a);
        }
        for b in d.worlds() {
            let ab = d.get(a, b);
            if r.non_negativity.is_none() && ab < 0 {
                r.non_negativity = Some((a, b));
            }
            if r.symmetry.is_none() && ab != d.get(b, a) {
                r.symmetry = Some((a, b));
            }
            if r.faithfulness.is_none() && a != b && ab <= 0 {
                r.faithfulness = Some((a, b));
            }
            if r.triangle.is_none() {
                for c in d.worlds() {
                    if d.get(a, c) > ab + d.get(b, c) {
                        r.triangle = Some((a, b, c));
                        break;
                    }
                }
            }
        }
    }
    r
}
