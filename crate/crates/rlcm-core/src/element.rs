use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

/// Discriminant of the family an element was built by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    FreeMonoid,
    EasyArtin,
    BaumslagSolitar,
    NSemidirectP,
    SelfSimilar,
    DilationMatrix,
    FiniteFieldShift,
    ZappaSzep,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::FreeMonoid => "free-monoid",
            FamilyKind::EasyArtin => "easy-artin",
            FamilyKind::BaumslagSolitar => "baumslag-solitar",
            FamilyKind::NSemidirectP => "n-semidirect-p",
            FamilyKind::SelfSimilar => "self-similar",
            FamilyKind::DilationMatrix => "dilation-matrix",
            FamilyKind::FiniteFieldShift => "finite-field-shift",
            FamilyKind::ZappaSzep => "zappa-szep",
        };
        f.write_str(s)
    }
}

/// Identifies one built instance: the family kind plus a fingerprint of its
/// parameters, so elements of BS(2,3) are rejected by BS(3,3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyTag {
    pub kind: FamilyKind,
    pub instance: u64,
}

impl FamilyTag {
    /// Tag whose instance part is the FNV-1a hash of `parameters`.
    pub fn new(kind: FamilyKind, parameters: &str) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in parameters.as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        FamilyTag { kind, instance: h }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{:016x}", self.kind, self.instance)
    }
}

/// A minimal Mealy machine with distinguished initial state 0.
///
/// `perms[q][x]` is the output letter of state `q` on input `x` and
/// `next[q][x]` the state reached. Families keep these in a canonical
/// numbering, so structural equality is equality of the represented maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Machine {
    pub perms: Vec<Vec<u32>>,
    pub next: Vec<Vec<u32>>,
}

impl Machine {
    pub fn identity(alphabet: usize) -> Self {
        Machine {
            perms: vec![(0..alphabet as u32).collect()],
            next: vec![vec![0; alphabet]],
        }
    }

    pub fn states(&self) -> usize {
        self.perms.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perms.len() == 1
            && self.perms[0]
                .iter()
                .enumerate()
                .all(|(i, &y)| i as u32 == y)
    }
}

/// Canonical normal forms, one variant per element shape.
///
/// The derived order is the documented total order on payloads: variants
/// compare field by field in declaration order. Within a family the
/// transversal-reduced representative of a unit orbit is always the least one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Payload {
    /// A word over a finite alphabet followed by exponents of commuting core generators.
    Word {
        letters: Vec<u32>,
        exponents: Vec<u64>,
    },
    /// The pair `(m, p)` of `N x| P`.
    Shift { m: u64, p: u64 },
    /// `(m, n)` with `m` in `Z^d`.
    Lattice { offset: Vec<i64>, power: u32 },
    /// `(g, n)` with `g` a polynomial over a finite field, lowest coefficient first.
    Polynomial { coeffs: Vec<u32>, power: u32 },
    /// `(w, g)` with `w` a word over the automaton alphabet and `g` a minimal machine.
    Machine {
        letters: Vec<u32>,
        section: Arc<Machine>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemigroupElement {
    tag: FamilyTag,
    payload: Payload,
    #[serde(skip)]
    scale: OnceLock<u64>,
}

impl SemigroupElement {
    pub fn new(tag: FamilyTag, payload: Payload) -> Self {
        SemigroupElement {
            tag,
            payload,
            scale: OnceLock::new(),
        }
    }

    pub fn with_scale(tag: FamilyTag, payload: Payload, scale: u64) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(scale);
        SemigroupElement {
            tag,
            payload,
            scale: cell,
        }
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn cached_scale(&self) -> Option<u64> {
        self.scale.get().copied()
    }

    /// Returns the cached scale, computing and storing it on first use.
    pub fn scale_with(&self, f: impl FnOnce(&Payload) -> u64) -> u64 {
        *self.scale.get_or_init(|| f(&self.payload))
    }
}

impl PartialEq for SemigroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.payload == other.payload
    }
}

impl Eq for SemigroupElement {}

impl Hash for SemigroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tag.hash(state);
        self.payload.hash(state);
    }
}

impl PartialOrd for SemigroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SemigroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag
            .cmp(&other.tag)
            .then_with(|| self.payload.cmp(&other.payload))
    }
}
