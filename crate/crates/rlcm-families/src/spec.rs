use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameters of a family, validated by [`crate::build`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    FreeMonoid {
        m: u32,
    },
    EasyArtin {
        m: u32,
        n: u32,
    },
    /// `N^rank`; only useful as the right factor of a Zappa-Szep product.
    FreeAbelian {
        rank: u32,
    },
    BaumslagSolitar {
        c: u64,
        d: u64,
    },
    NSemidirectP {
        primes: Vec<u64>,
    },
    SelfSimilar {
        automaton: MealyAutomaton,
    },
    DilationMatrix {
        d: usize,
        a: Vec<Vec<i64>>,
    },
    FiniteFieldShift {
        q: u32,
        f_degree: u32,
        /// Coefficients of a monic `f`, lowest first; defaults to `t^f_degree`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<Vec<u32>>,
    },
    ZappaSzep {
        u: Box<FamilySpec>,
        a: Box<FamilySpec>,
        /// `action[i][x]`: image of letter `x` under the `i`-th generator of A.
        action: Vec<Vec<u32>>,
        /// `restriction[i][x]`: exponent vector of the restriction at `x`.
        restriction: Vec<Vec<Vec<u64>>>,
    },
}

/// A Mealy automaton over the alphabet `{0, .., alphabet-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MealyAutomaton {
    pub alphabet: u32,
    pub states: Vec<MealyState>,
    #[serde(default = "default_cap")]
    pub closure_cap: usize,
    #[serde(default = "default_bisimulation_depth")]
    pub bisimulation_depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MealyState {
    pub name: String,
    /// `output[x]` is the letter written on input `x`.
    pub output: Vec<u32>,
    /// `next[x]` names the state entered after reading `x`.
    pub next: Vec<String>,
}

fn default_cap() -> usize {
    4096
}

fn default_bisimulation_depth() -> u32 {
    12
}

impl MealyAutomaton {
    /// Binary odometer: `a` adds one with carry, `e` is the identity.
    pub fn adding_machine() -> Self {
        MealyAutomaton {
            alphabet: 2,
            states: vec![
                MealyState {
                    name: "a".into(),
                    output: vec![1, 0],
                    next: vec!["e".into(), "a".into()],
                },
                MealyState {
                    name: "e".into(),
                    output: vec![0, 1],
                    next: vec!["e".into(), "e".into()],
                },
            ],
            closure_cap: default_cap(),
            bisimulation_depth: default_bisimulation_depth(),
        }
    }
}

impl FamilySpec {
    pub fn adding_machine() -> Self {
        FamilySpec::SelfSimilar {
            automaton: MealyAutomaton::adding_machine(),
        }
    }

    /// `BS(c,d)+` presented as the free monoid on `d` letters twisted by `N`.
    pub fn baumslag_solitar_as_zappa_szep(c: u64, d: u64) -> Self {
        let d32 = d as u32;
        let action = vec![(0..d32).map(|j| (j + 1) % d32).collect()];
        let restriction = vec![(0..d)
            .map(|j| vec![if j + 1 == d { c } else { 0 }])
            .collect()];
        FamilySpec::ZappaSzep {
            u: Box::new(FamilySpec::FreeMonoid { m: d32 }),
            a: Box::new(FamilySpec::FreeAbelian { rank: 1 }),
            action,
            restriction,
        }
    }

    /// Stable text used to fingerprint the built instance.
    pub fn fingerprint(&self) -> String {
        format!("{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("invalid parameter `{field}`: {constraint}")]
    Invalid { field: String, constraint: String },

    #[error("zappa-szep factor A is not left reversible: {0}")]
    NotLeftReversible(String),

    #[error("zappa-szep table incomplete: {0}")]
    IncompleteTable(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

impl BuildError {
    pub fn invalid(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        BuildError::Invalid {
            field: field.into(),
            constraint: constraint.into(),
        }
    }
}
