use std::collections::BTreeSet;

use rlcm_core::{Divisibility, LcmOutcome, RightLcmSemigroup, SemigroupElement};
use serde::Serialize;

use crate::rep::{Entry, Operator, TruncatedRep};
use crate::{RepError, Result};

/// Transversal levels of irreducible scale with at most this many members
/// join the generators in the relation checks.
const SMALL_LEVEL: usize = 8;

/// `d_n = 1 - Σ_{f ∈ T_n} e_{fS}` as a diagonal over the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectProjection {
    pub n: u64,
    /// Diagonal entries; a sum of range projections exceeding 1 shows up as a negative entry.
    pub diagonal: Vec<i64>,
}

impl DefectProjection {
    pub fn is_projection(&self) -> bool {
        self.diagonal.iter().all(|d| *d == 0 || *d == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.diagonal.iter().all(|d| *d == 0)
    }

    /// Entrywise square, which is `d_n^2` for a diagonal matrix.
    pub fn squared(&self) -> Vec<i64> {
        self.diagonal.iter().map(|d| d * d).collect()
    }
}

pub fn defect_projection(
    sem: &dyn RightLcmSemigroup,
    rep: &TruncatedRep,
    n: u64,
) -> Result<DefectProjection> {
    let level = sem.transversal(n)?;
    let mut diagonal = Vec::with_capacity(rep.len());
    for k in 0..rep.len() {
        let x = rep.element(sem, k)?;
        let mut d = 1i64;
        for f in &level {
            match sem.left_divide(f, &x, 8)? {
                Divisibility::Quotient { .. } => d -= 1,
                Divisibility::NotDivisible => {}
                Divisibility::DepthExhausted { depth } => {
                    return Err(RepError::Precondition(format!(
                        "divisibility of {} by {} undecided at depth {depth}",
                        rep.describe(sem, k),
                        sem.format_element(f)
                    )))
                }
            }
        }
        diagonal.push(d);
    }
    Ok(DefectProjection { n, diagonal })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    /// Columns where both sides were decided inside the truncation.
    pub checked: usize,
    /// Interior columns skipped because an intermediate image left the truncation.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl RelationCheck {
    fn new(name: impl Into<String>) -> Self {
        RelationCheck {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn compare(&mut self, column: String, lhs: Entry, rhs: Entry) {
        if lhs == Entry::Outside || rhs == Entry::Outside {
            self.skipped += 1;
            return;
        }
        self.checked += 1;
        if lhs != rhs {
            self.failures
                .push(format!("{column}: {lhs:?} against {rhs:?}"));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub basis_size: usize,
    pub interior_size: usize,
    pub elements: Vec<String>,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(RelationCheck::holds)
    }

    pub fn check(&self, name: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The generators plus the members of small irreducible levels.
fn test_elements(sem: &dyn RightLcmSemigroup) -> Result<Vec<SemigroupElement>> {
    let mut out: BTreeSet<SemigroupElement> = sem.generators().into_iter().collect();
    for p in sem.irreducible_scales() {
        let level = sem.transversal(p)?;
        if level.len() <= SMALL_LEVEL {
            out.extend(level);
        }
    }
    Ok(out.into_iter().collect())
}

/// Exact checks on interior columns:
///
/// * `V_1` is the identity and every `V_s` is a partial permutation;
/// * `V_s^*` is the transpose of `V_s`;
/// * `V_s^* V_s = 1`;
/// * `V_s^* V_t = V_{s'} V_{t'}^*` where `s s' = t t'` is the right LCM, or zero when `sS ∩ tS = ∅`;
/// * `d_n` is an idempotent, `d_1 = 0`, and `V_a d_n = d_n V_a` for core `a`.
pub fn verify_relations(sem: &dyn RightLcmSemigroup, rep: &TruncatedRep) -> Result<RelationReport> {
    let elements = test_elements(sem)?;
    let interior = rep.interior_indices();
    let col = |k: usize| rep.describe(sem, k);
    let mut checks = Vec::new();

    let id = rep.operator(sem, &sem.identity())?;
    let mut c = RelationCheck::new("identity");
    for k in 0..rep.len() {
        c.compare(col(k), id.columns[k], Entry::Basis(k));
    }
    checks.push(c);

    let mut ops: Vec<(Operator, Operator)> = Vec::new();
    for s in &elements {
        ops.push((rep.operator(sem, s)?, rep.adjoint(sem, s)?));
    }

    let mut perm = RelationCheck::new("partial-permutation");
    let mut adj = RelationCheck::new("adjoint");
    let mut iso = RelationCheck::new("isometry");
    for (op, star) in &ops {
        let mut seen = vec![false; rep.len()];
        for (j, e) in op.columns.iter().enumerate() {
            if let Entry::Basis(i) = e {
                perm.checked += 1;
                if std::mem::replace(&mut seen[*i], true) {
                    perm.failures
                        .push(format!("{}: row {} hit twice", op.label, col(*i)));
                }
                adj.compare(
                    format!("{} at {}", star.label, col(*i)),
                    star.columns[*i],
                    Entry::Basis(j),
                );
            }
        }
        for (i, e) in star.columns.iter().enumerate() {
            if let Entry::Basis(j) = e {
                adj.compare(
                    format!("{} at {}", op.label, col(*j)),
                    op.columns[*j],
                    Entry::Basis(i),
                );
            }
        }
        for &k in &interior {
            let lhs = star.apply(op.columns[k]);
            iso.compare(
                format!("{}{} at {}", star.label, op.label, col(k)),
                lhs,
                Entry::Basis(k),
            );
        }
    }
    checks.extend([perm, adj, iso]);

    let mut lcm = RelationCheck::new("lcm");
    for (i, s) in elements.iter().enumerate() {
        for (j, t) in elements.iter().enumerate() {
            let (star_s, op_t) = (&ops[i].1, &ops[j].0);
            let outcome = sem.right_lcm(s, t)?;
            let sides = match &outcome {
                LcmOutcome::Disjoint => None,
                LcmOutcome::Lcm {
                    left_complement,
                    right_complement,
                    ..
                } => Some((
                    rep.operator(sem, left_complement)?,
                    rep.adjoint(sem, right_complement)?,
                )),
            };
            for &k in &interior {
                let lhs = star_s.apply(op_t.columns[k]);
                let rhs = match &sides {
                    None => Entry::Zero,
                    Some((v, w)) => v.apply(w.columns[k]),
                };
                lcm.compare(
                    format!("{}{} at {}", star_s.label, op_t.label, col(k)),
                    lhs,
                    rhs,
                );
            }
        }
    }
    checks.push(lcm);

    let scales = sem.scale_values(rep.level_cap);
    let mut projections = Vec::new();
    let mut idem = RelationCheck::new("defect-idempotent");
    let mut d1 = RelationCheck::new("defect-one-vanishes");
    for &n in &scales {
        let d = defect_projection(sem, rep, n)?;
        for (k, (x, x2)) in d.diagonal.iter().zip(d.squared()).enumerate() {
            idem.checked += 1;
            if !(*x == 0 || *x == 1) || *x != x2 {
                idem.failures.push(format!("d_{n} at {}: {x}", col(k)));
            }
            if n == 1 {
                d1.checked += 1;
                if *x != 0 {
                    d1.failures.push(format!("d_1 at {}", col(k)));
                }
            }
        }
        projections.push(d);
    }
    checks.extend([idem, d1]);

    let mut commute = RelationCheck::new("defect-commutes-with-core");
    let core: Vec<SemigroupElement> = sem
        .enumerate_core(rep.core_cap)?
        .into_iter()
        .filter(|a| *a != sem.identity())
        .collect();
    for a in &core {
        let op = rep.operator(sem, a)?;
        for d in &projections {
            for &k in &interior {
                // column k of V_a d_n is d_n[k] V_a e_k; of d_n V_a it is d_n[V_a k] V_a e_k
                let image = op.columns[k];
                let (lhs, rhs) = match image {
                    Entry::Basis(i) => (
                        if d.diagonal[k] == 1 {
                            image
                        } else {
                            Entry::Zero
                        },
                        if d.diagonal[i] == 1 {
                            image
                        } else {
                            Entry::Zero
                        },
                    ),
                    other => (other, other),
                };
                commute.compare(format!("{} d_{} at {}", op.label, d.n, col(k)), lhs, rhs);
            }
        }
    }
    checks.push(commute);

    Ok(RelationReport {
        basis_size: rep.len(),
        interior_size: interior.len(),
        elements: elements.iter().map(|s| sem.format_element(s)).collect(),
        checks,
    })
}
