//! Concrete right LCM semigroups: Baumslag-Solitar monoids, free and easy
//! Artin monoids, `N x| P`, self-similar actions, dilation matrices, shifts
//! over finite fields and a Zappa-Szep combinator.
//!
//! [`build`] turns a [`FamilySpec`] into a [`Family`], which implements
//! [`RightLcmSemigroup`] and exposes the few family-specific operations.

mod bs;
mod dilation;
mod ffs;
mod free;
pub mod gf;
pub mod machine;
mod nsp;
mod selfsimilar;
pub mod snf;
mod spec;
mod words;
mod zs;

use rlcm_core::{
    ClosedForms, Divisibility, Factorization, FamilyTag, LcmOutcome, Level, Result,
    RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};
use serde::Serialize;

pub use bs::BaumslagSolitar;
pub use dilation::Dilation;
pub use ffs::FiniteFieldShift;
pub use free::EasyArtin;
pub use nsp::NSemidirectP;
pub use selfsimilar::SelfSimilar;
pub use spec::{BuildError, FamilySpec, MealyAutomaton, MealyState};
pub use zs::ZappaSzep;

/// One of the structural conditions required of an algebraic dynamical system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdsCondition {
    pub name: &'static str,
    pub holds: bool,
    pub note: String,
}

impl AdsCondition {
    pub fn new(name: &'static str, holds: bool, note: impl Into<String>) -> Self {
        AdsCondition {
            name,
            holds,
            note: note.into(),
        }
    }
}

/// Descriptions of `S_c` and `S_ci` for a built instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreData {
    pub core: String,
    pub core_irreducible: String,
}

#[derive(Debug, Clone)]
pub enum Family {
    BaumslagSolitar(BaumslagSolitar),
    Free(EasyArtin),
    NSemidirectP(NSemidirectP),
    SelfSimilar(SelfSimilar),
    Dilation(Dilation),
    FiniteFieldShift(FiniteFieldShift),
    ZappaSzep(ZappaSzep),
}

pub fn build(spec: &FamilySpec) -> std::result::Result<Family, BuildError> {
    Ok(match spec {
        FamilySpec::FreeMonoid { m } => Family::Free(EasyArtin::free_monoid(*m)?),
        FamilySpec::EasyArtin { m, n } => {
            if *m < 2 {
                return Err(BuildError::invalid("m", "m >= 2"));
            }
            Family::Free(EasyArtin::new(*m, *n)?)
        }
        FamilySpec::FreeAbelian { rank } => Family::Free(EasyArtin::free_abelian(*rank)?),
        FamilySpec::BaumslagSolitar { c, d } => {
            Family::BaumslagSolitar(BaumslagSolitar::new(*c, *d)?)
        }
        FamilySpec::NSemidirectP { primes } => Family::NSemidirectP(NSemidirectP::new(primes)?),
        FamilySpec::SelfSimilar { automaton } => Family::SelfSimilar(SelfSimilar::new(automaton)?),
        FamilySpec::DilationMatrix { d, a } => Family::Dilation(Dilation::new(*d, a)?),
        FamilySpec::FiniteFieldShift { q, f_degree, f } => {
            Family::FiniteFieldShift(FiniteFieldShift::new(*q, *f_degree, f.as_deref())?)
        }
        FamilySpec::ZappaSzep {
            u,
            a,
            action,
            restriction,
        } => Family::ZappaSzep(ZappaSzep::new(u, a, action, restriction)?),
    })
}

impl Family {
    pub fn inner(&self) -> &dyn RightLcmSemigroup {
        match self {
            Family::BaumslagSolitar(x) => x,
            Family::Free(x) => x,
            Family::NSemidirectP(x) => x,
            Family::SelfSimilar(x) => x,
            Family::Dilation(x) => x,
            Family::FiniteFieldShift(x) => x,
            Family::ZappaSzep(x) => x,
        }
    }

    /// `a(u)`, read off as the transversal part of `a u`.
    pub fn zs_action(
        &self,
        a: &SemigroupElement,
        u: &SemigroupElement,
    ) -> Result<SemigroupElement> {
        self.require_core(a)?;
        Ok(self.factor(&self.multiply(a, u)?)?.transversal_part)
    }

    /// `a|_u`, read off as the core part of `a u`.
    pub fn zs_restriction(
        &self,
        a: &SemigroupElement,
        u: &SemigroupElement,
    ) -> Result<SemigroupElement> {
        self.require_core(a)?;
        Ok(self.factor(&self.multiply(a, u)?)?.core_part)
    }

    fn require_core(&self, a: &SemigroupElement) -> Result<()> {
        if self.is_core(a)? {
            Ok(())
        } else {
            Err(SemigroupError::Precondition(format!(
                "{} is not a core element",
                self.format_element(a)
            )))
        }
    }

    pub fn core_data(&self) -> CoreData {
        let (core, ci) = match self {
            Family::BaumslagSolitar(_) => (
                "{1} ⋈ <b>: the powers of b",
                "nonempty words over {b^j a : j < d}",
            ),
            Family::Free(f) if f.rank() == 0 => ("{1}", "nonempty words"),
            Family::Free(_) => ("{1} x N^n", "nonempty words x {0}"),
            Family::NSemidirectP(_) => ("N x {1}", "(m, p) with p > 1 and m < p"),
            Family::SelfSimilar(_) => ("{ε} ⋈ G, isomorphic to G", "nonempty words ⋈ G"),
            Family::Dilation(_) => ("Z^d x {0} = S*", "(m, n) with n > 0"),
            Family::FiniteFieldShift(_) => ("F_q[t] x {0} = S*", "(g, n) with n > 0"),
            Family::ZappaSzep(_) => ("{1} ⋈ A", "nonempty words ⋈ {0}"),
        };
        CoreData {
            core: core.into(),
            core_irreducible: ci.into(),
        }
    }

    /// The intersection of two principal right ideals of an algebraic dynamical system.
    pub fn ads_ideal_test(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        match self {
            Family::Dilation(_) | Family::FiniteFieldShift(_) => self.right_lcm(s, t),
            _ => Err(SemigroupError::Precondition(
                "not an algebraic dynamical system".into(),
            )),
        }
    }

    pub fn ads_conditions(&self) -> Option<Vec<AdsCondition>> {
        match self {
            Family::Dilation(d) => Some(d.ads_conditions()),
            Family::FiniteFieldShift(f) => Some(f.ads_conditions()),
            _ => None,
        }
    }

    pub fn selfsimilar_image(&self, g: &SemigroupElement, w: &[u32]) -> Result<Vec<u32>> {
        match self {
            Family::SelfSimilar(s) => s.image(g, w),
            _ => Err(SemigroupError::Precondition(
                "not a self-similar family".into(),
            )),
        }
    }

    pub fn selfsimilar_section(&self, g: &SemigroupElement, w: &[u32]) -> Result<SemigroupElement> {
        match self {
            Family::SelfSimilar(s) => s.section(g, w),
            _ => Err(SemigroupError::Precondition(
                "not a self-similar family".into(),
            )),
        }
    }
}

impl RightLcmSemigroup for Family {
    fn tag(&self) -> FamilyTag {
        self.inner().tag()
    }

    fn name(&self) -> String {
        self.inner().name()
    }

    fn identity(&self) -> SemigroupElement {
        self.inner().identity()
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        self.inner().multiply(s, t)
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        self.inner().right_lcm(s, t)
    }

    fn left_divide(
        &self,
        t: &SemigroupElement,
        s: &SemigroupElement,
        depth: u32,
    ) -> Result<Divisibility> {
        self.inner().left_divide(t, s, depth)
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        self.inner().scale(s)
    }

    fn is_core(&self, s: &SemigroupElement) -> Result<bool> {
        self.inner().is_core(s)
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool> {
        self.inner().is_unit(s)
    }

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization> {
        self.inner().factor(s)
    }

    fn core_equivalent(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<bool> {
        self.inner().core_equivalent(s, t)
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        self.inner().transversal(n)
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        self.inner().enumerate_core(max_weight)
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        self.inner().core_weight(a)
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        self.inner().irreducible_scales()
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        self.inner().generators()
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        self.inner().parse_element(input)
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        self.inner().format_element(s)
    }

    fn closed_forms(&self) -> ClosedForms {
        self.inner().closed_forms()
    }

    fn scale_values(&self, bound: u64) -> Vec<u64> {
        self.inner().scale_values(bound)
    }

    fn levels(&self, depth: u64) -> Result<Vec<Level>> {
        self.inner().levels(depth)
    }
}
