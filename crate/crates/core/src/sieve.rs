//! Structural sieves applied before any constraint solving.

use serde::{Deserialize, Serialize};

use crate::groups::subgroups::{c2_complement, normal_subgroups, subgroup_as_group};
use crate::groups::{structure_predicates, ClassData, GroupData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SieveReason {
    Nilpotent,
    CyclicByAbelian,
    DerivedInSylow,
    #[serde(rename = "C2-times-known")]
    C2TimesKnown,
    MetabelianCaseA,
    Passes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveVerdict {
    pub eliminated: bool,
    pub reason: SieveReason,
    /// Name of the known group H when `G ≅ C2 × H`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_factor: Option<String>,
}

impl SieveVerdict {
    fn from_reason(reason: SieveReason) -> Self {
        SieveVerdict { eliminated: reason != SieveReason::Passes, reason, known_factor: None }
    }
}

/// Hooks the sieve cannot decide on its own.
pub struct SieveContext<'a> {
    /// Returns the name of a group known to satisfy the conjecture that is isomorphic to `h`.
    pub known_good: &'a dyn Fn(&GroupData) -> Option<String>,
    /// Optional metabelian criterion; off unless supplied.
    pub metabelian_case_a: Option<&'a dyn Fn(&GroupData) -> bool>,
}

impl Default for SieveContext<'_> {
    fn default() -> Self {
        SieveContext { known_good: &|_| None, metabelian_case_a: None }
    }
}

pub fn sieve_group(g: &GroupData, cd: &ClassData, ctx: &SieveContext<'_>) -> SieveVerdict {
    let flags = structure_predicates(g, cd);
    if flags.nilpotent {
        return SieveVerdict::from_reason(SieveReason::Nilpotent);
    }
    if flags.cyclic_by_abelian {
        return SieveVerdict::from_reason(SieveReason::CyclicByAbelian);
    }
    if flags.derived_in_sylow {
        return SieveVerdict::from_reason(SieveReason::DerivedInSylow);
    }
    if flags.c2_direct_factor.is_some() {
        let normals = normal_subgroups(g, cd);
        if let Some(h) = c2_complement(g, &normals) {
            let hg = subgroup_as_group(g, &h, &format!("{}:H", g.name())).expect("subgroup of an enumerated group");
            if let Some(name) = (ctx.known_good)(&hg) {
                return SieveVerdict { eliminated: true, reason: SieveReason::C2TimesKnown, known_factor: Some(name) };
            }
        }
    }
    if let Some(pred) = ctx.metabelian_case_a {
        if pred(g) {
            return SieveVerdict::from_reason(SieveReason::MetabelianCaseA);
        }
    }
    SieveVerdict::from_reason(SieveReason::Passes)
}
