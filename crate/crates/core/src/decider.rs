//! Verdicts on minimality and total minimality of `G(n,F)`.
//!
//! Everything reduces to comparing `k = |μ_n(F)|` with `m = |μ_n(F̂)|` and to
//! the standing hypotheses (completeness, characteristic) of each group kind.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclotomic::mu_order;
use crate::error::Result;
use crate::fields::FieldDescriptor;
use crate::matrices::GroupKind;
use crate::witnesses::{central_obstruction, Witness};
use crate::DEFAULT_PRECISION;

/// Three-valued verdict flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub minimal: Tri,
    pub totally_minimal: Tri,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(minimal: Tri, totally_minimal: Tri, citation: &str) -> Self {
        Self { minimal, totally_minimal, citation: citation.into(), witness: None }
    }

    fn unknown(citation: &str) -> Self {
        Self::new(Tri::Unknown, Tri::Unknown, citation)
    }

    /// `totally minimal ⟹ minimal` and `not minimal ⟹ not totally minimal`,
    /// with a citation whenever a flag is decided.
    pub fn is_coherent(&self) -> bool {
        let implication = !(self.totally_minimal == Tri::Yes && self.minimal != Tri::Yes)
            && !(self.minimal == Tri::No && self.totally_minimal != Tri::No);
        let cited = (self.minimal == Tri::Unknown && self.totally_minimal == Tri::Unknown) || !self.citation.is_empty();
        implication && cited
    }

    /// Short label: `TM`, `M`, `NM`, or `?`.
    pub fn label(&self) -> &'static str {
        match (self.minimal, self.totally_minimal) {
            (_, Tri::Yes) => "TM",
            (Tri::Yes, _) => "M",
            (Tri::No, _) => "NM",
            _ => "?",
        }
    }
}

/// A query together with its verdict; the serialized record of the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub group: GroupKind,
    pub field: FieldDescriptor,
    pub n: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Every nontrivial subgroup of the cyclic group of order `m` meets its
/// order-`k` subgroup nontrivially iff every prime factor of `m` divides `k`.
pub fn prime_support_rule(m: u64, k: u64) -> bool {
    arith::prime_factors(m).into_iter().all(|q| k.is_multiple_of(q))
}

/// The verdict for `kind(n, field)`; `n = 0` is the only error.
pub fn decide(kind: GroupKind, field: &FieldDescriptor, n: u64) -> Result<Verdict> {
    let k = mu_order(field, n)?;
    let m = mu_order(&field.completion(), n)?;
    let complete = field.is_complete();
    let char2 = field.characteristic() == 2;
    let verdict = match kind {
        GroupKind::SL => decide_sl(field, n, k, m)?,
        GroupKind::PSL => {
            let sl = decide_sl(field, n, k, m)?;
            if complete {
                Verdict::new(Tri::Yes, Tri::Yes, "pro:pslntm")
            } else if sl.totally_minimal == Tri::Yes {
                Verdict::new(Tri::Yes, Tri::Yes, psl_citation(field, n))
            } else {
                Verdict::new(Tri::Unknown, Tri::No, "t:SLSMALL")
            }
        }
        GroupKind::SUT => {
            if char2 {
                Verdict::unknown("")
            } else if complete {
                Verdict::new(Tri::Yes, Tri::Unknown, "thm:sutmin")
            } else if n == 2 {
                Verdict::new(Tri::Yes, Tri::Unknown, "t1")
            } else if let Some(o) = central_obstruction(field, kind, n, DEFAULT_PRECISION)? {
                let mut v = Verdict::new(Tri::No, Tri::No, "ex:nmin");
                v.witness = Some(o.witness(true));
                v
            } else {
                Verdict::unknown("")
            }
        }
        GroupKind::SutModCenter => {
            if complete && !char2 {
                Verdict::new(Tri::Yes, Tri::Unknown, "thm:qbycen")
            } else {
                Verdict::unknown("")
            }
        }
        GroupKind::PGL => {
            if complete {
                Verdict::new(Tri::Yes, Tri::Yes, "thm:ptm")
            } else if field.is_real_subfield() && n % 2 == 1 {
                Verdict::new(Tri::Yes, Tri::Yes, "pro:sofr")
            } else if field.is_real_subfield() {
                Verdict::unknown("q:PGL-Q")
            } else {
                Verdict::unknown("")
            }
        }
        GroupKind::UI | GroupKind::Heisenberg => Verdict::unknown(""),
    };
    debug_assert!(verdict.is_coherent(), "{kind} {field} {n}: {verdict:?}");
    Ok(verdict)
}

fn psl_citation(field: &FieldDescriptor, n: u64) -> &'static str {
    if n == 2 || field.is_real_subfield() {
        "cor:tmsln"
    } else {
        "t:SLSMALL"
    }
}

fn decide_sl(field: &FieldDescriptor, n: u64, k: u64, m: u64) -> Result<Verdict> {
    let totally = k == m;
    let minimal = prime_support_rule(m, k);
    let citation = sl_citation(field, n, minimal);
    let mut v = Verdict::new(minimal.into(), totally.into(), citation);
    if !minimal {
        if let Some(o) = central_obstruction(field, GroupKind::SL, n, DEFAULT_PRECISION)? {
            v.witness = Some(o.witness(true));
        }
    }
    Ok(v)
}

fn sl_citation(field: &FieldDescriptor, n: u64, minimal: bool) -> &'static str {
    if *field == FieldDescriptor::GaussianRationals {
        return "ex:slnotmin";
    }
    if field.is_complete() {
        return "pro:pslntm";
    }
    if n == 2 || field.is_real_subfield() {
        return "cor:tmsln";
    }
    if let FieldDescriptor::RationalsPAdic(p) = field {
        if arith::gcd(n, p - 1) == 1 || (n == p - 1 && !minimal) {
            return "c:p-adic";
        }
    }
    if arith::is_power_of_two(n) {
        return "cor:p2";
    }
    if minimal {
        "t:SLSMALL"
    } else {
        "pro:minsl"
    }
}

/// Decides every `(kind, field, n)` in the cross product, kinds outermost
/// and `n` innermost.
pub fn decide_batch(kinds: &[GroupKind], fields: &[FieldDescriptor], ns: RangeInclusive<u64>) -> Result<Vec<Decision>> {
    let mut out = Vec::new();
    for &group in kinds {
        for field in fields {
            for n in ns.clone() {
                let verdict = decide(group, field, n)?;
                out.push(Decision { group, field: field.clone(), n, verdict });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn f(text: &str) -> FieldDescriptor {
        text.parse().unwrap()
    }

    fn flags(kind: GroupKind, field: &str, n: u64) -> (Tri, Tri) {
        let v = decide(kind, &f(field), n).unwrap();
        (v.minimal, v.totally_minimal)
    }

    #[test]
    fn documented_verdicts() {
        use GroupKind::*;
        use Tri::*;
        assert_eq!(flags(SL, "Q(i)", 4), (Yes, Yes));
        assert_eq!(flags(SL, "Q(i)", 8), (Yes, No));
        assert_eq!(flags(SL, "Q(i)", 3).0, No);
        assert_eq!(flags(SL, "Q@p=7", 6).0, No);
        assert_eq!(flags(SL, "Q@p=5", 3).1, Yes);
        for n in 1..=24 {
            assert_eq!(flags(SL, "Q", n).1, Yes);
        }
        for field in ["Q", "Q(i)", "Q@p=3", "Q@p=7", "R", "C", "Qp=5", "Fq((t))@q=9", "Sub(w=6)@Qp=7"] {
            assert_eq!(flags(SL, field, 2).1, Yes, "{field}");
        }
        for k in 0..6 {
            assert_eq!(flags(SL, "Q(i)", 1 << k).0, Yes);
        }
        assert_eq!(flags(SUT, "Q(i)", 6).0, No);
        assert_eq!(flags(SUT, "Qp=5", 5).0, Yes);
        assert_eq!(flags(PGL, "Qp=5", 4).1, Yes);
        assert_eq!(flags(PGL, "Q", 2), (Unknown, Unknown));
        assert_eq!(flags(PGL, "Q", 3), (Yes, Yes));
    }

    #[test]
    fn citations_and_witnesses() {
        let v = decide(GroupKind::SL, &f("Q@p=7"), 6).unwrap();
        assert_eq!(v.citation, "c:p-adic");
        assert!(v.witness.as_ref().is_some_and(|w| w.verified));
        assert_eq!(decide(GroupKind::SL, &f("Q@p=5"), 3).unwrap().citation, "c:p-adic");
        assert_eq!(decide(GroupKind::SL, &f("Q(i)"), 3).unwrap().citation, "ex:slnotmin");
        assert_eq!(decide(GroupKind::SL, &f("C"), 5).unwrap().citation, "pro:pslntm");
        assert_eq!(decide(GroupKind::SUT, &f("Q(i)"), 6).unwrap().citation, "ex:nmin");
        assert_eq!(decide(GroupKind::SUT, &f("Q(i)"), 2).unwrap().citation, "t1");
        assert_eq!(decide(GroupKind::PGL, &f("R"), 2).unwrap().citation, "thm:ptm");
        assert_eq!(decide(GroupKind::SutModCenter, &f("R"), 3).unwrap().citation, "thm:qbycen");
        assert_eq!(decide(GroupKind::SL, &f("Q@p=11"), 5).unwrap().citation, "pro:minsl");
    }

    #[test]
    fn char_two_boundaries() {
        assert_eq!(flags(GroupKind::SUT, "Fq((t))@q=4", 3), (Tri::Unknown, Tri::Unknown));
        assert_eq!(flags(GroupKind::SL, "Fq((t))@q=4", 8), (Tri::Yes, Tri::Yes));
        assert_eq!(flags(GroupKind::PSL, "Fq((t))@q=4", 3), (Tri::Yes, Tri::Yes));
    }

    #[test]
    fn psl_follows_sl_totally() {
        for field in ["Q", "Q(i)", "Q@p=7", "Q@p=13", "Sub(w=2)@C"] {
            for n in 1..=16 {
                let sl = decide(GroupKind::SL, &f(field), n).unwrap();
                let psl = decide(GroupKind::PSL, &f(field), n).unwrap();
                assert_eq!(sl.totally_minimal, psl.totally_minimal, "{field} {n}");
                if psl.totally_minimal == Tri::No {
                    assert_eq!(psl.minimal, Tri::Unknown);
                }
            }
        }
    }

    fn sample_fields() -> Vec<FieldDescriptor> {
        [
            "Q",
            "Q(i)",
            "R",
            "C",
            "Q@p=2",
            "Q@p=3",
            "Q@p=7",
            "Q@p=13",
            "Qp=2",
            "Qp=5",
            "Qp=7",
            "Fq((t))@q=4",
            "Fq((t))@q=9",
            "Sub(w=6)@Qp=7",
            "Sub(w=2)@C",
            "Sub(all)@C",
        ]
        .iter()
        .map(|s| f(s))
        .collect()
    }

    #[test]
    fn coherence_everywhere() {
        for d in decide_batch(&GroupKind::ALL, &sample_fields(), 1..=24).unwrap() {
            assert!(d.verdict.is_coherent(), "{d:?}");
            let k = mu_order(&d.field, d.n).unwrap();
            let m = mu_order(&d.field.completion(), d.n).unwrap();
            assert_eq!(m % k, 0);
        }
    }

    #[test]
    fn complete_fields_are_totally_minimal() {
        for field in sample_fields().into_iter().filter(FieldDescriptor::is_complete) {
            for n in 1..=24 {
                assert_eq!(decide(GroupKind::SL, &field, n).unwrap().totally_minimal, Tri::Yes);
            }
        }
    }

    #[test]
    fn gaussian_trichotomy_recomputed() {
        let mut by_key = std::collections::BTreeMap::new();
        for n in 1..=200u64 {
            let v = decide(GroupKind::SL, &FieldDescriptor::GaussianRationals, n).unwrap();
            let expected = if [1, 2, 4].contains(&n) {
                "TM"
            } else if n.is_power_of_two() {
                "M"
            } else {
                "NM"
            };
            assert_eq!(v.label(), expected, "n = {n}");
            let key = (arith::gcd(n, 4) == n, arith::prime_factors(n));
            assert_eq!(*by_key.entry(key).or_insert(v.label()), v.label(), "n = {n}");
        }
    }

    /// Subgroups of `Z/m` are generated by single elements; compare every
    /// nontrivial one against the unique order-`k` subgroup.
    fn brute_force_meets(m: u64, k: u64) -> bool {
        let subgroup = |g: u64| -> BTreeSet<u64> { (0..m).map(|j| (g * j) % m).collect() };
        let order_k = subgroup(m / k);
        (1..m).all(|g| subgroup(g).iter().any(|x| *x != 0 && order_k.contains(x)))
    }

    #[test]
    fn prime_support_matches_subgroup_oracle() {
        for m in 1..=64u64 {
            for k in (1..=m).filter(|k| m % k == 0) {
                assert_eq!(prime_support_rule(m, k), brute_force_meets(m, k), "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn batch_shape() {
        let rows = decide_batch(&[GroupKind::SL], &[FieldDescriptor::GaussianRationals], 1..=16).unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().enumerate().all(|(i, d)| d.n == i as u64 + 1));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = decide_batch(&[GroupKind::SL], &[FieldDescriptor::Reals], 1..=0).unwrap();
        assert!(empty.is_empty());
        let reals = decide_batch(&[GroupKind::SL], &[FieldDescriptor::Reals], 1..=8).unwrap();
        assert!(reals.iter().all(|d| d.verdict.label() == "TM"));
    }

    #[test]
    fn json_schema_round_trip() {
        let d = decide_batch(&[GroupKind::SUT], &[FieldDescriptor::GaussianRationals], 6..=6).unwrap().remove(0);
        let json = serde_json::to_value(&d).unwrap();
        let keys: BTreeSet<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            ["citation", "field", "group", "minimal", "n", "totallyMinimal", "witness"].map(String::from).into()
        );
        assert_eq!(json["minimal"], "no");
        assert_eq!(json["group"], "SUT");
        assert_eq!(json["field"], "Q(i)");
        let back: Decision = serde_json::from_value(json).unwrap();
        assert_eq!(back, d);
    }
}
