//! Cross-checks of the structured algorithms against the table oracle.

use std::collections::BTreeSet;

use crate::classify::{
    self, count_closed, count_closed_of_size, count_strongly_normal, count_strongly_normal_of_size,
    enumerate_closed, materialize, recognize, ClosedDescriptor,
};
use crate::ea2::{to_table, ElementSet, Signature, SubsetStats, MAX_TABLE_RANK};
use crate::error::{guard, Result};
use crate::kernel::{self, Subset, TableHypergroup, MAX_MAP_ORDER};

pub const MAX_VERIFY_RANK: u32 = MAX_TABLE_RANK;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureReport {
    pub signature: Signature,
    pub checks: Vec<CheckOutcome>,
}

impl SignatureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub signatures: Vec<SignatureReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.signatures.iter().all(SignatureReport::passed)
    }

    pub fn check_count(&self) -> usize {
        self.signatures.iter().map(|s| s.checks.len()).sum()
    }

    pub fn failure_count(&self) -> usize {
        self.signatures
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| !c.passed)
            .count()
    }
}

/// Runs every check for every signature of rank at most `max_p`.
pub fn verify(max_p: u32) -> Result<VerifyReport> {
    verify_with(max_p, to_table)
}

/// Like [`verify`], with the oracle table supplied by `build`.
pub fn verify_with<F>(max_p: u32, build: F) -> Result<VerifyReport>
where
    F: Fn(Signature) -> Result<TableHypergroup>,
{
    guard("verify rank", MAX_VERIFY_RANK as u64, max_p as u64)?;
    let mut report = VerifyReport::default();
    for p in 0..=max_p {
        for sig in Signature::all_of_rank(p) {
            let table = build(sig)?;
            report.signatures.push(verify_signature(sig, &table));
        }
    }
    Ok(report)
}

/// The table of `sig` with one product entry damaged.
pub fn corrupted_table(sig: Signature) -> Result<TableHypergroup> {
    let good = to_table(sig)?;
    let n = good.order();
    TableHypergroup::from_fn(n, 0, (0..n).collect(), |a, b| {
        if n == 1 {
            Vec::new()
        } else if a == 1 && b == 1 {
            vec![1]
        } else {
            good.product(a, b).to_vec()
        }
    })
}

type Outcome = Result<Option<String>>;

fn outcome(name: &'static str, result: Outcome) -> CheckOutcome {
    match result {
        Ok(None) => CheckOutcome {
            name,
            passed: true,
            detail: String::new(),
        },
        Ok(Some(detail)) => CheckOutcome {
            name,
            passed: false,
            detail,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn mismatch<T: std::fmt::Debug>(what: &str, structured: T, oracle: T) -> Option<String> {
    Some(format!(
        "{what}: structured {structured:?}, oracle {oracle:?}"
    ))
}

pub(crate) fn to_subset(set: &ElementSet) -> Subset {
    Subset::from_indices(set.supports().map(|m| m as usize))
}

fn verify_signature(sig: Signature, t: &TableHypergroup) -> SignatureReport {
    let mut checks = Vec::new();
    let axioms = kernel::validate_axioms(t);
    let axioms_ok = axioms.passed;
    checks.push(outcome(
        "axioms",
        Ok((!axioms_ok).then(|| format!("{:?}", axioms.violations))),
    ));
    if !axioms_ok {
        return SignatureReport {
            signature: sig,
            checks,
        };
    }
    let oracle = match kernel::brute_closed_subsets(t) {
        Ok(list) => list,
        Err(e) => {
            checks.push(outcome("closed-enumeration", Err(e)));
            return SignatureReport {
                signature: sig,
                checks,
            };
        }
    };
    let ctx = Context { sig, t, oracle };
    checks.push(outcome("closed-enumeration", ctx.enumeration()));
    checks.push(outcome(
        "strongly-normal-filter",
        ctx.strongly_normal_filter(),
    ));
    checks.push(outcome("counts", ctx.counts()));
    checks.push(outcome("counts-by-size", ctx.counts_by_size()));
    checks.push(outcome("isomorphism", ctx.isomorphism()));
    checks.push(outcome("automorphisms", ctx.automorphisms()));
    checks.push(outcome("frattini", ctx.frattini()));
    checks.push(outcome("residually-thin", ctx.residually_thin()));
    checks.push(outcome("nilpotent", ctx.nilpotent()));
    checks.push(outcome("basis", ctx.basis()));
    SignatureReport {
        signature: sig,
        checks,
    }
}

struct Context<'a> {
    sig: Signature,
    t: &'a TableHypergroup,
    oracle: Vec<Subset>,
}

impl Context<'_> {
    fn descriptors(&self, strongly_normal: bool) -> Result<Vec<ClosedDescriptor>> {
        Ok(enumerate_closed(self.sig, None, strongly_normal)?.collect())
    }

    fn materialized(&self, strongly_normal: bool) -> Result<BTreeSet<u64>> {
        self.descriptors(strongly_normal)?
            .iter()
            .map(|d| Ok(to_subset(&materialize(d)?).bits()))
            .collect()
    }

    fn oracle_strongly_normal(&self) -> Result<Vec<Subset>> {
        let all = self.t.all();
        let mut out = Vec::new();
        for &g in &self.oracle {
            if kernel::is_strongly_normal(self.t, g, all)? {
                out.push(g);
            }
        }
        Ok(out)
    }

    fn descriptor_of(&self, g: Subset) -> Result<ClosedDescriptor> {
        recognize(
            self.sig,
            &ElementSet::from_supports(g.iter().map(|i| i as u64)),
        )
    }

    fn enumeration(&self) -> Outcome {
        let structured = self.materialized(false)?;
        let oracle: BTreeSet<u64> = self.oracle.iter().map(|g| g.bits()).collect();
        let listed = self.descriptors(false)?.len();
        if listed != structured.len() {
            return Ok(Some(format!(
                "{listed} descriptors but {} distinct subsets",
                structured.len()
            )));
        }
        Ok((structured != oracle).then(|| {
            format!(
                "{} structured subsets vs {} oracle subsets",
                structured.len(),
                oracle.len()
            )
        }))
    }

    fn strongly_normal_filter(&self) -> Outcome {
        let structured = self.materialized(true)?;
        let oracle: BTreeSet<u64> = self
            .oracle_strongly_normal()?
            .iter()
            .map(|g| g.bits())
            .collect();
        Ok((structured != oracle).then(|| {
            format!(
                "{} structured subsets vs {} oracle subsets",
                structured.len(),
                oracle.len()
            )
        }))
    }

    fn counts(&self) -> Outcome {
        let closed = count_closed(self.sig);
        if closed != self.oracle.len().into() {
            return Ok(mismatch("closed", closed, self.oracle.len().into()));
        }
        let sn = count_strongly_normal(self.sig);
        let oracle_sn = self.oracle_strongly_normal()?.len();
        Ok((sn != oracle_sn.into())
            .then(|| format!("strongly normal: structured {sn}, oracle {oracle_sn}")))
    }

    fn counts_by_size(&self) -> Outcome {
        let stats = SubsetStats::of_signature(self.sig);
        let sn = self.oracle_strongly_normal()?;
        for r in 0..=self.sig.rank() + 1 {
            let oracle = self.oracle.iter().filter(|g| g.len() == 1 << r).count();
            let formula = count_closed_of_size(stats, r);
            if formula != oracle.into() {
                return Ok(Some(format!(
                    "size 2^{r}: structured {formula}, oracle {oracle}"
                )));
            }
            let oracle_sn = sn.iter().filter(|g| g.len() == 1 << r).count();
            let formula_sn = count_strongly_normal_of_size(stats, r);
            if formula_sn != oracle_sn.into() {
                return Ok(Some(format!(
                    "strongly normal size 2^{r}: structured {formula_sn}, oracle {oracle_sn}"
                )));
            }
        }
        Ok(None)
    }

    fn small(&self) -> Vec<Subset> {
        self.oracle
            .iter()
            .copied()
            .filter(|g| g.len() <= MAX_MAP_ORDER)
            .collect()
    }

    fn isomorphism(&self) -> Outcome {
        let small = self.small();
        let descriptors: Vec<ClosedDescriptor> = small
            .iter()
            .map(|&g| self.descriptor_of(g))
            .collect::<Result<_>>()?;
        for i in 0..small.len() {
            for j in i..small.len() {
                let fast = classify::is_isomorphic(&descriptors[i], &descriptors[j]);
                let brute = kernel::brute_isomorphism_exists(self.t, small[i], self.t, small[j])?;
                if fast != brute {
                    return Ok(Some(format!(
                        "{} vs {}: structured {fast}, oracle {brute}",
                        descriptors[i], descriptors[j]
                    )));
                }
            }
        }
        Ok(None)
    }

    fn automorphisms(&self) -> Outcome {
        for g in self.small() {
            let d = self.descriptor_of(g)?;
            let fast = classify::aut_descriptor(&d).order;
            let brute = kernel::brute_automorphism_count(self.t, g)?;
            if fast != brute {
                return Ok(Some(format!("{d}: structured {fast}, oracle {brute}")));
            }
        }
        Ok(None)
    }

    fn frattini(&self) -> Outcome {
        for &g in &self.oracle {
            let d = self.descriptor_of(g)?;
            let fast = to_subset(&materialize(&classify::frattini_fast(&d))?);
            let brute = kernel::frattini(self.t, g)?;
            if fast != brute {
                return Ok(mismatch(&d.to_string(), fast, brute));
            }
        }
        Ok(None)
    }

    fn residually_thin(&self) -> Outcome {
        for &g in &self.oracle {
            let d = self.descriptor_of(g)?;
            let fast = classify::is_residually_thin_fast(&d);
            let brute = kernel::is_residually_thin(self.t, g)?;
            if fast != brute {
                return Ok(mismatch(&d.to_string(), fast, brute));
            }
        }
        Ok(None)
    }

    fn nilpotent(&self) -> Outcome {
        for &g in &self.oracle {
            let d = self.descriptor_of(g)?;
            let fast = classify::is_nilpotent_fast(&d);
            let brute = kernel::is_nilpotent(self.t, g)?;
            if fast != brute {
                return Ok(mismatch(&d.to_string(), fast, brute));
            }
        }
        Ok(None)
    }

    fn basis(&self) -> Outcome {
        for &g in &self.oracle {
            let d = self.descriptor_of(g)?;
            let basis = classify::find_basis(&d);
            if basis.len() != classify::dimension(&d) as usize {
                return Ok(Some(format!("{d}: basis size differs from dimension")));
            }
            if !classify::satisfies_basis_conditions(&d, &basis) {
                return Ok(Some(format!("{d}: basis conditions fail")));
            }
            let gens = Subset::from_indices(basis.iter().map(|x| x.support() as usize));
            if kernel::generated_closed_subset(self.t, gens) != g {
                return Ok(Some(format!("{d}: basis does not generate the subset")));
            }
        }
        Ok(None)
    }
}
