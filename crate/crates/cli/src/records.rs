//! Structured output records. Field order is part of the format.

use ea2_core::classify::{AutDescriptor, ClosedDescriptor, IsoClassStat};
use ea2_core::verify::{CheckOutcome, VerifyReport};
use ea2_core::{BigCount, Element, Signature};
use serde::Serialize;

#[derive(Debug, Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Closed {
        descriptor: String,
        thick_support: Vec<u32>,
        thin_basis: Vec<u64>,
        s: u32,
        r2: u32,
        size: String,
        aut_order: String,
    },
    Count {
        signature: String,
        strongly_normal: bool,
        size_log2: Option<u32>,
        count: String,
    },
    Iso {
        left: String,
        right: String,
        left_stats: [u32; 2],
        right_stats: [u32; 2],
        isomorphic: bool,
    },
    Aut {
        descriptor: String,
        s: u32,
        r2: u32,
        order: String,
    },
    IsoClass {
        s: u32,
        r2: u32,
        cardinality: String,
    },
    Basis {
        descriptor: String,
        dimension: u32,
        basis: Vec<String>,
    },
    Check {
        signature: String,
        check: &'static str,
        passed: bool,
        detail: String,
    },
    Summary {
        signatures: usize,
        checks: usize,
        failures: usize,
        passed: bool,
    },
}

fn indices(mask: u64) -> Vec<u32> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

impl Record {
    pub fn closed(d: &ClosedDescriptor) -> Self {
        let stats = d.stats();
        Record::Closed {
            descriptor: d.to_string(),
            thick_support: indices(d.thick_support()),
            thin_basis: d.thin_subgroup().basis().to_vec(),
            s: stats.s,
            r2: stats.r2,
            size: d.size().to_string(),
            aut_order: ea2_core::classify::aut_descriptor(d).order.to_string(),
        }
    }

    pub fn count(
        sig: Signature,
        strongly_normal: bool,
        size_log2: Option<u32>,
        count: &BigCount,
    ) -> Self {
        Record::Count {
            signature: sig.to_string(),
            strongly_normal,
            size_log2,
            count: count.to_string(),
        }
    }

    pub fn iso(a: &ClosedDescriptor, b: &ClosedDescriptor, isomorphic: bool) -> Self {
        let (sa, sb) = (a.stats(), b.stats());
        Record::Iso {
            left: a.to_string(),
            right: b.to_string(),
            left_stats: [sa.s, sa.r2],
            right_stats: [sb.s, sb.r2],
            isomorphic,
        }
    }

    pub fn aut(d: &ClosedDescriptor, aut: &AutDescriptor) -> Self {
        Record::Aut {
            descriptor: d.to_string(),
            s: aut.s,
            r2: aut.r2,
            order: aut.order.to_string(),
        }
    }

    pub fn iso_class(c: &IsoClassStat) -> Self {
        Record::IsoClass {
            s: c.s,
            r2: c.r2,
            cardinality: c.cardinality.to_string(),
        }
    }

    pub fn basis(d: &ClosedDescriptor, dimension: u32, basis: &[Element]) -> Self {
        Record::Basis {
            descriptor: d.to_string(),
            dimension,
            basis: basis.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn check(sig: Signature, check: &CheckOutcome) -> Self {
        Record::Check {
            signature: sig.to_string(),
            check: check.name,
            passed: check.passed,
            detail: check.detail.clone(),
        }
    }

    pub fn summary(report: &VerifyReport) -> Self {
        Record::Summary {
            signatures: report.signatures.len(),
            checks: report.check_count(),
            failures: report.failure_count(),
            passed: report.passed(),
        }
    }
}
