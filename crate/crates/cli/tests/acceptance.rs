//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use ea2_core::classify::{
    self, count_closed, count_closed_of_size, count_strongly_normal, count_strongly_normal_of_size,
    enumerate_closed, iso_class_stats, materialize, recognize, ClosedDescriptor,
};
use ea2_core::ea2::{to_table, SubsetStats};
use ea2_core::gf2::{enumerate_subspaces, gaussian_binomial, gl2_order};
use ea2_core::kernel::{self, Subset, TableHypergroup};
use ea2_core::{BigCount, ElementSet, Signature};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn signatures(max_p: u32) -> impl Iterator<Item = Signature> {
    (0..=max_p).flat_map(Signature::all_of_rank)
}

fn to_subset(set: &ElementSet) -> Subset {
    Subset::from_indices(set.supports().map(|m| m as usize))
}

fn descriptor_of(sig: Signature, g: Subset) -> ClosedDescriptor {
    recognize(sig, &ElementSet::from_supports(g.iter().map(|i| i as u64)))
        .expect("oracle subset is closed")
}

fn oracle_strongly_normal(t: &TableHypergroup, closed: &[Subset]) -> Vec<Subset> {
    closed
        .iter()
        .copied()
        .filter(|&g| kernel::is_strongly_normal(t, g, t.all()).unwrap())
        .collect()
}

fn big(n: usize) -> BigCount {
    BigCount::from(n)
}

fn example_table() -> Outcome {
    // e=0, q1=1 (thin), q2=2 (thick), r=3
    let expected: [[&[usize]; 4]; 4] = [
        [&[0], &[1], &[2], &[3]],
        [&[1], &[0], &[3], &[2]],
        [&[2], &[3], &[0, 2], &[1, 3]],
        [&[3], &[2], &[1, 3], &[0, 2]],
    ];
    let out = Command::new(env!("CARGO_BIN_EXE_ea2"))
        .args(["--sig", "p=2,thick=2", "--format", "structured", "table"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("exit status {}", out.status)
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let table = TableHypergroup::from_json(text.trim()).map_err(|e| e.to_string())?;
    ensure(table.order() == 4 && table.identity() == 0, || {
        "wrong shape".into()
    })?;
    for (a, row) in expected.iter().enumerate() {
        for (b, cell) in row.iter().enumerate() {
            let got = table.product(a, b).to_vec();
            ensure(got == *cell, || {
                format!("entry ({a},{b}) is {got:?}, expected {cell:?}")
            })?;
            if a == 0 || a == 1 || b == 0 || b == 1 {
                ensure(got.len() == 1, || {
                    format!("thin product ({a},{b}) not a singleton")
                })?;
            }
        }
    }
    Ok("16 entries bit-exact from the CLI".into())
}

fn closed_counts() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for sig in signatures(4) {
        let t = to_table(sig).unwrap();
        let closed = kernel::brute_closed_subsets(&t).unwrap();
        let sn = oracle_strongly_normal(&t, &closed);
        ensure(count_closed(sig) == big(closed.len()), || {
            format!(
                "{sig}: count_closed {} vs oracle {}",
                count_closed(sig),
                closed.len()
            )
        })?;
        ensure(count_strongly_normal(sig) == big(sn.len()), || {
            format!(
                "{sig}: strongly normal {} vs oracle {}",
                count_strongly_normal(sig),
                sn.len()
            )
        })?;
        n += 1;
    }
    let ex = "p=2,thick=2".parse().unwrap();
    ensure(
        count_closed(ex) == big(4) && count_strongly_normal(ex) == big(2),
        || "example counts differ from 4 and 2".into(),
    )?;
    ensure(count_closed("p=4".parse().unwrap()) == big(67), || {
        "p=4 thin count is not 67".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs() < 60, || format!("sweep took {elapsed:?}"))?;
    Ok(format!(
        "{n} signatures exact in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn enumeration_equivalence() -> Outcome {
    let mut total = 0;
    for sig in signatures(4) {
        let t = to_table(sig).unwrap();
        let closed = kernel::brute_closed_subsets(&t).unwrap();
        let oracle: BTreeSet<u64> = closed.iter().map(|g| g.bits()).collect();
        let listed: Vec<u64> = enumerate_closed(sig, None, false)
            .unwrap()
            .map(|d| to_subset(&materialize(&d).unwrap()).bits())
            .collect();
        let structured: BTreeSet<u64> = listed.iter().copied().collect();
        ensure(listed.len() == structured.len(), || {
            format!("{sig}: duplicate descriptors")
        })?;
        ensure(structured == oracle, || {
            format!("{sig}: closed subsets differ")
        })?;

        let sn_oracle: BTreeSet<u64> = oracle_strongly_normal(&t, &closed)
            .iter()
            .map(|g| g.bits())
            .collect();
        let sn: BTreeSet<u64> = enumerate_closed(sig, None, true)
            .unwrap()
            .map(|d| to_subset(&materialize(&d).unwrap()).bits())
            .collect();
        ensure(sn == sn_oracle, || {
            format!("{sig}: strongly normal subsets differ")
        })?;
        total += oracle.len();
    }
    Ok(format!(
        "{total} closed subsets over 31 signatures, sets equal"
    ))
}

fn per_size_counts() -> Outcome {
    let mut checked = 0;
    for sig in signatures(5) {
        let ambient = SubsetStats::of_signature(sig);
        let mut by_size = vec![0usize; sig.rank() as usize + 2];
        let mut sn_by_size = vec![0usize; sig.rank() as usize + 2];
        for d in enumerate_closed(sig, None, false).unwrap() {
            by_size[d.size_log2() as usize] += 1;
            if d.thick_support() == sig.thick_mask() {
                sn_by_size[d.size_log2() as usize] += 1;
            }
        }
        let oracle = (sig.rank() <= 4).then(|| {
            let t = to_table(sig).unwrap();
            let closed = kernel::brute_closed_subsets(&t).unwrap();
            let sn = oracle_strongly_normal(&t, &closed);
            (closed, sn)
        });
        for r in 0..by_size.len() {
            let formula = count_closed_of_size(ambient, r as u32);
            ensure(formula == big(by_size[r]), || {
                format!(
                    "{sig} size 2^{r}: formula {formula}, enumeration {}",
                    by_size[r]
                )
            })?;
            let formula_sn = count_strongly_normal_of_size(ambient, r as u32);
            ensure(formula_sn == big(sn_by_size[r]), || {
                format!(
                    "{sig} strongly normal size 2^{r}: formula {formula_sn}, enumeration {}",
                    sn_by_size[r]
                )
            })?;
            if let Some((closed, sn)) = &oracle {
                let brute = closed.iter().filter(|g| g.len() == 1 << r).count();
                let brute_sn = sn.iter().filter(|g| g.len() == 1 << r).count();
                ensure(formula == big(brute) && formula_sn == big(brute_sn), || {
                    format!("{sig} size 2^{r}: oracle disagrees")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (signature, size) cells, oracle-backed up to p=4"
    ))
}

fn small_closed(max_p: u32) -> Vec<(Signature, TableHypergroup, Subset)> {
    let mut out = Vec::new();
    for sig in signatures(max_p) {
        let t = to_table(sig).unwrap();
        for g in kernel::brute_closed_subsets(&t).unwrap() {
            if g.len() <= 8 {
                out.push((sig, t.clone(), g));
            }
        }
    }
    out
}

fn isomorphism_soundness() -> Outcome {
    let items = small_closed(3);
    let mut pairs = 0;
    for (i, (s1, t1, g1)) in items.iter().enumerate() {
        let d1 = descriptor_of(*s1, *g1);
        for (s2, t2, g2) in &items[i..] {
            let d2 = descriptor_of(*s2, *g2);
            let fast = classify::is_isomorphic(&d1, &d2);
            let brute = kernel::brute_isomorphism_exists(t1, *g1, t2, *g2).unwrap();
            ensure(fast == brute, || {
                format!("{s1} {d1} vs {s2} {d2}: structured {fast}, oracle {brute}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs (including cross-signature) agree"))
}

fn automorphism_soundness() -> Outcome {
    let mut orders = BTreeSet::new();
    let mut checked = 0;
    for (sig, t, g) in small_closed(3) {
        let d = descriptor_of(sig, g);
        let fast = classify::aut_descriptor(&d).order;
        let brute = kernel::brute_automorphism_count(&t, g).unwrap();
        ensure(fast == brute, || {
            format!("{sig} {d}: structured {fast}, oracle {brute}")
        })?;
        orders.insert(brute);
        checked += 1;
    }
    let in_scope: Vec<String> = orders.iter().map(ToString::to_string).collect();
    // Order 24 needs four thick generators, hence 16 elements; the
    // rank-4 sweep covers it.
    for sig in Signature::all_of_rank(4) {
        let t = to_table(sig).unwrap();
        for g in kernel::brute_closed_subsets(&t).unwrap() {
            let d = descriptor_of(sig, g);
            let fast = classify::aut_descriptor(&d).order;
            let brute = kernel::brute_automorphism_count(&t, g).unwrap();
            ensure(fast == brute, || {
                format!("{sig} {d}: structured {fast}, oracle {brute}")
            })?;
            orders.insert(brute);
            checked += 1;
        }
    }
    for want in [1u32, 2, 6, 24, 168] {
        ensure(orders.contains(&BigCount::from(want)), || {
            format!("order {want} never observed")
        })?;
    }
    let all: Vec<String> = orders.iter().map(ToString::to_string).collect();
    Ok(format!(
        "{checked} subsets; orders {{{}}} at p<=3 size<=8, {{{}}} with p=4",
        in_scope.join(","),
        all.join(",")
    ))
}

fn class_statistics() -> Outcome {
    for sig in signatures(4) {
        let (p, ps) = (sig.rank() as usize, sig.thick_count() as usize);
        let classes = iso_class_stats(sig);
        ensure(classes.len() == p * ps + p + 1 - ps * ps, || {
            format!("{sig}: {} classes", classes.len())
        })?;
        let mut partition: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        let t = to_table(sig).unwrap();
        for g in kernel::brute_closed_subsets(&t).unwrap() {
            let st = descriptor_of(sig, g).stats();
            *partition.entry((st.s, st.r2)).or_default() += 1;
        }
        ensure(partition.len() == classes.len(), || {
            format!("{sig}: partition has {} blocks", partition.len())
        })?;
        for c in &classes {
            let expected = classify::binomial(sig.thick_count(), c.s)
                * gaussian_binomial(sig.thin_count(), c.r2);
            ensure(c.cardinality == expected, || {
                format!("{sig}: class ({},{}) formula", c.s, c.r2)
            })?;
            let seen = partition.get(&(c.s, c.r2)).copied().unwrap_or(0);
            ensure(c.cardinality == big(seen), || {
                format!(
                    "{sig}: class ({},{}) has {seen} members, expected {}",
                    c.s, c.r2, c.cardinality
                )
            })?;
        }
    }
    Ok("class counts and cardinalities match for 31 signatures".into())
}

fn frattini_trivial() -> Outcome {
    let mut checked = 0;
    for sig in signatures(4) {
        let t = to_table(sig).unwrap();
        for g in kernel::brute_closed_subsets(&t).unwrap() {
            let f = kernel::frattini(&t, g).unwrap();
            ensure(f == t.unit(), || {
                format!("{sig}: Frattini of {g:?} is {f:?}")
            })?;
            let d = descriptor_of(sig, g);
            ensure(
                to_subset(&materialize(&classify::frattini_fast(&d)).unwrap()) == f,
                || format!("{sig}: structured Frattini differs"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} closed subsets, all {{e}}"))
}

fn thin_predicates() -> Outcome {
    let mut checked = 0;
    for sig in signatures(3) {
        let t = to_table(sig).unwrap();
        for g in kernel::brute_closed_subsets(&t).unwrap() {
            let d = descriptor_of(sig, g);
            let rt = kernel::is_residually_thin(&t, g).unwrap();
            let nil = kernel::is_nilpotent(&t, g).unwrap();
            ensure(classify::is_residually_thin_fast(&d) == rt, || {
                format!("{sig} {d}: residually thin")
            })?;
            ensure(classify::is_nilpotent_fast(&d) == nil, || {
                format!("{sig} {d}: nilpotent")
            })?;
            ensure(rt == nil, || format!("{sig} {d}: oracle predicates differ"))?;
            checked += 1;
        }
    }
    let two: Signature = "p=1,thick=1".parse().unwrap();
    let t = to_table(two).unwrap();
    ensure(
        !kernel::is_residually_thin(&t, t.all()).unwrap()
            && !kernel::is_nilpotent(&t, t.all()).unwrap(),
        || "two-element thick hypergroup misclassified".into(),
    )?;
    let whole = ClosedDescriptor::whole(two);
    ensure(
        !classify::is_residually_thin_fast(&whole) && !classify::is_nilpotent_fast(&whole),
        || "two-element thick descriptor misclassified".into(),
    )?;
    Ok(format!(
        "{checked} closed subsets agree; two-element thick case neither"
    ))
}

fn basis_and_dimension() -> Outcome {
    let mut checked = 0;
    for sig in signatures(4) {
        let t = to_table(sig).unwrap();
        for g in kernel::brute_closed_subsets(&t).unwrap() {
            let d = descriptor_of(sig, g);
            let basis = classify::find_basis(&d);
            let st = d.stats();
            let expected_dim = if st.s > 0 && st.r2 == 0 { 1 } else { st.r2 };
            ensure(classify::dimension(&d) == expected_dim, || {
                format!("{sig} {d}: dimension")
            })?;
            ensure(basis.len() == expected_dim as usize, || {
                format!("{sig} {d}: basis size")
            })?;
            ensure(classify::satisfies_basis_conditions(&d, &basis), || {
                format!("{sig} {d}: basis conditions")
            })?;
            let gens = Subset::from_indices(basis.iter().map(|x| x.support() as usize));
            ensure(kernel::generated_closed_subset(&t, gens) == g, || {
                format!("{sig} {d}: basis does not generate")
            })?;
            // minimality: dropping any element generates less
            for skip in 0..basis.len() {
                let fewer = Subset::from_indices(
                    basis
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, x)| x.support() as usize),
                );
                ensure(kernel::generated_closed_subset(&t, fewer) != g, || {
                    format!("{sig} {d}: basis is not minimal")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} closed subsets: bases valid, generating and minimal"
    ))
}

/// Counts invertible r x r matrices over GF(2) by testing x -> xM for injectivity.
fn brute_invertible(r: u32) -> u64 {
    let mut count = 0;
    for m in 0u64..(1u64 << (r * r)) {
        let rows: Vec<u64> = (0..r).map(|i| (m >> (i * r)) & ((1 << r) - 1)).collect();
        let images: BTreeSet<u64> = (0u64..(1 << r))
            .map(|x| {
                (0..r as usize)
                    .filter(|&i| x >> i & 1 == 1)
                    .fold(0, |acc, i| acc ^ rows[i])
            })
            .collect();
        if images.len() == 1 << r {
            count += 1;
        }
    }
    count
}

fn gf2_self_consistency() -> Outcome {
    let mut cells = 0;
    for n in 0..=10 {
        for k in 0..=n {
            let count = enumerate_subspaces(n, Some(k)).unwrap().count();
            ensure(big(count) == gaussian_binomial(n, k), || {
                format!(
                    "n={n} k={k}: enumerated {count}, formula {}",
                    gaussian_binomial(n, k)
                )
            })?;
            cells += 1;
        }
    }
    for r in 0..=3 {
        let brute = brute_invertible(r);
        ensure(gl2_order(r) == BigCount::from(brute), || {
            format!("GL({r},2): {} vs {brute}", gl2_order(r))
        })?;
    }
    Ok(format!("{cells} (n,k) cells; GL orders 1,1,6,168 match"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("example table reproduced", example_table),
        ("closed and strongly normal counts", closed_counts),
        ("enumeration equals oracle", enumeration_equivalence),
        ("per-size counts", per_size_counts),
        ("isomorphism criterion", isomorphism_soundness),
        ("automorphism orders", automorphism_soundness),
        ("isomorphism class statistics", class_statistics),
        ("Frattini closed subset trivial", frattini_trivial),
        ("residually thin and nilpotent predicates", thin_predicates),
        ("basis and dimension", basis_and_dimension),
        ("GF(2) counts self-consistent", gf2_self_consistency),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!(
                "PASS criterion {:>2}: {name} ({detail}) [{secs:.2}s]",
                i + 1
            ),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
