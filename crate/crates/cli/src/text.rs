//! Human-readable rendering.

use std::io::{self, Write};

use ea2_core::classify::{aut_descriptor, ClosedDescriptor, IsoClassStat};
use ea2_core::verify::CheckOutcome;
use ea2_core::{Signature, TableHypergroup};

fn name(index: usize) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for i in 0..usize::BITS {
        if index >> i & 1 == 1 {
            if !first {
                out.push(',');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
        }
    }
    out.push('}');
    out
}

/// Row and column headers name elements by support; entries are sets.
pub fn table(out: &mut impl Write, sig: Signature, t: &TableHypergroup) -> io::Result<()> {
    let n = t.order();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let items: Vec<String> = t.product(a, b).iter().map(name).collect();
                    format!("[{}]", items.join(", "))
                })
                .collect()
        })
        .collect();
    let headers: Vec<String> = (0..n).map(name).collect();
    let row_width = headers.iter().map(String::len).max().unwrap_or(0).max(1);
    let widths: Vec<usize> = (0..n)
        .map(|b| {
            cells
                .iter()
                .map(|row| row[b].len())
                .chain(std::iter::once(headers[b].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();

    writeln!(out, "# {sig}")?;
    let mut line = format!("{:<row_width$} |", "*");
    for (h, w) in headers.iter().zip(&widths) {
        line.push_str(&format!(" {h:<w$}"));
    }
    writeln!(out, "{}", line.trim_end())?;
    let rule = row_width + 2 + widths.iter().map(|w| w + 1).sum::<usize>();
    writeln!(out, "{}", "-".repeat(rule))?;
    for (a, row) in cells.iter().enumerate() {
        let mut line = format!("{:<row_width$} |", headers[a]);
        for (cell, w) in row.iter().zip(&widths) {
            line.push_str(&format!(" {cell:<w$}"));
        }
        writeln!(out, "{}", line.trim_end())?;
    }
    Ok(())
}

pub fn closed(out: &mut impl Write, d: &ClosedDescriptor) -> io::Result<()> {
    let stats = d.stats();
    writeln!(
        out,
        "{}  s={} r2={} size={} aut={}",
        d,
        stats.s,
        stats.r2,
        d.size(),
        aut_descriptor(d).order
    )
}

pub fn classes(out: &mut impl Write, classes: &[IsoClassStat]) -> io::Result<()> {
    writeln!(out, "s  r2  cardinality")?;
    for c in classes {
        writeln!(out, "{:<2} {:<3} {}", c.s, c.r2, c.cardinality)?;
    }
    writeln!(out, "{} classes", classes.len())
}

pub fn check(out: &mut impl Write, sig: Signature, check: &CheckOutcome) -> io::Result<()> {
    let status = if check.passed { "PASS" } else { "FAIL" };
    if check.detail.is_empty() {
        writeln!(out, "{status} {sig} {}", check.name)
    } else {
        writeln!(out, "{status} {sig} {}: {}", check.name, check.detail)
    }
}
