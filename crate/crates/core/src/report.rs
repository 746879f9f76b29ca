//! CSV output. Floats are written with 17 significant digits so they parse
//! back to the same value.

use std::io::{self, Write};

use crate::ds::DsPolytope;
use crate::sim::{Bound, EcdfCurve, PValueRecord};
use crate::uniformity::{ContingencyTable, Method, TestReport};

/// Formats a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub const RECORDS_HEADER: &str = "dataset,method,k,p_upper,p_lower";
pub const ECDF_HEADER: &str = "method,k,bound,grid,value";
pub const TEST_HEADER: &str = "method,k,n,r_center,p_upper,p_lower";

pub fn write_records<W: Write>(mut out: W, records: &[PValueRecord]) -> io::Result<()> {
    writeln!(out, "{RECORDS_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.dataset,
            r.method,
            r.k,
            fmt_float(r.p_upper),
            fmt_float(r.p_lower)
        )?;
    }
    Ok(())
}

pub fn write_ecdf<W: Write>(mut out: W, curves: &[(Method, usize, Bound, EcdfCurve)]) -> io::Result<()> {
    writeln!(out, "{ECDF_HEADER}")?;
    for (method, k, bound, curve) in curves {
        for (g, v) in curve.grid.iter().zip(&curve.values) {
            writeln!(out, "{method},{k},{},{},{}", bound.as_str(), fmt_float(*g), fmt_float(*v))?;
        }
    }
    Ok(())
}

pub fn write_test_reports<W: Write>(mut out: W, reports: &[TestReport]) -> io::Result<()> {
    writeln!(out, "{TEST_HEADER}")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.method,
            r.k,
            r.n,
            fmt_float(r.r_center),
            fmt_float(r.p_upper),
            fmt_float(r.p_lower)
        )?;
    }
    Ok(())
}

/// Header `draw,w0,w_1..w_d,v1_1..vd_d` where `vi_j` is coordinate `j` of
/// vertex `i`.
pub fn polytope_header(d: usize) -> String {
    let mut cols = vec!["draw".to_string(), "w0".to_string()];
    cols.extend((1..=d).map(|j| format!("w_{j}")));
    for i in 1..=d {
        cols.extend((1..=d).map(|j| format!("v{i}_{j}")));
    }
    cols.join(",")
}

pub fn write_polytope_row<W: Write>(mut out: W, draw: usize, poly: &DsPolytope) -> io::Result<()> {
    let w = poly.weights();
    let mut cols = vec![draw.to_string(), fmt_float(w.slack())];
    cols.extend(w.lower_bounds().iter().map(|x| fmt_float(*x)));
    for v in poly.vertices() {
        cols.extend(v.iter().map(|x| fmt_float(*x)));
    }
    writeln!(out, "{}", cols.join(","))
}

/// Header `c1..ck` followed by one row of counts per `x` interval.
pub fn write_table<W: Write>(mut out: W, table: &ContingencyTable) -> io::Result<()> {
    let k = table.resolution();
    let header: Vec<String> = (1..=k).map(|j| format!("c{j}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in table.cells().chunks(k) {
        let row: Vec<String> = row.iter().map(u64::to_string).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
