//! Point-set files and serialization helpers.
//!
//! File format:
//!
//! ```text
//! # comment
//! q d [c_0 c_1 … c_e]     modulus coefficients, low degree first, only when e > 1
//! x_1 x_2 … x_d           one point per line, integer element codes
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::Serializer;

use crate::error::{Error, Result};
use crate::ffield::Fq;
use crate::geom::{Point, PointSet};

pub fn big<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn big_opt<S: Serializer>(n: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

pub fn big_vec<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split('#').next().unwrap_or("").split_whitespace()
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("expected an integer, got {tok:?}") })
}

/// Parses the point-set format.
pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut header: Option<(Arc<Fq>, usize)> = None;
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = tokens(raw).collect();
        if toks.is_empty() {
            continue;
        }
        match &header {
            None => {
                if toks.len() < 2 {
                    return Err(Error::Parse { line, msg: "header must be `q d [modulus]`".into() });
                }
                let q: u64 = parse_num(toks[0], line)?;
                let d: usize = parse_num(toks[1], line)?;
                let field = if toks.len() > 2 {
                    let modulus = toks[2..].iter().map(|t| parse_num(t, line)).collect::<Result<Vec<u32>>>()?;
                    Fq::with_modulus(q, modulus)?
                } else {
                    Fq::new(q)?
                };
                header = Some((Arc::new(field), d));
            }
            Some((_, d)) => {
                if toks.len() != *d {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected {d} coordinates, got {}", toks.len()),
                    });
                }
                let coords = toks.iter().map(|t| parse_num(t, line)).collect::<Result<Vec<u32>>>()?;
                points.push(Point(coords));
            }
        }
    }
    let (field, d) = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    PointSet::new(field, d, points)
}

pub fn read_point_set(path: impl AsRef<Path>) -> Result<PointSet> {
    parse_point_set(&std::fs::read_to_string(path)?)
}

pub fn format_point_set(set: &PointSet) -> String {
    let f = set.field();
    let mut out = format!("{} {}", f.q(), set.dim());
    if f.e() > 1 {
        for c in f.modulus() {
            let _ = write!(out, " {c}");
        }
    }
    out.push('\n');
    for p in set.points() {
        let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_point_set(path: impl AsRef<Path>, set: &PointSet) -> Result<()> {
    std::fs::write(path, format_point_set(set))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_prime_field_set() {
        let text = "# two points\n3 2\n0 0\n1 0  # second\n\n";
        let set = parse_point_set(text).unwrap();
        assert_eq!(set.field().q(), 3);
        assert_eq!(set.len(), 2);
        assert_eq!(format_point_set(&set), "3 2\n0 0\n1 0\n");
    }

    #[test]
    fn modulus_in_header() {
        let set = parse_point_set("9 2 2 1 1\n3 4\n").unwrap();
        assert_eq!(set.field().modulus(), &[2, 1, 1]);
        assert_eq!(format_point_set(&set), "9 2 2 1 1\n3 4\n");
        assert!(parse_point_set("9 2 2 0 1\n").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_point_set("3 2\n0 0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_point_set("3 2\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_point_set("3 2\n0 1\n0 1\n"), Err(Error::DuplicatePoint(_))));
        assert!(matches!(parse_point_set("# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_point_set("4 2\n"), Err(Error::EvenCharacteristic(4))));
    }
}
