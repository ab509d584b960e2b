//! Threshold specifications and their resolution into per-node activation
//! counts.
//!
//! Fractional thresholds are carried as exact integer ratios. Evaluating
//! `ceil(f * d)` in binary floating point mis-rounds at exact multiples
//! (already at f = 0.05, d = 20), so resolution never touches an `f64`.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// How per-node activation counts are derived from the graph.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdSpec {
    /// k_i = min(in-degree, k): the integer trial protocol.
    IntegerCap(u32),
    /// k_i = ceil(num/den * in-degree): the fractional trial protocol.
    Fraction { num: u64, den: u64 },
    /// Explicit counts per node; must cover every node.
    PerNode(HashMap<NodeId, u32>),
}

impl ThresholdSpec {
    pub fn integer_cap(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "integer threshold must be >= 1".into(),
            ));
        }
        Ok(ThresholdSpec::IntegerCap(k))
    }

    /// Exact ratio in (0, 1].
    pub fn fraction(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "fraction must lie in (0,1], got {num}/{den}"
            )));
        }
        let g = gcd(num, den);
        Ok(ThresholdSpec::Fraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn per_node(table: HashMap<NodeId, u32>) -> Self {
        ThresholdSpec::PerNode(table)
    }

    /// Read a per-node table from two-column `node_id k_i` text.
    pub fn per_node_from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut table = HashMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `node k`, got {trimmed:?}"),
                    })
                }
            };
            let parse_err = |t: &str| Error::Parse {
                line: line_no,
                message: format!("invalid integer {t:?}"),
            };
            let node: NodeId = a.parse().map_err(|_| parse_err(a))?;
            let k: u32 = b.parse().map_err(|_| parse_err(b))?;
            table.insert(node, k);
        }
        Ok(ThresholdSpec::PerNode(table))
    }

    /// Parse CLI syntax: `int:K`, `frac:NUM/DEN`, or `frac:0.05` (decimals
    /// become the exact ratio they print as, e.g. 5/100).
    pub fn parse(text: &str) -> Result<Self> {
        let invalid = || {
            Error::InvalidParameter(format!(
                "threshold must be `int:K`, `frac:NUM/DEN`, or `frac:0.D`, got {text:?}"
            ))
        };
        let (kind, value) = text.split_once(':').ok_or_else(invalid)?;
        match kind {
            "int" => {
                let k: u32 = value.parse().map_err(|_| invalid())?;
                ThresholdSpec::integer_cap(k)
            }
            "frac" => {
                let (num, den) = parse_exact_ratio(value).ok_or_else(invalid)?;
                ThresholdSpec::fraction(num, den)
            }
            _ => Err(invalid()),
        }
    }
}

/// Parse `NUM/DEN` or a plain decimal like `0.05` into an exact ratio.
///
/// Decimals keep their printed denominator: `0.05` becomes 5/100.
pub fn parse_exact_ratio(text: &str) -> Option<(u64, u64)> {
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().ok()?;
        let den: u64 = den.trim().parse().ok()?;
        return Some((num, den));
    }
    match text.split_once('.') {
        None => {
            let whole: u64 = text.trim().parse().ok()?;
            Some((whole, 1))
        }
        Some((whole, frac)) => {
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let whole: u64 = if whole.is_empty() {
                0
            } else {
                whole.parse().ok()?
            };
            let frac_val: u64 = frac.parse().ok()?;
            let den = 10u64.checked_pow(frac.len() as u32)?;
            Some((whole.checked_mul(den)?.checked_add(frac_val)?, den))
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Resolved per-node activation counts; `0 <= k_i <= in-degree(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdAssignment {
    k: Vec<u32>,
}

impl ThresholdAssignment {
    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn get(&self, v: NodeId) -> u32 {
        self.k[v as usize]
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

/// The activation count `ceil(num/den * in_degree)` in exact integer
/// arithmetic; never touches floating point.
pub fn fractional_count(num: u64, den: u64, in_degree: u64) -> u64 {
    let prod = (num as u128) * (in_degree as u128);
    prod.div_ceil(den as u128) as u64
}

/// Resolve a specification against a graph into activation counts.
pub fn resolve(g: &DirectedGraph, spec: &ThresholdSpec) -> Result<ThresholdAssignment> {
    let n = g.n();
    let mut k = Vec::with_capacity(n);
    match spec {
        ThresholdSpec::IntegerCap(cap) => {
            if *cap == 0 {
                return Err(Error::InvalidParameter(
                    "integer threshold must be >= 1".into(),
                ));
            }
            for v in 0..n as NodeId {
                k.push((g.in_degree(v) as u32).min(*cap));
            }
        }
        ThresholdSpec::Fraction { num, den } => {
            if *den == 0 || *num == 0 || num > den {
                return Err(Error::InvalidParameter(format!(
                    "fraction must lie in (0,1], got {num}/{den}"
                )));
            }
            for v in 0..n as NodeId {
                k.push(fractional_count(*num, *den, g.in_degree(v) as u64) as u32);
            }
        }
        ThresholdSpec::PerNode(table) => {
            for v in 0..n as NodeId {
                let c = *table.get(&v).ok_or(Error::MissingThreshold(v))?;
                let d_in = g.in_degree(v) as u32;
                if c > d_in {
                    return Err(Error::ThresholdOutOfBounds {
                        node: v,
                        given: c,
                        in_degree: d_in,
                    });
                }
                k.push(c);
            }
        }
    }
    Ok(ThresholdAssignment { k })
}
