//! Multiplicity bounds for the standard contact spheres and the unit cosphere
//! bundles of the compact rank one symmetric spaces.
//!
//! Each family carries the symbolic table entries and evaluates them at a
//! parameter; each instance also carries the Betti numbers of its base, read
//! off from the Poincaré polynomial, so the table can be recomputed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::homology::{self, BaseManifold, MonotoneSign};
use crate::record::{join_list, Record};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossFamily {
    /// `S^{2n+1}` over `ℂP^n`.
    Sphere,
    /// `S*S^2` or `S*ℝP^2` over `S^2`.
    CosphereS2,
    /// `S*S^m` or `S*ℝP^m`, `m > 2` even, over the quadric `Q_{m-1}`.
    CosphereEvenSphere,
    /// `S*S^m` or `S*ℝP^m`, `m` odd, over the quadric `Q_{m-1}`.
    CosphereOddSphere,
    CosphereCP,
    CosphereHP,
    CosphereCaP2,
}

impl CrossFamily {
    pub const ALL: [CrossFamily; 7] = [
        CrossFamily::Sphere,
        CrossFamily::CosphereS2,
        CrossFamily::CosphereEvenSphere,
        CrossFamily::CosphereOddSphere,
        CrossFamily::CosphereCP,
        CrossFamily::CosphereHP,
        CrossFamily::CosphereCaP2,
    ];

    pub fn key(self) -> &'static str {
        match self {
            CrossFamily::Sphere => "sphere",
            CrossFamily::CosphereS2 => "cosphere-s2",
            CrossFamily::CosphereEvenSphere => "cosphere-sphere-even",
            CrossFamily::CosphereOddSphere => "cosphere-sphere-odd",
            CrossFamily::CosphereCP => "cosphere-cp",
            CrossFamily::CosphereHP => "cosphere-hp",
            CrossFamily::CosphereCaP2 => "cosphere-cap2",
        }
    }

    /// Row label, `r_B` and `c_B` as printed in the multiplicity table.
    pub fn table_row(self) -> (&'static str, &'static str, &'static str) {
        match self {
            CrossFamily::Sphere => ("S^{2n+1}", "n+1", "n+1"),
            CrossFamily::CosphereS2 => ("S*S^2 or S*RP^2", "2", "2"),
            CrossFamily::CosphereEvenSphere => ("S*S^m or S*RP^m with m>2 even", "m", "m-1"),
            CrossFamily::CosphereOddSphere => ("S*S^m or S*RP^m with m odd", "m+1", "m-1"),
            CrossFamily::CosphereCP => ("S*CP^m", "m(m+1)", "m"),
            CrossFamily::CosphereHP => ("S*HP^m", "2m(m+1)", "2m+1"),
            CrossFamily::CosphereCaP2 => ("S*CaP^2", "24", "11"),
        }
    }

    /// Smallest admissible parameter, `None` for parameter-free rows.
    pub fn first_param(self) -> Option<u64> {
        match self {
            CrossFamily::Sphere | CrossFamily::CosphereHP => Some(1),
            CrossFamily::CosphereCP => Some(2),
            CrossFamily::CosphereOddSphere => Some(3),
            CrossFamily::CosphereEvenSphere => Some(4),
            CrossFamily::CosphereS2 | CrossFamily::CosphereCaP2 => None,
        }
    }

    pub fn admits(self, param: Option<u64>) -> bool {
        match (self.first_param(), param) {
            (None, None) => true,
            (Some(first), Some(p)) => {
                p >= first
                    && match self {
                        CrossFamily::CosphereEvenSphere => p % 2 == 0,
                        CrossFamily::CosphereOddSphere => p % 2 == 1,
                        _ => true,
                    }
            }
            _ => false,
        }
    }

    /// `(r_B, c_B)` from the table formulas.
    pub fn table_values(self, param: Option<u64>) -> (i64, u64) {
        let p = param.unwrap_or(0);
        let (r, c) = match self {
            CrossFamily::Sphere => (p + 1, p + 1),
            CrossFamily::CosphereS2 => (2, 2),
            CrossFamily::CosphereEvenSphere => (p, p - 1),
            CrossFamily::CosphereOddSphere => (p + 1, p - 1),
            CrossFamily::CosphereCP => (p * (p + 1), p),
            CrossFamily::CosphereHP => (2 * p * (p + 1), 2 * p + 1),
            CrossFamily::CosphereCaP2 => (24, 11),
        };
        (r as i64, c)
    }

    /// `r^non-hyp_B` from the second table; the sphere row splits by parity.
    pub fn nonhyp_value(self, param: Option<u64>) -> i64 {
        let p = param.unwrap_or(0) as i64;
        match self {
            CrossFamily::Sphere if p % 2 == 0 => p,
            CrossFamily::Sphere => p + 1,
            CrossFamily::CosphereS2 => 2,
            CrossFamily::CosphereEvenSphere => p,
            CrossFamily::CosphereOddSphere => p - 1,
            CrossFamily::CosphereCP => p * (p + 1),
            CrossFamily::CosphereHP => 2 * p * (p + 1),
            CrossFamily::CosphereCaP2 => 24,
        }
    }

    /// The base `B` with its Betti numbers.
    pub fn base(self, param: Option<u64>) -> BaseManifold {
        let p = param.unwrap_or(0) as usize;
        let (n, poly) = match self {
            CrossFamily::Sphere => return BaseManifold::complex_projective(p),
            CrossFamily::CosphereS2 => (1, even_poly(1)),
            CrossFamily::CosphereEvenSphere => (p - 1, even_poly(p - 1)),
            CrossFamily::CosphereOddSphere => {
                let mut poly = even_poly(p - 1);
                poly[p - 1] += 1;
                (p - 1, poly)
            }
            CrossFamily::CosphereCP => (2 * p - 1, product(&steps(2 * p, 2), &steps(2 * p - 2, 2))),
            CrossFamily::CosphereHP => (4 * p - 1, product(&steps(4 * p, 4), &steps(4 * p - 2, 2))),
            CrossFamily::CosphereCaP2 => (15, product(&steps(16, 8), &steps(14, 2))),
        };
        let (_, c) = self.table_values(param);
        BaseManifold::new(n, poly, c, MonotoneSign::Positive).expect("catalog bases satisfy Poincaré duality")
    }

    /// Name of a concrete instance, e.g. `S^7` or `S*HP^2`.
    pub fn instance_name(self, param: Option<u64>) -> String {
        let p = param.unwrap_or(0);
        match self {
            CrossFamily::Sphere => format!("S^{}", 2 * p + 1),
            CrossFamily::CosphereS2 => "S*S^2".into(),
            CrossFamily::CosphereEvenSphere | CrossFamily::CosphereOddSphere => format!("S*S^{p}"),
            CrossFamily::CosphereCP => format!("S*CP^{p}"),
            CrossFamily::CosphereHP => format!("S*HP^{p}"),
            CrossFamily::CosphereCaP2 => "S*CaP^2".into(),
        }
    }
}

impl FromStr for CrossFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.key() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for CrossFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// `1 + t^2 + … + t^{2n}` as a coefficient vector.
fn even_poly(n: usize) -> Vec<u64> {
    (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect()
}

/// `1 + t^step + … + t^top`.
fn steps(top: usize, step: usize) -> Vec<u64> {
    (0..=top).map(|i| u64::from(i % step == 0)).collect()
}

fn product(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Rows of the non-hyperbolic table, which splits the sphere row by parity
/// and folds `S*S^2` into the even row.
pub const NONHYP_ROWS: [(&str, &str); 7] = [
    ("S^{2n+1} with n even", "n"),
    ("S^{2n+1} with n odd", "n+1"),
    ("S*S^m or S*RP^m with m even", "m"),
    ("S*S^m or S*RP^m with m odd", "m-1"),
    ("S*CP^m", "m(m+1)"),
    ("S*HP^m", "2m(m+1)"),
    ("S*CaP^2", "24"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossEntry {
    pub name: String,
    pub family: CrossFamily,
    pub param: Option<u64>,
    pub base: BaseManifold,
    pub r_b: i64,
    pub r_nonhyp: i64,
    pub c_b: u64,
}

impl CrossEntry {
    pub fn new(family: CrossFamily, param: Option<u64>) -> Option<Self> {
        if !family.admits(param) {
            return None;
        }
        let (r_b, c_b) = family.table_values(param);
        Some(Self {
            name: family.instance_name(param),
            family,
            param,
            base: family.base(param),
            r_b,
            r_nonhyp: family.nonhyp_value(param),
            c_b,
        })
    }

    /// Whether the bounds recomputed from the Betti numbers match the table.
    pub fn consistent(&self) -> bool {
        homology::r_bound(&self.base) == self.r_b
            && homology::r_nonhyp_bound(&self.base) == self.r_nonhyp
            && self.base.chern_min() == self.c_b
            && self.base.total_rank() as i64 == self.r_b
    }
}

/// Instances of every family for the first few parameters.
pub fn cross_catalog() -> Vec<CrossEntry> {
    let mut out = Vec::new();
    for family in CrossFamily::ALL {
        match family.first_param() {
            None => out.extend(CrossEntry::new(family, None)),
            Some(first) => {
                let stride = match family {
                    CrossFamily::CosphereEvenSphere | CrossFamily::CosphereOddSphere => 2,
                    _ => 1,
                };
                out.extend((0..5).filter_map(|i| CrossEntry::new(family, Some(first + stride * i))));
            }
        }
    }
    out
}

fn render_table(header: &[&str], rows: &[Vec<&str>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[&str]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let rule = format!(
        "+{}+\n",
        widths.iter().map(|w| "-".repeat(w + 2)).collect::<Vec<_>>().join("+")
    );
    let mut out = rule.clone();
    out.push_str(&line(header));
    out.push_str(&rule);
    for row in rows {
        out.push_str(&line(row));
    }
    out.push_str(&rule);
    out
}

/// Both tables as aligned text.
pub fn render_text() -> String {
    let primary: Vec<Vec<&str>> = CrossFamily::ALL
        .iter()
        .map(|f| {
            let (name, r, c) = f.table_row();
            vec![name, r, c]
        })
        .collect();
    let nonhyp: Vec<Vec<&str>> = NONHYP_ROWS.iter().map(|&(name, r)| vec![name, r]).collect();
    let mut out = String::from("Lower bounds on the number of closed Reeb orbits\n\n");
    out.push_str(&render_table(&["Prequantization", "r_B = dim H_*(B;Q)", "c_B"], &primary));
    out.push_str("\nLower bounds on the number of non-hyperbolic closed Reeb orbits\n\n");
    out.push_str(&render_table(&["Prequantization", "r_B^non-hyp"], &nonhyp));
    out
}

/// One record per row of both tables.
pub fn table_records() -> Vec<Record> {
    let mut out = Vec::new();
    for family in CrossFamily::ALL {
        let (name, r, c) = family.table_row();
        out.push(
            Record::new()
                .with("record", "table")
                .with("table", "r_B")
                .with("family", family.key())
                .with("prequantization", name)
                .with("r_B", r)
                .with("c_B", c),
        );
    }
    for (name, r) in NONHYP_ROWS {
        out.push(
            Record::new()
                .with("record", "table")
                .with("table", "r_nonhyp")
                .with("prequantization", name)
                .with("r_nonhyp", r),
        );
    }
    out
}

/// One record per catalog instance, with its recomputed consistency.
pub fn entry_records() -> Vec<Record> {
    let mut out = Vec::new();
    for entry in cross_catalog() {
        let mut r = Record::new()
            .with("record", "entry")
            .with("name", &entry.name)
            .with("family", entry.family.key());
        if let Some(p) = entry.param {
            r.push("param", p);
        }
        r.push("n", entry.base.n());
        r.push("betti", join_list(entry.base.betti()));
        r.push("r_B", entry.r_b);
        r.push("r_nonhyp", entry.r_nonhyp);
        r.push("c_B", entry.c_b);
        r.push("consistent", entry.consistent());
        out.push(r);
    }
    out
}
