//! Euler-number bookkeeping for candidate modular monodromy groups: the
//! exhaustive table of quadruples `(deg_jG, deg_jE, #I*, #IV*)` with
//! `deg_jG * deg_jE + 6 #I* + 8 #IV* = 24`, the torsion counts forced by the
//! congruences `e2 = deg_jG (mod 2)`, `e3 = deg_jG (mod 3)`, the discard
//! rules, and the integer bound on stratum dimensions per group degree.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("pole count 2 + deg/6 - 2 e3/3 - e2/2 is not an integer")]
    NonIntegralPoles,
    #[error("no feasible fiber counts for these inputs")]
    Infeasible,
}

/// Why a column is discarded, when it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiscardRule {
    /// `e3 = 2` forces `#IV* = 2`.
    Rule3,
    /// `deg_jE = 1` is rigid unless `#I* > 0` and `#IV* = 0`.
    Rule4,
}

/// One column of the budget table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetRow {
    pub deg_jg: u32,
    pub deg_je: u32,
    pub n_istar: u32,
    pub n_ivstar: u32,
    pub e2: u32,
    pub e3: u32,
    pub discard: Option<DiscardRule>,
}

impl BudgetRow {
    pub fn euler(&self) -> u32 {
        self.deg_jg * self.deg_je + 6 * self.n_istar + 8 * self.n_ivstar
    }
}

fn make_row(deg_jg: u32, deg_je: u32, n_istar: u32, n_ivstar: u32) -> BudgetRow {
    let e2 = deg_jg % 2;
    let e3 = deg_jg % 3;
    let discard = if e3 == 2 && n_ivstar != 2 {
        Some(DiscardRule::Rule3)
    } else if deg_je == 1 && (n_istar == 0 || n_ivstar > 0) {
        Some(DiscardRule::Rule4)
    } else {
        None
    };
    BudgetRow {
        deg_jg,
        deg_je,
        n_istar,
        n_ivstar,
        e2,
        e3,
        discard,
    }
}

/// All solutions of the Euler budget with `deg_jG >= 2`, ordered by
/// `(deg_jG, deg_jE)`.  `low` selects group degree <= 6, `high` the rest.
pub fn enumerate_budget(low: bool) -> Vec<BudgetRow> {
    let mut rows = Vec::new();
    for deg_jg in 2..=24u32 {
        if low != (deg_jg <= 6) {
            continue;
        }
        for deg_je in 1..=24u32 {
            let base = deg_jg * deg_je;
            if base > 24 {
                break;
            }
            for n_ivstar in 0..=3u32 {
                let with_iv = base + 8 * n_ivstar;
                if with_iv > 24 {
                    break;
                }
                if (24 - with_iv) % 6 != 0 {
                    continue;
                }
                let n_istar = (24 - with_iv) / 6;
                rows.push(make_row(deg_jg, deg_je, n_istar, n_ivstar));
            }
        }
    }
    // within one (deg_jg, deg_je) cell, larger #I* first to match the
    // published column order (IV* count increasing)
    rows.sort_by_key(|r| (r.deg_jg, r.deg_je, r.n_ivstar));
    rows
}

/// Checks that a quadruple appears as a non-discarded budget column.
pub fn is_live_column(deg_jg: u32, deg_je: u32, n_istar: u32, n_ivstar: u32) -> bool {
    enumerate_budget(deg_jg <= 6).iter().any(|r| {
        r.deg_jg == deg_jg
            && r.deg_je == deg_je
            && r.n_istar == n_istar
            && r.n_ivstar == n_ivstar
            && r.discard.is_none()
    })
}

/// Number of poles of the degree-`deg_jg` quotient map, from its
/// ramification bookkeeping: `2 + deg/6 - 2 e3/3 - e2/2`.
pub fn n_poles(deg_jg: u32, e2: u32, e3: u32) -> Result<u32, BudgetError> {
    let num = 24 + 2 * i64::from(deg_jg) - 8 * i64::from(e3) - 6 * i64::from(e2);
    if num <= 0 || num % 12 != 0 {
        return Err(BudgetError::NonIntegralPoles);
    }
    Ok((num / 12) as u32)
}

/// Exact maximum of `s_inf + s_0 + s_1 + 2 s* - 6` over nonnegative integers
/// subject to the Euler bound `24 >= deg_jE * deg_jG + 2 s_0 + 3 s_1 + 6 s*`,
/// the pole bound `s_inf <= deg_jE * n_poles`, and `s_0 = 0` when `e3 = 0`,
/// `s_1 = 0` when `e2 = 0`.  Searched exhaustively; every variable is
/// bounded by 24.
pub fn max_stratum_dim(deg_jg: u32, e2: u32, e3: u32, n_poles: u32) -> Result<i64, BudgetError> {
    if deg_jg == 0 {
        return Err(BudgetError::Infeasible);
    }
    let mut best: Option<i64> = None;
    for deg_je in 1..=24 / deg_jg {
        let base = deg_je * deg_jg;
        for s_star in 0..=(24 - base) / 6 {
            for s1 in 0..=(24 - base - 6 * s_star) / 3 {
                if e2 == 0 && s1 > 0 {
                    continue;
                }
                for s0 in 0..=(24 - base - 6 * s_star - 3 * s1) / 2 {
                    if e3 == 0 && s0 > 0 {
                        continue;
                    }
                    let s_inf = deg_je * n_poles;
                    let dim = i64::from(s_inf) + i64::from(s0) + i64::from(s1)
                        + 2 * i64::from(s_star)
                        - 6;
                    best = Some(best.map_or(dim, |b: i64| b.max(dim)));
                }
            }
        }
    }
    best.ok_or(BudgetError::Infeasible)
}

/// The seven live group degrees with their torsion data and dimension bound,
/// ordered as in the reference table: degree, e2, e3, poles, bound.
pub fn dimension_bound_table() -> Vec<(u32, u32, u32, u32, i64)> {
    [2u32, 3, 4, 9, 6, 12, 18]
        .iter()
        .map(|&d| {
            let (e2, e3) = (d % 2, d % 3);
            let p = n_poles(d, e2, e3).expect("live degrees have integral pole counts");
            let m = max_stratum_dim(d, e2, e3, p).expect("feasible");
            (d, e2, e3, p, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_table_has_23_columns() {
        let rows = enumerate_budget(true);
        assert_eq!(rows.len(), 23);
        let degs: Vec<u32> = rows.iter().map(|r| r.deg_jg).collect();
        assert_eq!(
            degs,
            vec![2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 5, 6, 6, 6, 6]
        );
        for r in &rows {
            assert_eq!(r.euler(), 24);
            assert!(r.e2 < 2 && r.e2 % 2 == r.deg_jg % 2);
            assert!(r.e3 < 3 && r.e3 % 3 == r.deg_jg % 3);
        }
    }

    #[test]
    fn high_table_has_10_columns() {
        let rows = enumerate_budget(false);
        assert_eq!(rows.len(), 10);
        let degs: Vec<u32> = rows.iter().map(|r| r.deg_jg).collect();
        assert_eq!(degs, vec![8, 8, 8, 9, 10, 12, 12, 16, 18, 24]);
    }

    #[test]
    fn surviving_group_degrees() {
        let mut live: Vec<u32> = enumerate_budget(true)
            .into_iter()
            .chain(enumerate_budget(false))
            .filter(|r| r.discard.is_none())
            .map(|r| r.deg_jg)
            .collect();
        live.sort_unstable();
        live.dedup();
        assert_eq!(live, vec![2, 3, 4, 6, 9, 12, 18]);
    }

    #[test]
    fn pole_counts() {
        assert_eq!(n_poles(2, 0, 2).unwrap(), 1);
        assert_eq!(n_poles(12, 0, 0).unwrap(), 4);
        assert_eq!(n_poles(6, 0, 0).unwrap(), 3);
        assert!(n_poles(4, 0, 0).is_err());
    }

    #[test]
    fn dimension_bounds() {
        assert_eq!(max_stratum_dim(9, 1, 0, 3).unwrap(), 2);
        assert_eq!(max_stratum_dim(18, 0, 0, 5).unwrap(), 1);
        assert_eq!(max_stratum_dim(3, 1, 0, 2).unwrap(), 10);
        let table: Vec<i64> = dimension_bound_table().iter().map(|r| r.4).collect();
        assert_eq!(table, vec![6, 10, 6, 2, 6, 2, 1]);
    }
}
