//! Exact bounded-variable primal simplex for
//!
//! ```text
//!   maximize   c·x
//!   subject to a_r·x ≥ 0   for every row r
//!              0 ≤ x_j ≤ 1
//! ```
//!
//! `x = 0` is always feasible, so no phase one is needed. Each row gets a
//! surplus variable `s_r = a_r·x ≥ 0`; the surpluses form the starting basis.
//! Nonbasic variables sit at a bound, and Bland's smallest-index rule picks both
//! the entering and the leaving variable, which rules out cycling on the
//! (always degenerate) starting vertex.

use serde::Serialize;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LPInstance {
    pub objective: Vec<Rational>,
    /// Each row is read as `Σ_j row[j]·x_j ≥ 0`.
    pub rows: Vec<Vec<Rational>>,
}

impl LPInstance {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn value_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    pub fn row_slacks(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(Rational::is_probability)
            && self.row_slacks(x).iter().all(|s| !s.is_negative())
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LPSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    pub pivots: usize,
}

struct Tableau {
    /// `B⁻¹·[A | -I]`, one row per constraint.
    t: Vec<Vec<Rational>>,
    /// Values of the basic variables, by row.
    beta: Vec<Rational>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
    cost: Vec<Rational>,
    k: usize,
}

impl Tableau {
    fn upper(&self, j: usize) -> Option<Rational> {
        (j < self.k).then(Rational::one)
    }

    fn reduced_cost(&self, j: usize) -> Rational {
        let mut d = self.cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !self.cost[b].is_zero() && !self.t[i][j].is_zero() {
                d -= &self.cost[b] * &self.t[i][j];
            }
        }
        d
    }

    fn entering(&self) -> Option<usize> {
        (0..self.cost.len()).find(|&j| {
            if self.is_basic[j] {
                return false;
            }
            let d = self.reduced_cost(j);
            (!self.at_upper[j] && d.is_positive()) || (self.at_upper[j] && d.is_negative())
        })
    }

    fn nonbasic_value(&self, j: usize) -> Rational {
        if self.at_upper[j] {
            self.upper(j)
                .expect("only bounded variables sit at an upper bound")
        } else {
            Rational::zero()
        }
    }

    /// One simplex step. Returns false once optimal.
    fn step(&mut self) -> bool {
        let Some(j) = self.entering() else {
            return false;
        };
        let dir = if self.at_upper[j] {
            -Rational::one()
        } else {
            Rational::one()
        };
        // (limit, leaving row, leaves at upper)
        let mut best: Option<(Rational, usize, bool)> = None;
        for i in 0..self.t.len() {
            let g = &self.t[i][j] * &dir;
            let b = self.basis[i];
            let cand = if g.is_positive() {
                Some((&self.beta[i] / &g, false))
            } else if g.is_negative() {
                self.upper(b).map(|ub| ((ub - &self.beta[i]) / -&g, true))
            } else {
                None
            };
            if let Some((lim, up)) = cand {
                let better = match &best {
                    None => true,
                    Some((cur, row, _)) => lim < *cur || (lim == *cur && b < self.basis[*row]),
                };
                if better {
                    best = Some((lim, i, up));
                }
            }
        }
        let flip = self.upper(j);
        let take_flip = match (&flip, &best) {
            (Some(range), Some((lim, _, _))) => range <= lim,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!("objective is bounded on the unit box"),
        };
        let step = if take_flip {
            flip.clone().expect("checked")
        } else {
            best.as_ref().expect("checked").0.clone()
        };
        for i in 0..self.t.len() {
            let g = &self.t[i][j] * &dir;
            if !g.is_zero() {
                self.beta[i] -= g * &step;
            }
        }
        let entering_value = if self.at_upper[j] {
            self.upper(j).expect("bounded") - &step
        } else {
            step
        };
        if take_flip {
            self.at_upper[j] = !self.at_upper[j];
            return true;
        }
        let (_, r, leaves_up) = best.expect("checked");
        let leaving = self.basis[r];
        let pivot = self.t[r][j].clone();
        for v in self.t[r].iter_mut() {
            *v = &*v / &pivot;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.beta[r] = entering_value;
        self.basis[r] = j;
        self.is_basic[j] = true;
        self.at_upper[j] = false;
        self.is_basic[leaving] = false;
        self.at_upper[leaving] = leaves_up;
        true
    }
}

/// Solves the instance exactly and returns an optimal vertex.
pub fn lp_solve(lp: &LPInstance) -> LPSolution {
    let k = lp.num_vars();
    let m = lp.rows.len();
    let n = k + m;
    // a_r·x - s_r = 0 with basis -I: B⁻¹·[A | -I] = [-A | I]
    let t = lp
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            assert_eq!(row.len(), k, "row length must equal the variable count");
            let mut out: Vec<Rational> = row.iter().map(|a| -a).collect();
            out.extend((0..m).map(|c| {
                if c == r {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            out
        })
        .collect();
    let mut cost = lp.objective.clone();
    cost.extend(std::iter::repeat_n(Rational::zero(), m));
    let mut tab = Tableau {
        t,
        beta: vec![Rational::zero(); m],
        basis: (k..n).collect(),
        is_basic: (0..n).map(|j| j >= k).collect(),
        at_upper: vec![false; n],
        cost,
        k,
    };
    let mut pivots = 0;
    while tab.step() {
        pivots += 1;
    }
    let mut x: Vec<Rational> = (0..k).map(|j| tab.nonbasic_value(j)).collect();
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < k {
            x[b] = tab.beta[i].clone();
        }
    }
    let value = lp.value_at(&x);
    debug_assert!(lp.is_feasible(&x));
    LPSolution { x, value, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| Rational::from_int(a)).collect()
    }

    /// Every vertex of the feasible region: each coordinate at 0, at 1, or free,
    /// with as many rows tight as there are free coordinates.
    fn vertex_enumeration_max(lp: &LPInstance) -> Rational {
        let k = lp.num_vars();
        let mut best = lp.value_at(&vec![Rational::zero(); k]);
        let total = 3usize.pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let mut fixed = vec![Rational::zero(); k];
            let mut free = Vec::new();
            for (j, slot) in fixed.iter_mut().enumerate() {
                match c % 3 {
                    0 => {}
                    1 => *slot = Rational::one(),
                    _ => free.push(j),
                }
                c /= 3;
            }
            if free.len() > lp.rows.len() {
                continue;
            }
            let row_sets: Vec<Vec<usize>> = match (free.len(), lp.rows.len()) {
                (0, _) => vec![vec![]],
                (1, m) => (0..m).map(|a| vec![a]).collect(),
                (2, 2) => vec![vec![0, 1]],
                _ => continue,
            };
            for rows in row_sets {
                // rhs_r = -(row_r · fixed); solve Σ_free row_r[j]·x_j = rhs_r
                let rhs: Vec<Rational> = rows.iter().map(|&a| -dot(&lp.rows[a], &fixed)).collect();
                let coef = |a: usize, j: usize| lp.rows[rows[a]][free[j]].clone();
                let sol: Option<Vec<Rational>> = match free.len() {
                    0 => Some(vec![]),
                    1 => {
                        let a = coef(0, 0);
                        (!a.is_zero()).then(|| vec![&rhs[0] / &a])
                    }
                    _ => {
                        let det = coef(0, 0) * coef(1, 1) - coef(0, 1) * coef(1, 0);
                        (!det.is_zero()).then(|| {
                            vec![
                                (&rhs[0] * coef(1, 1) - &rhs[1] * coef(0, 1)) / &det,
                                (coef(0, 0) * &rhs[1] - coef(1, 0) * &rhs[0]) / &det,
                            ]
                        })
                    }
                };
                let Some(sol) = sol else { continue };
                let mut x = fixed.clone();
                for (j, v) in free.iter().zip(sol) {
                    x[*j] = v;
                }
                if lp.is_feasible(&x) {
                    best = best.max(lp.value_at(&x));
                }
            }
        }
        best
    }

    #[test]
    fn two_sender_example() {
        let lp = LPInstance {
            objective: vec![r(1, 2), r(-1, 2)],
            rows: vec![vec![r(-1, 2), r(1, 1)], vec![r(1, 1), r(-1, 2)]],
        };
        let sol = lp_solve(&lp);
        assert_eq!(sol.x, vec![r(1, 1), r(1, 2)]);
        assert_eq!(sol.value, r(1, 4));
    }

    #[test]
    fn all_nonnegative_goes_to_upper_bounds() {
        let lp = LPInstance {
            objective: ints(&[1, 2, 0]),
            rows: vec![ints(&[1, 0, 3]), ints(&[0, 2, 1])],
        };
        let sol = lp_solve(&lp);
        // the zero-cost third variable is free to stay at either bound
        assert_eq!(&sol.x[..2], &ints(&[1, 1])[..]);
        assert_eq!(sol.value, r(3, 1));
    }

    #[test]
    fn blocked_directions_stay_at_origin() {
        // p = (1/2, 1/2), A = B = (1, -2), C = (-1, 1)
        let row = vec![r(1, 2), r(-1, 1)];
        let lp = LPInstance {
            objective: vec![r(-1, 2), r(1, 2)],
            rows: vec![row.clone(), row],
        };
        let sol = lp_solve(&lp);
        assert_eq!(sol.value, Rational::zero());
        assert_eq!(sol.x, ints(&[0, 0]));
    }

    #[test]
    fn single_variable() {
        for (c, a, b, want) in [(1, 1, 1, 1), (1, -1, 1, 0), (-1, 1, 1, 0), (1, 0, 0, 1)] {
            let lp = LPInstance {
                objective: ints(&[c]),
                rows: vec![ints(&[a]), ints(&[b])],
            };
            assert_eq!(lp_solve(&lp).x, ints(&[want]));
        }
    }

    #[test]
    fn no_rows_is_a_box() {
        let lp = LPInstance {
            objective: ints(&[3, -1, 0]),
            rows: vec![],
        };
        let sol = lp_solve(&lp);
        assert_eq!(sol.value, r(3, 1));
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            k in 1usize..=4,
            c in prop::collection::vec(-6i64..=6, 4),
            a in prop::collection::vec(-6i64..=6, 4),
            b in prop::collection::vec(-6i64..=6, 4),
            w in prop::collection::vec(1i64..=3, 4),
        ) {
            let scale = |v: &[i64]| (0..k).map(|j| Rational::new(v[j] * w[j], 7)).collect::<Vec<_>>();
            let lp = LPInstance { objective: scale(&c), rows: vec![scale(&a), scale(&b)] };
            let sol = lp_solve(&lp);
            prop_assert!(lp.is_feasible(&sol.x));
            prop_assert_eq!(&sol.value, &lp.value_at(&sol.x));
            prop_assert_eq!(sol.value, vertex_enumeration_max(&lp));
            let fractional = sol.x.iter().filter(|v| v.is_positive() && **v < Rational::one()).count();
            prop_assert!(fractional <= 2);
        }
    }
}
