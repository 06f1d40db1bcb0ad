//! Dense linear programs and a deterministic two-phase primal simplex.
//!
//! Problems are `minimize c·x` subject to rows `a·x {≤,=,≥} b` and bounds
//! `l ≤ x ≤ u` (`l` finite, `u` optional). The solver works on a dense
//! tableau: DEA instances have a few dozen rows and up to a few thousand
//! columns, so each pivot is a handful of dense row updates.
//!
//! Pricing is Dantzig's rule (most negative reduced cost, lowest column on
//! ties). The ratio test prefers the largest pivot among rows whose ratios
//! tie within tolerance, then the lowest row. When the
//! objective fails to improve for `stall_threshold` consecutive pivots the
//! solver switches to Bland's rule until the objective moves again, which
//! rules out cycling. Rows and columns are equilibrated by powers of two, and
//! the tableau is periodically rebuilt from the starting rows so rounding
//! does not accumulate across thousands of pivots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("row {row} has {got} coefficients, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("column index {col} out of range ({n_cols} columns)")]
    ColumnOutOfRange { col: usize, n_cols: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("solver options invalid: {0}")]
    BadOptions(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    n_cols: usize,
    objective: Vec<f64>,
    // row-major, n_rows × n_cols
    coeffs: Vec<f64>,
    senses: Vec<Sense>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<Option<f64>>,
}

impl LinearProgram {
    /// Empty program over `n_cols` variables, zero objective, bounds `[0, ∞)`.
    pub fn new(n_cols: usize) -> Self {
        Self {
            n_cols,
            objective: vec![0.0; n_cols],
            coeffs: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n_cols],
            upper: vec![None; n_cols],
        }
    }

    /// Convenience constructor from dense parts.
    pub fn from_dense(
        objective: Vec<f64>,
        rows: &[Vec<f64>],
        senses: &[Sense],
        rhs: &[f64],
    ) -> Result<Self, LpError> {
        let mut lp = Self::new(objective.len());
        lp.objective = objective;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != lp.n_cols {
                return Err(LpError::RowLength {
                    row: i,
                    expected: lp.n_cols,
                    got: row.len(),
                });
            }
            lp.add_row(row, senses[i], rhs[i]);
        }
        Ok(lp)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.senses.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn set_objective(&mut self, col: usize, coeff: f64) {
        self.objective[col] = coeff;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coeffs[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[Option<f64>] {
        &self.upper
    }

    pub fn set_bounds(&mut self, col: usize, lower: f64, upper: Option<f64>) {
        self.lower[col] = lower;
        self.upper[col] = upper;
    }

    /// Appends a dense row; returns its index.
    ///
    /// Panics if `coeffs.len() != n_cols`.
    pub fn add_row(&mut self, coeffs: &[f64], sense: Sense, rhs: f64) -> usize {
        assert_eq!(
            coeffs.len(),
            self.n_cols,
            "row length must equal column count"
        );
        self.coeffs.extend_from_slice(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self.senses.len() - 1
    }

    /// Appends a row given as `(column, coefficient)` pairs. Repeated columns
    /// accumulate.
    pub fn add_sparse_row(
        &mut self,
        entries: &[(usize, f64)],
        sense: Sense,
        rhs: f64,
    ) -> Result<usize, LpError> {
        let mut row = vec![0.0; self.n_cols];
        for &(col, v) in entries {
            if col >= self.n_cols {
                return Err(LpError::ColumnOutOfRange {
                    col,
                    n_cols: self.n_cols,
                });
            }
            row[col] += v;
        }
        Ok(self.add_row(&row, sense, rhs))
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if self.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("constraint matrix"));
        }
        if self.rhs.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("right-hand side"));
        }
        if self.lower.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("lower bounds"));
        }
        if self.upper.iter().flatten().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("upper bounds"));
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x` (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n_rows() {
            let lhs: f64 = self.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
            let gap = lhs - self.rhs[i];
            let v = match self.senses[i] {
                Sense::Le => gap.max(0.0),
                Sense::Ge => (-gap).max(0.0),
                Sense::Eq => gap.abs(),
            };
            worst = worst.max(v);
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v);
            if let Some(u) = self.upper[j] {
                worst = worst.max(v - u);
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl LpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `c·x` at the optimum; `+∞` when infeasible, `−∞` when unbounded,
    /// the last phase objective on iteration limit.
    pub objective: f64,
    /// Present iff `status == Optimal`.
    pub primal: Option<Vec<f64>>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Pivot and optimality tolerance.
    pub tol: f64,
    pub max_iter: usize,
    /// Non-improving pivots tolerated before switching to Bland's rule.
    pub stall_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 50_000,
            stall_threshold: 64,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64, max_iter: usize) -> Self {
        Self {
            tol,
            max_iter,
            ..Self::default()
        }
    }
}

/// Solves `lp` to optimality or reports why it could not.
pub fn solve(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    lp.validate()?;
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(LpError::BadOptions("tol must be positive"));
    }
    if opts.max_iter == 0 {
        return Err(LpError::BadOptions("max_iter must be positive"));
    }
    let infeasible = |iterations| LpSolution {
        status: LpStatus::Infeasible,
        objective: f64::INFINITY,
        primal: None,
        iterations,
    };
    if lp
        .lower
        .iter()
        .zip(&lp.upper)
        .any(|(&l, u)| u.is_some_and(|u| u < l))
    {
        return Ok(infeasible(0));
    }

    let mut tab = Tableau::build(lp, opts.tol);
    let mut iterations = 0;

    match tab.run(opts, &mut iterations, tab.n_total) {
        Phase::Optimal => {}
        Phase::IterationLimit => {
            return Ok(LpSolution {
                status: LpStatus::IterationLimit,
                objective: tab.value(),
                primal: None,
                iterations,
            })
        }
        // run never reports phase one as unbounded
        Phase::Unbounded => unreachable!("phase one cannot be unbounded"),
    }
    let b_scale = 1.0 + tab.rhs_scale;
    if tab.value() > 1e3 * opts.tol * b_scale {
        return Ok(infeasible(iterations));
    }
    tab.expel_artificials();
    tab.load_phase_two_costs(lp);

    let art_start = tab.art_start;
    match tab.run(opts, &mut iterations, art_start) {
        Phase::Optimal => {}
        Phase::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                objective: f64::NEG_INFINITY,
                primal: None,
                iterations,
            })
        }
        Phase::IterationLimit => {
            return Ok(LpSolution {
                status: LpStatus::IterationLimit,
                objective: tab.value() + tab.obj_shift,
                primal: None,
                iterations,
            })
        }
    }

    let mut x = lp.lower.clone();
    for (&b, v) in tab.basis.iter().zip(tab.basic_values()) {
        if b < lp.n_cols {
            x[b] += v * tab.col_scale[b];
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: lp.objective_value(&x),
        primal: Some(x),
        iterations,
    })
}

enum Phase {
    Optimal,
    Unbounded,
    IterationLimit,
}

struct Tableau {
    n_rows: usize,
    /// Structural + slack + artificial columns (rhs excluded).
    n_total: usize,
    art_start: usize,
    width: usize,
    data: Vec<f64>,
    /// Reduced costs; the final entry holds −(objective).
    cost: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    tol: f64,
    rhs_scale: f64,
    /// `c·l`, the objective contribution of the lower-bound shift.
    obj_shift: f64,
    /// Starting tableau rows, kept to recompute the final basic solution.
    orig: Vec<f64>,
    /// Starting row of each current row.
    row_map: Vec<usize>,
    /// Cost vector of the current phase over all columns.
    phase_cost: Vec<f64>,
    /// Structural column `j` of the tableau is `x_j / col_scale[j]`.
    col_scale: Vec<f64>,
    /// Columns whose reduced cost proved to be rounding noise in phase one.
    banned: Vec<bool>,
    phase_one: bool,
}

/// Pivots between rebuilds of the tableau from the starting rows.
const REINVERT_EVERY: usize = 32;

impl Tableau {
    fn build(lp: &LinearProgram, tol: f64) -> Self {
        let n = lp.n_cols;
        // Rows after shifting x = l + x', plus one row per finite upper bound.
        let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::with_capacity(lp.n_rows());
        for i in 0..lp.n_rows() {
            let a = lp.row(i).to_vec();
            let shift: f64 = a.iter().zip(&lp.lower).map(|(a, l)| a * l).sum();
            rows.push((a, lp.senses[i], lp.rhs[i] - shift));
        }
        for j in 0..n {
            if let Some(u) = lp.upper[j] {
                let mut a = vec![0.0; n];
                a[j] = 1.0;
                rows.push((a, Sense::Le, u - lp.lower[j]));
            }
        }
        // Power-of-two column then row equilibration: exact, and keeps
        // 1/x-sized ratio coefficients from swamping the tolerances.
        let pow2 = |m: f64| {
            if m > 0.0 {
                (-m.log2().round()).exp2()
            } else {
                1.0
            }
        };
        let col_scale: Vec<f64> = (0..n)
            .map(|j| pow2(rows.iter().fold(0.0f64, |m, r| m.max(r.0[j].abs()))))
            .collect();
        for (a, _, b) in rows.iter_mut() {
            a.iter_mut().zip(&col_scale).for_each(|(v, s)| *v *= s);
            let r = pow2(a.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            a.iter_mut().for_each(|v| *v *= r);
            *b *= r;
        }
        for (a, sense, b) in rows.iter_mut() {
            if *b < 0.0 {
                a.iter_mut().for_each(|v| *v = -*v);
                *b = -*b;
                *sense = match *sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
        }
        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
        let art_start = n + n_slack;
        let n_total = art_start + n_art;
        let width = n_total + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let mut next_slack = n;
        let mut next_art = art_start;
        let mut rhs_scale: f64 = 0.0;
        for (i, (a, sense, b)) in rows.iter().enumerate() {
            let row = &mut data[i * width..(i + 1) * width];
            row[..n].copy_from_slice(a);
            row[n_total] = *b;
            rhs_scale = rhs_scale.max(b.abs());
            match sense {
                Sense::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
        // Phase-one costs: 1 on each artificial, priced out against the
        // starting basis.
        let mut cost = vec![0.0; width];
        for i in 0..m {
            if basis[i] >= art_start {
                let row = &data[i * width..(i + 1) * width];
                for (c, &v) in cost.iter_mut().zip(row) {
                    *c -= v;
                }
            }
        }
        cost[art_start..n_total].fill(0.0);
        let mut is_basic = vec![false; n_total];
        for &b in &basis {
            is_basic[b] = true;
        }
        let obj_shift = lp.objective.iter().zip(&lp.lower).map(|(c, l)| c * l).sum();
        let mut phase_cost = vec![0.0; n_total];
        phase_cost[art_start..].iter_mut().for_each(|c| *c = 1.0);
        Self {
            col_scale,
            banned: vec![false; n_total],
            phase_one: true,
            phase_cost,
            orig: data.clone(),
            row_map: (0..m).collect(),
            n_rows: m,
            n_total,
            art_start,
            width,
            data,
            cost,
            basis,
            is_basic,
            tol,
            rhs_scale,
            obj_shift,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.n_total]
    }

    /// Current phase objective.
    fn value(&self) -> f64 {
        -self.cost[self.n_total]
    }

    fn run(&mut self, opts: &SolverOptions, iterations: &mut usize, limit: usize) -> Phase {
        let mut bland = false;
        let mut best = self.value();
        let mut stalled = 0;
        let mut since_reinvert = 0;
        loop {
            let entering = match self.price(limit, bland) {
                Some(e) => e,
                None if since_reinvert == 0 => return Phase::Optimal,
                None => {
                    // confirm optimality on a freshly rebuilt tableau
                    since_reinvert = 0;
                    if !self.reinvert() {
                        return Phase::Optimal;
                    }
                    continue;
                }
            };
            let Some(leaving) = self.ratio_test(entering, bland) else {
                if since_reinvert > 0 && self.reinvert() {
                    since_reinvert = 0;
                    continue;
                }
                if self.phase_one {
                    // phase one is bounded below, so this direction is noise
                    self.banned[entering] = true;
                    continue;
                }
                return Phase::Unbounded;
            };
            if *iterations >= opts.max_iter {
                return Phase::IterationLimit;
            }
            self.pivot(leaving, entering);
            *iterations += 1;
            since_reinvert += 1;
            if since_reinvert >= REINVERT_EVERY {
                self.reinvert();
                since_reinvert = 0;
            }
            let z = self.value();
            if z < best - self.tol * (1.0 + best.abs()) {
                best = z;
                stalled = 0;
                bland = false;
            } else {
                stalled += 1;
                if stalled >= opts.stall_threshold {
                    bland = true;
                }
            }
        }
    }

    fn price(&self, limit: usize, bland: bool) -> Option<usize> {
        let mut chosen = None;
        let mut most = -self.tol;
        for j in 0..limit {
            if self.is_basic[j] || self.banned[j] {
                continue;
            }
            let d = self.cost[j];
            if d < most {
                chosen = Some(j);
                if bland {
                    break;
                }
                most = d;
            }
        }
        chosen
    }

    fn ratio_test(&self, col: usize, bland: bool) -> Option<usize> {
        let mut min_ratio = f64::INFINITY;
        for i in 0..self.n_rows {
            let a = self.at(i, col);
            if a > self.tol {
                min_ratio = min_ratio.min(self.rhs(i).max(0.0) / a);
            }
        }
        if !min_ratio.is_finite() {
            return None;
        }
        let slack = self.tol * (1.0 + min_ratio);
        // Among near-ties Bland takes the lowest basic variable; otherwise the
        // largest pivot wins, which keeps the basis well conditioned on
        // degenerate vertices. Exact ties go to the lowest row.
        let mut chosen: Option<usize> = None;
        for i in 0..self.n_rows {
            let a = self.at(i, col);
            if a > self.tol && self.rhs(i).max(0.0) / a <= min_ratio + slack {
                let better = match chosen {
                    None => true,
                    Some(c) if bland => self.basis[i] < self.basis[c],
                    Some(c) => a > self.at(c, col),
                };
                if better {
                    chosen = Some(i);
                }
            }
        }
        chosen
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(r, e);
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            row.iter_mut().for_each(|v| *v *= inv);
            row[e] = 1.0;
        }
        let (before, rest) = self.data.split_at_mut(r * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[e];
            if f != 0.0 {
                for (v, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * p;
                }
                row[e] = 0.0;
                let b = &mut row[w - 1];
                if *b < 0.0 && *b > -self.tol {
                    *b = 0.0;
                }
            }
        }
        let f = self.cost[e];
        if f != 0.0 {
            for (c, &p) in self.cost.iter_mut().zip(pivot_row.iter()) {
                *c -= f * p;
            }
            self.cost[e] = 0.0;
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[e] = true;
        self.basis[r] = e;
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn expel_artificials(&mut self) {
        let mut redundant = Vec::new();
        for r in 0..self.n_rows {
            if self.basis[r] < self.art_start {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.art_start {
                if self.is_basic[j] {
                    continue;
                }
                let a = self.at(r, j).abs();
                if a > self.tol && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => self.pivot(r, j),
                None => redundant.push(r),
            }
        }
        if redundant.is_empty() {
            return;
        }
        let w = self.width;
        let mut data = Vec::with_capacity((self.n_rows - redundant.len()) * w);
        let mut basis = Vec::with_capacity(self.n_rows - redundant.len());
        let mut row_map = Vec::with_capacity(basis.capacity());
        for r in 0..self.n_rows {
            if redundant.contains(&r) {
                self.is_basic[self.basis[r]] = false;
            } else {
                data.extend_from_slice(&self.data[r * w..(r + 1) * w]);
                basis.push(self.basis[r]);
                row_map.push(self.row_map[r]);
            }
        }
        self.data = data;
        self.basis = basis;
        self.row_map = row_map;
        self.n_rows = self.basis.len();
    }

    /// Basic variable values solved afresh from the starting rows, with one
    /// round of iterative refinement. Falls back to the tableau's own values
    /// when the basis matrix looks singular or the result is infeasible.
    fn basic_values(&self) -> Vec<f64> {
        let m = self.n_rows;
        let tableau: Vec<f64> = (0..m).map(|i| self.rhs(i).max(0.0)).collect();
        let w = self.width;
        let b: Vec<f64> = self
            .row_map
            .iter()
            .map(|&r| self.orig[r * w + self.n_total])
            .collect();
        let mat: Vec<f64> = self
            .row_map
            .iter()
            .flat_map(|&r| self.basis.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.orig[r * w + c])
            .collect();
        let Some(lu) = Lu::factor(mat.clone(), m) else {
            return tableau;
        };
        let mut x = lu.solve(b.clone());
        let resid: Vec<f64> = (0..m)
            .map(|i| b[i] - (0..m).map(|k| mat[i * m + k] * x[k]).sum::<f64>())
            .collect();
        for (xi, d) in x.iter_mut().zip(lu.solve(resid)) {
            *xi += d;
        }
        let floor = -1e3 * self.tol * (1.0 + self.rhs_scale);
        if x.iter()
            .zip(&tableau)
            .all(|(&v, &t)| v.is_finite() && v >= floor && (v - t).abs() <= 1e-6 * (1.0 + t.abs()))
        {
            x.into_iter().map(|v| v.max(0.0)).collect()
        } else {
            tableau
        }
    }

    /// Rebuilds every row and the reduced costs as `B⁻¹` times the starting
    /// rows. Returns false, leaving the tableau alone, when `B` is singular.
    fn reinvert(&mut self) -> bool {
        let m = self.n_rows;
        let w = self.width;
        let mat: Vec<f64> = self
            .row_map
            .iter()
            .flat_map(|&r| self.basis.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.orig[r * w + c])
            .collect();
        let Some(lu) = Lu::factor(mat, m) else {
            return false;
        };
        let mut col = vec![0.0; m];
        for j in 0..w {
            for (v, &r) in col.iter_mut().zip(&self.row_map) {
                *v = self.orig[r * w + j];
            }
            let solved = lu.solve(col.clone());
            for (i, v) in solved.into_iter().enumerate() {
                self.data[i * w + j] = v;
            }
        }
        for (i, &b) in self.basis.iter().enumerate() {
            for j in 0..w - 1 {
                if self.is_basic[j] {
                    self.data[i * w + j] = if j == b { 1.0 } else { 0.0 };
                }
            }
            let rhs = &mut self.data[i * w + w - 1];
            if *rhs < 0.0 && *rhs > -self.tol {
                *rhs = 0.0;
            }
        }
        for j in 0..w {
            let mut c = if j < self.n_total {
                self.phase_cost[j]
            } else {
                0.0
            };
            for (i, &b) in self.basis.iter().enumerate() {
                let cb = self.phase_cost[b];
                if cb != 0.0 {
                    c -= cb * self.data[i * w + j];
                }
            }
            self.cost[j] = c;
        }
        for &b in &self.basis {
            self.cost[b] = 0.0;
        }
        self.banned.iter_mut().for_each(|b| *b = false);
        true
    }

    fn load_phase_two_costs(&mut self, lp: &LinearProgram) {
        let n = lp.n_cols;
        self.phase_one = false;
        self.phase_cost.iter_mut().for_each(|c| *c = 0.0);
        for j in 0..n {
            self.phase_cost[j] = lp.objective[j] * self.col_scale[j];
        }
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        self.cost[..self.n_total].copy_from_slice(&self.phase_cost);
        for i in 0..self.n_rows {
            let cb = self.phase_cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * self.width..(i + 1) * self.width];
                for (c, &v) in self.cost.iter_mut().zip(row) {
                    *c -= cb * v;
                }
            }
        }
        for &b in &self.basis {
            self.cost[b] = 0.0;
        }
    }
}

/// Dense LU factorization with partial pivoting.
struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<f64>, n: usize) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))?;
            if a[p * n + k].abs() <= 1e-13 * scale {
                return None;
            }
            if p != k {
                for c in 0..n {
                    a.swap(p * n + c, k * n + c);
                }
                perm.swap(p, k);
            }
            let piv = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                a[i * n + k] = f;
                if f != 0.0 {
                    for c in k + 1..n {
                        a[i * n + c] -= f * a[k * n + c];
                    }
                }
            }
        }
        Some(Self { n, a, perm })
    }

    fn solve(&self, b: Vec<f64>) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.a[i * n + k] * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.a[i * n + k] * y[k];
            }
            y[i] /= self.a[i * n + i];
        }
        y
    }
}
