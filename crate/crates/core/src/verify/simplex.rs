//! Dense two-phase simplex over exact rationals with Bland's pivoting rule.
//! Variables are free; each is split into a positive and a negative part.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

/// Minimise `objective · z` over free variables `z`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            objective: vec![Rational::zero(); n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, cmp: Cmp, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.n_vars);
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    /// Sparse form of [`LinearProgram::add`].
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], cmp: Cmp, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.n_vars];
        for (i, v) in terms {
            coeffs[*i] += v;
        }
        self.add(coeffs, cmp, rhs);
    }

    pub fn solve(&self) -> LpResult {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    n_cols: usize,
    first_artificial: usize,
}

impl Tableau {
    // Columns: z⁺ (n), z⁻ (n), one slack per inequality, then artificials.
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.n_vars;
        let n_slack = lp.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
        let m = lp.constraints.len();
        let first_artificial = 2 * n + n_slack;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = 2 * n;
        let mut art = first_artificial;
        let mut arts_needed = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![Rational::zero(); first_artificial];
            for (i, a) in c.coeffs.iter().enumerate() {
                row[i] = a.clone();
                row[n + i] = -a;
            }
            let mut slack_col = None;
            match c.cmp {
                Cmp::Le => {
                    row[slack] = Rational::one();
                    slack_col = Some(slack);
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -Rational::one();
                    slack_col = Some(slack);
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                b = -b;
            }
            match slack_col.filter(|&s| row[s].is_positive()) {
                Some(s) => basis.push(s),
                None => {
                    basis.push(art);
                    arts_needed.push(rows.len());
                    art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        let n_cols = art;
        for row in rows.iter_mut() {
            row.resize(n_cols, Rational::zero());
        }
        for (k, &r) in arts_needed.iter().enumerate() {
            rows[r][first_artificial + k] = Rational::one();
        }
        Tableau {
            rows,
            rhs,
            basis,
            n_cols,
            first_artificial,
        }
    }

    fn pivot(&mut self, r: usize, col: usize, obj: &mut [Rational], obj_val: &mut Rational) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for (v, pv) in obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            *obj_val -= &f * &prhs;
        }
        self.basis[r] = col;
    }

    /// Minimises with reduced costs `obj` over columns `< limit`.
    /// `obj_val` tracks the negated objective value. Returns false if unbounded.
    fn optimise(&mut self, obj: &mut [Rational], obj_val: &mut Rational, limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, col, obj, obj_val);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpResult {
        let n = lp.n_vars;
        // Phase one: minimise the sum of artificials.
        if self.n_cols > self.first_artificial {
            let mut obj = vec![Rational::zero(); self.n_cols];
            let mut val = Rational::zero();
            for j in self.first_artificial..self.n_cols {
                obj[j] = Rational::one();
            }
            for i in 0..self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    for j in 0..self.n_cols {
                        if !self.rows[i][j].is_zero() {
                            obj[j] -= &self.rows[i][j];
                        }
                    }
                    val -= &self.rhs[i];
                }
            }
            self.optimise(&mut obj, &mut val, self.n_cols);
            if !val.is_zero() {
                return LpResult::Infeasible;
            }
            // Drive remaining artificials out; drop rows that are redundant.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(col) => {
                            let mut dummy = vec![Rational::zero(); self.n_cols];
                            let mut dv = Rational::zero();
                            self.pivot(i, col, &mut dummy, &mut dv);
                        }
                        None => {
                            self.rows.remove(i);
                            self.rhs.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        // Phase two on the structural and slack columns.
        let limit = self.first_artificial;
        let mut obj = vec![Rational::zero(); self.n_cols];
        for i in 0..n {
            obj[i] = lp.objective[i].clone();
            obj[n + i] = -&lp.objective[i];
        }
        let mut val = Rational::zero();
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            if !obj[b].is_zero() {
                let f = obj[b].clone();
                for j in 0..self.n_cols {
                    if !self.rows[i][j].is_zero() {
                        obj[j] -= &f * &self.rows[i][j];
                    }
                }
                val -= &f * &self.rhs[i];
            }
        }
        if !self.optimise(&mut obj, &mut val, limit) {
            return LpResult::Unbounded;
        }
        let mut z = vec![Rational::zero(); 2 * n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < 2 * n {
                z[b] = self.rhs[i].clone();
            }
        }
        let point: Vec<Rational> = (0..n).map(|i| &z[i] - &z[n + i]).collect();
        let value = point
            .iter()
            .zip(&lp.objective)
            .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        LpResult::Optimal { value, point }
    }
}
