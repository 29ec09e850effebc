//! Linear codes over `F_q`, stored as canonical reduced-row-echelon
//! generator matrices.
//!
//! Two codes are equal exactly when their canonical matrices are equal, so
//! code equality is plain structural equality here.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field_tower::{BaseField, FieldElement, FieldTower, SubfieldEmbedding};

/// Default number of codewords `min_distance` may enumerate.
pub const DEFAULT_DISTANCE_CAP: u64 = 100_000_000;

/// Column multipliers `theta_i`, all nonzero elements of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multipliers(Vec<FieldElement>);

impl Multipliers {
    pub fn new(tower: &FieldTower, theta: Vec<FieldElement>) -> Result<Self> {
        for (i, &t) in theta.iter().enumerate() {
            if t.is_zero() {
                return Err(Error::ZeroMultiplier(i));
            }
            if !tower.in_base(t) {
                return Err(Error::NotInBaseField(t.enc()));
            }
        }
        Ok(Multipliers(theta))
    }

    pub fn ones(n: usize) -> Self {
        Multipliers(vec![FieldElement::ONE; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[FieldElement] {
        &self.0
    }

    /// Coordinatewise inverse.
    pub fn inverse(&self, tower: &FieldTower) -> Self {
        Multipliers(self.0.iter().map(|&t| tower.base().inv(t).expect("multipliers are nonzero")).collect())
    }
}

/// Reduces `rows` to reduced row echelon form in place, drops zero rows and
/// returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<FieldElement>>, field: &BaseField) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        if inv != FieldElement::ONE {
            for x in rows[r][c..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = field.sub(*x, field.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A basis of `{ x in F_q^n : M x = 0 }`.
pub fn nullspace(rows: &[Vec<FieldElement>], n: usize, field: &BaseField) -> Vec<Vec<FieldElement>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, field);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![FieldElement::ZERO; n];
            v[f] = FieldElement::ONE;
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

fn rank(mut rows: Vec<Vec<FieldElement>>, field: &BaseField) -> usize {
    rref(&mut rows, field).len()
}

fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// A subspace of `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    tower: Arc<FieldTower>,
    n: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// Row span of `rows`; entries must lie in `F_q`.
    pub fn from_rows(tower: &Arc<FieldTower>, n: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        for row in &rows {
            if row.len() != n {
                return Err(Error::RowLength { expected: n, got: row.len() });
            }
            if let Some(x) = row.iter().find(|&&x| !tower.in_base(x)) {
                return Err(Error::NotInBaseField(x.enc()));
            }
        }
        let mut rows = rows;
        let pivots = rref(&mut rows, tower.base());
        Ok(LinearCode { tower: Arc::clone(tower), n, rows, pivots })
    }

    pub fn zero(tower: &Arc<FieldTower>, n: usize) -> Self {
        LinearCode { tower: Arc::clone(tower), n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(tower: &Arc<FieldTower>, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![FieldElement::ZERO; n];
                r[i] = FieldElement::ONE;
                r
            })
            .collect();
        LinearCode { tower: Arc::clone(tower), n, rows, pivots: (0..n).collect() }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Canonical generator matrix.
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn field(&self) -> &BaseField {
        self.tower.base()
    }

    fn check_same_space(&self, other: &LinearCode) -> Result<()> {
        if *self.tower != *other.tower || self.n != other.n {
            return Err(Error::Mismatch);
        }
        Ok(())
    }

    /// Subspace equality.
    pub fn equals(&self, other: &LinearCode) -> Result<bool> {
        self.check_same_space(other)?;
        Ok(self.rows == other.rows)
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        if v.len() != self.n {
            return false;
        }
        let f = self.field();
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Codeword `sum message_i * row_i`.
    pub fn encode(&self, message: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field();
        let mut out = vec![FieldElement::ZERO; self.n];
        for (&m, row) in message.iter().zip(&self.rows) {
            if m.is_zero() {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(m, y));
            }
        }
        out
    }

    /// Euclidean orthogonal complement.
    pub fn dual(&self) -> LinearCode {
        let basis = nullspace(&self.rows, self.n, self.field());
        LinearCode::from_rows(&self.tower, self.n, basis).expect("nullspace rows lie in F_q")
    }

    /// `{ (theta_1 x_1, ..., theta_n x_n) : x in C }`
    pub fn diag_scale(&self, theta: &Multipliers) -> Result<LinearCode> {
        if theta.len() != self.n {
            return Err(Error::RowLength { expected: self.n, got: theta.len() });
        }
        let f = self.field();
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().zip(theta.as_slice()).map(|(&x, &t)| f.mul(x, t)).collect())
            .collect();
        LinearCode::from_rows(&self.tower, self.n, rows)
    }

    /// Span of coordinatewise products of pairs of codewords.
    pub fn schur_square(&self) -> LinearCode {
        let f = self.field();
        let mut products = Vec::new();
        for i in 0..self.k() {
            for j in i..self.k() {
                products.push(self.rows[i].iter().zip(&self.rows[j]).map(|(&a, &b)| f.mul(a, b)).collect());
            }
        }
        LinearCode::from_rows(&self.tower, self.n, products).expect("products stay in F_q")
    }

    /// Closure under `(c_0, ..., c_{n-1}) -> (eta c_{n-1}, c_0, ..., c_{n-2})`.
    pub fn is_constacyclic(&self, eta: FieldElement) -> Result<bool> {
        if eta.is_zero() {
            return Err(Error::InvalidParameters("eta must be nonzero".into()));
        }
        if !self.tower.in_base(eta) {
            return Err(Error::NotInBaseField(eta.enc()));
        }
        if self.n == 0 {
            return Ok(true);
        }
        let f = self.field();
        Ok(self.rows.iter().all(|row| {
            let mut shifted = Vec::with_capacity(self.n);
            shifted.push(f.mul(eta, row[self.n - 1]));
            shifted.extend_from_slice(&row[..self.n - 1]);
            self.contains(&shifted)
        }))
    }

    /// MDS test: every `k` columns of a generator matrix are independent.
    /// Runs on whichever of the code and its dual has the smaller dimension,
    /// since a code is MDS exactly when its dual is.
    pub fn is_mds(&self) -> bool {
        let k = self.k();
        if k == 0 || k == self.n {
            return true;
        }
        if 2 * k > self.n {
            return self.dual().is_mds();
        }
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let minor: Vec<Vec<FieldElement>> =
                self.rows.iter().map(|row| subset.iter().map(|&c| row[c]).collect()).collect();
            if rank(minor, self.field()) < k {
                return false;
            }
            if !next_combination(&mut subset, self.n) {
                return true;
            }
        }
    }

    /// Number of codewords visited by projective enumeration.
    pub fn projective_count(&self) -> u128 {
        let q = self.tower.q() as u128;
        (q.pow(self.k() as u32) - 1) / (q - 1)
    }

    fn projective_weights(&self, cap: u64) -> Result<Vec<u64>> {
        let needed = self.projective_count();
        if needed > cap as u128 {
            return Err(Error::CapExceeded { needed, cap });
        }
        let f = self.field();
        let q = self.tower.q() as usize;
        let k = self.k();
        let n = self.n;
        // step[j][v] = (v+1)*row_j - v*row_j, wrapping at v = q-1
        let multiples: Vec<Vec<Vec<FieldElement>>> = self
            .rows
            .iter()
            .map(|row| {
                (0..q).map(|v| row.iter().map(|&x| f.mul(FieldElement(v as u32), x)).collect()).collect()
            })
            .collect();
        let step: Vec<Vec<Vec<FieldElement>>> = multiples
            .iter()
            .map(|m| {
                (0..q)
                    .map(|v| m[(v + 1) % q].iter().zip(&m[v]).map(|(&a, &b)| f.sub(a, b)).collect())
                    .collect()
            })
            .collect();

        // A task fixes the leading coordinate l (message digit 1) and, when
        // there is one, the value of digit l+1; the rest is enumerated.
        let mut tasks = Vec::new();
        for l in 0..k {
            if l + 1 < k {
                tasks.extend((0..q).map(|v| (l, Some(v))));
            } else {
                tasks.push((l, None));
            }
        }
        let hist = tasks
            .par_iter()
            .map(|&(l, fixed)| {
                let mut hist = vec![0u64; n + 1];
                let mut cw = self.rows[l].clone();
                let free_start = match fixed {
                    Some(v) => {
                        for (x, &y) in cw.iter_mut().zip(&multiples[l + 1][v]) {
                            *x = f.add(*x, y);
                        }
                        l + 2
                    }
                    None => l + 1,
                };
                let mut digits = vec![0usize; k];
                loop {
                    hist[weight(&cw)] += 1;
                    let mut j = k;
                    loop {
                        if j == free_start {
                            return hist;
                        }
                        j -= 1;
                        let v = digits[j];
                        for (x, &y) in cw.iter_mut().zip(&step[j][v]) {
                            *x = f.add(*x, y);
                        }
                        digits[j] = (v + 1) % q;
                        if digits[j] != 0 {
                            break;
                        }
                    }
                }
            })
            .reduce(
                || vec![0u64; n + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(hist)
    }

    /// Exact minimum distance.
    ///
    /// Either enumerates one codeword per scalar class or finds the
    /// smallest set of linearly dependent columns of a parity-check matrix,
    /// whichever has the smaller worst-case count; `cap` bounds that count.
    pub fn min_distance(&self, cap: u64) -> Result<usize> {
        if self.k() == 0 {
            return Err(Error::InvalidParameters("the zero code has no minimum distance".into()));
        }
        let primal = self.projective_count();
        let columns = self.column_subset_count();
        if primal <= columns && primal <= cap as u128 {
            self.min_distance_by_enumeration(cap)
        } else if columns <= cap as u128 {
            Ok(self.min_distance_by_columns())
        } else {
            Err(Error::CapExceeded { needed: primal.min(columns), cap })
        }
    }

    fn min_distance_by_enumeration(&self, cap: u64) -> Result<usize> {
        let hist = self.projective_weights(cap)?;
        Ok(hist.iter().position(|&c| c > 0).expect("k >= 1 gives a nonzero codeword"))
    }

    /// Subsets of at most `n - k` columns, the most the column search visits.
    fn column_subset_count(&self) -> u128 {
        let r = self.n - self.k();
        let mut binom: u128 = 1;
        let mut total: u128 = 0;
        for w in 1..=r {
            binom = binom.saturating_mul((self.n + 1 - w) as u128) / w as u128;
            total = total.saturating_add(binom);
        }
        total
    }

    fn min_distance_by_columns(&self) -> usize {
        let h = self.dual();
        let r = h.k();
        for w in 1..=r {
            let mut subset: Vec<usize> = (0..w).collect();
            loop {
                let minor: Vec<Vec<FieldElement>> =
                    h.rows.iter().map(|row| subset.iter().map(|&c| row[c]).collect()).collect();
                if rank(minor, self.field()) < w {
                    return w;
                }
                if !next_combination(&mut subset, self.n) {
                    break;
                }
            }
        }
        r + 1
    }

    /// Number of codewords of each weight `0..=n`.
    pub fn weight_distribution(&self, cap: u64) -> Result<Vec<u64>> {
        let mut hist = if self.k() == 0 {
            vec![0u64; self.n + 1]
        } else {
            let scalars = (self.tower.q() - 1) as u64;
            self.projective_weights(cap)?.into_iter().map(|c| c * scalars).collect()
        };
        hist[0] = 1;
        Ok(hist)
    }

    /// Generator-matrix file: `"p h n k"` followed by `k` rows of `n`
    /// canonical encodings.
    pub fn to_matrix_file(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.tower.p(), self.tower.h(), self.n, self.k());
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.enc().to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_matrix_file(text: &str) -> Result<LinearCode> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let nums = |line: &str| -> Result<Vec<u64>> {
            line.split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
                .collect()
        };
        let head = nums(header)?;
        let [p, h, n, k] = head[..] else {
            return Err(Error::Parse("header must be \"p h n k\"".into()));
        };
        let p = u32::try_from(p).map_err(|_| Error::Parse("p out of range".into()))?;
        let h = u32::try_from(h).map_err(|_| Error::Parse("h out of range".into()))?;
        let tower = Arc::new(FieldTower::new(p, h)?);
        let (n, k) = (n as usize, k as usize);
        let mut rows = Vec::with_capacity(k);
        for line in lines {
            let row = nums(line)?.into_iter().map(|v| tower.base_element(v)).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} rows, found {}", rows.len())));
        }
        let code = LinearCode::from_rows(&tower, n, rows)?;
        if code.k() != k {
            return Err(Error::Parse(format!("rows have rank {}, header says {k}", code.k())));
        }
        Ok(code)
    }
}

/// Advances `subset` to the next increasing combination of `0..n`.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
        return false;
    };
    subset[i] += 1;
    for j in i + 1..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}

/// The Hermitian puncture code of a code `C` over `F_Q`, `Q = q^2`:
/// `{ x in F_q^n : sum_i x_i u_i v_i^q = 0 for all u, v in C }`.
///
/// The result lives over the tower of order `q` (`h/2`), with `F_q`
/// identified with the subfield of `F_Q` through [`SubfieldEmbedding`].
pub fn hermitian_puncture_code(code: &LinearCode) -> Result<LinearCode> {
    let big = code.tower();
    if !big.h().is_multiple_of(2) {
        return Err(Error::OddDegree(big.h()));
    }
    let small = Arc::new(FieldTower::new(big.p(), big.h() / 2)?);
    let emb = SubfieldEmbedding::new(small.base(), big.base())?;
    let bf = big.base();
    let conj = |x: FieldElement| big.hermitian_conj(x).expect("h is even and x lies in F_Q");

    // Split F_Q = F_q + delta*F_q.
    let delta =
        bf.elements().find(|&x| emb.to_small(x).is_none()).expect("a proper subfield misses some element");
    let denom_inv = bf.inv(bf.sub(delta, conj(delta))).expect("delta lies outside the subfield");
    let split = |w: FieldElement| {
        let w2 = bf.mul(bf.sub(w, conj(w)), denom_inv);
        let w1 = bf.sub(w, bf.mul(delta, w2));
        (
            emb.to_small(w1).expect("first coordinate lies in the subfield"),
            emb.to_small(w2).expect("second coordinate lies in the subfield"),
        )
    };

    let n = code.n();
    let mut constraints = Vec::with_capacity(2 * code.k() * code.k());
    for u in code.rows() {
        for v in code.rows() {
            let (re, im): (Vec<_>, Vec<_>) =
                u.iter().zip(v).map(|(&a, &b)| split(bf.mul(a, conj(b)))).unzip();
            constraints.push(re);
            constraints.push(im);
        }
    }
    let basis = nullspace(&constraints, n, small.base());
    LinearCode::from_rows(&small, n, basis)
}
