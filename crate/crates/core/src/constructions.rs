//! Builders for the code families: generalised Reed-Solomon codes on the
//! projective line, cyclic and constacyclic codes from generator
//! polynomials, the Grassl-Rötteler codes, the trace-type evaluation codes
//! on the `(q+1)`-st roots of unity, and the Segre and Glynn codes.
//!
//! Coordinate `s` (`0 <= s <= q`) of every length-`q+1` code corresponds
//! to the root of unity `alpha^s` and, for cyclic codes, to `X^s`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_tower::{FieldElement, FieldTower};
use crate::linear_code::{LinearCode, Multipliers};
use crate::polynomial::Poly;

/// The four parity cases of the Grassl-Rötteler construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseKind {
    /// `k`, `q` odd; generator `g1`.
    #[serde(rename = "G1_ODD_ODD")]
    G1OddOdd,
    /// `k`, `q` even; generator `g1`.
    #[serde(rename = "G1_EVEN_EVEN")]
    G1EvenEven,
    /// `k` odd, `q` even; generator `g2`.
    #[serde(rename = "G2_KODD_QEVEN")]
    G2KOddQEven,
    /// `k` even, `q` odd; constacyclic generator `g3`.
    #[serde(rename = "G3_KEVEN_QODD")]
    G3KEvenQOdd,
}

impl CaseKind {
    pub fn for_params(q: u32, k: u32) -> CaseKind {
        match (q.is_multiple_of(2), k.is_multiple_of(2)) {
            (false, false) => CaseKind::G1OddOdd,
            (true, true) => CaseKind::G1EvenEven,
            (true, false) => CaseKind::G2KOddQEven,
            (false, true) => CaseKind::G3KEvenQOdd,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CaseKind::G1OddOdd => "G1_ODD_ODD",
            CaseKind::G1EvenEven => "G1_EVEN_EVEN",
            CaseKind::G2KOddQEven => "G2_KODD_QEVEN",
            CaseKind::G3KEvenQOdd => "G3_KEVEN_QODD",
        }
    }

    pub fn lemma(self) -> Lemma {
        match self {
            CaseKind::G1OddOdd | CaseKind::G2KOddQEven => Lemma::Trace,
            CaseKind::G1EvenEven | CaseKind::G3KEvenQOdd => Lemma::Twisted,
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Shape of the evaluation code on the roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// Odd `k`: coordinate `s` is `h(alpha^s) + h(alpha^s)^q`.
    Trace,
    /// Even `k`: coordinate `s` is `omega^(sq) h(alpha^s) + omega^s h(alpha^s)^q`.
    Twisted,
}

impl Lemma {
    pub fn tag(self) -> &'static str {
        match self {
            Lemma::Trace => "LEMMA1",
            Lemma::Twisted => "LEMMA2",
        }
    }
}

/// A dispatched Grassl-Rötteler instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrCase {
    pub kind: CaseKind,
    pub q: u32,
    pub k: u32,
    pub r: u32,
    /// Constacyclic shift factor: 1, or `omega^(q+1)` for `g3`.
    pub eta: FieldElement,
    /// The generator polynomial, coefficients in `F_q`.
    pub g: Poly,
}

impl GrCase {
    pub fn lemma(&self) -> Lemma {
        self.kind.lemma()
    }

    pub fn n(&self) -> usize {
        self.q as usize + 1
    }

    /// Degree bound on `h_a` that makes it fit the evaluation code.
    pub fn h_degree_bound(&self) -> usize {
        match self.lemma() {
            Lemma::Trace => (self.k as usize - 1) / 2,
            Lemma::Twisted => self.k as usize / 2 - 1,
        }
    }
}

/// A point of the projective line over `F_q`, normalized to `(x, 1)` or
/// `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    x1: FieldElement,
    x2: FieldElement,
}

impl ProjectivePoint {
    pub fn new(tower: &FieldTower, x1: FieldElement, x2: FieldElement) -> Result<Self> {
        let f = tower.base();
        if !tower.in_base(x1) || !tower.in_base(x2) {
            return Err(Error::NotInBaseField(x1.enc().max(x2.enc())));
        }
        if !x2.is_zero() {
            Ok(ProjectivePoint { x1: f.div(x1, x2)?, x2: FieldElement::ONE })
        } else if !x1.is_zero() {
            Ok(ProjectivePoint { x1: FieldElement::ONE, x2: FieldElement::ZERO })
        } else {
            Err(Error::InvalidParameters("(0, 0) is not a projective point".into()))
        }
    }

    pub fn infinity() -> Self {
        ProjectivePoint { x1: FieldElement::ONE, x2: FieldElement::ZERO }
    }

    pub fn affine(x: FieldElement) -> Self {
        ProjectivePoint { x1: x, x2: FieldElement::ONE }
    }

    pub fn x1(&self) -> FieldElement {
        self.x1
    }

    pub fn x2(&self) -> FieldElement {
        self.x2
    }
}

/// Evaluations of the monomials `x1^j x2^(k-1-j)`, `j = 0..k`, at each point.
pub fn rs_base_matrix(
    tower: &FieldTower,
    k: usize,
    points: &[ProjectivePoint],
) -> Result<Vec<Vec<FieldElement>>> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidParameters(format!("k = {k} must lie in 1..={}", points.len())));
    }
    let mut seen = points.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != points.len() {
        return Err(Error::InvalidParameters("evaluation points must be distinct".into()));
    }
    let f = tower.base();
    Ok((0..k)
        .map(|j| {
            points.iter().map(|pt| f.mul(f.pow(pt.x1, j as u64), f.pow(pt.x2, (k - 1 - j) as u64))).collect()
        })
        .collect())
}

/// The elements of `F_q` in encoding order, then the point at infinity.
pub fn canonical_points(tower: &FieldTower) -> Vec<ProjectivePoint> {
    tower
        .base()
        .elements()
        .map(ProjectivePoint::affine)
        .chain(std::iter::once(ProjectivePoint::infinity()))
        .collect()
}

/// Point `s` is the class of `decompose(omega^s)`, so that
/// `(x1 + e*x2)^(q-1) = alpha^s`.
pub fn roots_of_unity_points(tower: &FieldTower) -> Vec<ProjectivePoint> {
    (0..=tower.q() as u64)
        .map(|s| {
            let (x1, x2) = tower.decompose(tower.pow(tower.omega(), s));
            ProjectivePoint::new(tower, x1, x2).expect("omega^s is nonzero")
        })
        .collect()
}

/// Span of the `k = n - deg g` shifts of `g`'s coefficient vector.
pub fn cyclic_code_from_generator(
    tower: &Arc<FieldTower>,
    g: &Poly,
    n: usize,
    eta: FieldElement,
) -> Result<LinearCode> {
    let deg = g.degree().ok_or(Error::BadGenerator("zero polynomial".into()))?;
    if deg > n {
        return Err(Error::BadGenerator(format!("degree {deg} exceeds length {n}")));
    }
    if !g.coefficients_in_subfield(tower) {
        return Err(Error::BadGenerator("coefficients outside F_q".into()));
    }
    if !g.divides(&Poly::binomial(tower, n, eta), tower)? {
        return Err(Error::BadGenerator(format!("does not divide X^{n} - {eta}")));
    }
    let rows = (0..n - deg)
        .map(|a| (0..n).map(|s| if s >= a { g.coeff(s - a) } else { FieldElement::ZERO }).collect())
        .collect();
    LinearCode::from_rows(tower, n, rows)
}

fn alpha_pow(tower: &FieldTower, e: i64) -> FieldElement {
    let order = tower.q() as i64 + 1;
    tower.pow(tower.alpha(), e.rem_euclid(order) as u64)
}

/// The generator polynomial `g1`, `g2` or `g3` for `(q, k)`.
pub fn gr_generator_poly(tower: &FieldTower, k: u32) -> Result<GrCase> {
    let q = tower.q();
    if k == 0 || k > q {
        return Err(Error::InvalidParameters(format!("k = {k} must lie in 1..={q}")));
    }
    let kind = CaseKind::for_params(q, k);
    let (qi, ki) = (q as i64, k as i64);
    let (r, roots, eta): (i64, Vec<FieldElement>, FieldElement) = match kind {
        CaseKind::G1OddOdd | CaseKind::G1EvenEven => {
            let r = (qi - ki) / 2;
            (r, (-r..=r).map(|i| alpha_pow(tower, i)).collect(), FieldElement::ONE)
        }
        CaseKind::G2KOddQEven => {
            let r = (qi - ki - 1) / 2;
            let roots = (qi / 2 - r..=qi / 2 + r + 1).map(|i| alpha_pow(tower, i)).collect();
            (r, roots, FieldElement::ONE)
        }
        CaseKind::G3KEvenQOdd => {
            let r = (qi - ki + 1) / 2;
            let w = tower.omega();
            let roots = (-r + 1..=r).map(|i| tower.mul(w, alpha_pow(tower, i))).collect();
            (r, roots, tower.pow(w, q as u64 + 1))
        }
    };
    if r < 0 {
        return Err(Error::InvalidParameters(format!("k = {k} out of range for case {kind}")));
    }
    let g = Poly::from_roots(&roots, tower);
    if !g.coefficients_in_subfield(tower) {
        return Err(Error::BadGenerator(format!("{kind} generator has coefficients outside F_q")));
    }
    if g.degree() != Some((q + 1 - k) as usize) {
        return Err(Error::BadGenerator(format!("{kind} generator has the wrong degree")));
    }
    if !g.divides(&Poly::binomial(tower, q as usize + 1, eta), tower)? {
        return Err(Error::BadGenerator(format!("{kind} generator does not divide X^(q+1) - eta")));
    }
    Ok(GrCase { kind, q, k, r: r as u32, eta, g })
}

/// The `[q+1, k]` Grassl-Rötteler code over `F_q`.
pub fn gr_code(tower: &Arc<FieldTower>, k: u32) -> Result<(LinearCode, GrCase)> {
    let case = gr_generator_poly(tower, k)?;
    let code = cyclic_code_from_generator(tower, &case.g, case.n(), case.eta)?;
    Ok((code, case))
}

/// Coordinate `s` of the evaluation code for polynomial `h`.
pub fn lemma_eval(tower: &FieldTower, lemma: Lemma, h: &Poly, s: u64) -> FieldElement {
    let v = h.eval(tower.pow(tower.alpha(), s), tower);
    let vq = tower.frobenius_q(v);
    match lemma {
        Lemma::Trace => tower.add(v, vq),
        Lemma::Twisted => {
            let ws = tower.pow(tower.omega(), s);
            tower.add(tower.mul(tower.frobenius_q(ws), v), tower.mul(ws, vq))
        }
    }
}

/// The full evaluation vector of `h`, coordinates `s = 0..=q`.
pub fn lemma_eval_vector(tower: &FieldTower, lemma: Lemma, h: &Poly) -> Vec<FieldElement> {
    (0..=tower.q() as u64).map(|s| lemma_eval(tower, lemma, h, s)).collect()
}

fn evaluation_code(tower: &Arc<FieldTower>, lemma: Lemma, max_deg: usize) -> Result<LinearCode> {
    let mut rows = Vec::with_capacity(2 * (max_deg + 1));
    for i in 0..=max_deg {
        for c in [FieldElement::ONE, tower.e()] {
            rows.push(lemma_eval_vector(tower, lemma, &Poly::monomial(c, i)));
        }
    }
    LinearCode::from_rows(tower, tower.q() as usize + 1, rows)
}

/// `{ (h(alpha^s) + h(alpha^s)^q)_s : deg h <= (k-1)/2 }` for odd `k`.
pub fn lemma1_code(tower: &Arc<FieldTower>, k: u32) -> Result<LinearCode> {
    if k.is_multiple_of(2) || k == 0 || k > tower.q() {
        return Err(Error::InvalidParameters(format!("k = {k} must be odd and at most q")));
    }
    evaluation_code(tower, Lemma::Trace, (k as usize - 1) / 2)
}

/// `{ (omega^(sq) h(alpha^s) + omega^s h(alpha^s)^q)_s : deg h <= k/2 - 1 }`
/// for even `k`.
pub fn lemma2_code(tower: &Arc<FieldTower>, k: u32) -> Result<LinearCode> {
    if k % 2 == 1 || k == 0 || k > tower.q() {
        return Err(Error::InvalidParameters(format!("k = {k} must be even, positive and at most q")));
    }
    evaluation_code(tower, Lemma::Twisted, k as usize / 2 - 1)
}

/// The evaluation code matching the case's parity.
pub fn lemma_code(tower: &Arc<FieldTower>, case: &GrCase) -> Result<LinearCode> {
    match case.lemma() {
        Lemma::Trace => lemma1_code(tower, case.k),
        Lemma::Twisted => lemma2_code(tower, case.k),
    }
}

/// The polynomial `h_a` whose evaluation vector reproduces, up to the
/// predicted multipliers, the `a`-th shift of `g`.
pub fn h_a_poly(tower: &FieldTower, case: &GrCase, a: u32) -> Result<Poly> {
    if a >= case.k {
        return Err(Error::InvalidParameters(format!("a = {a} must lie in 0..{}", case.k)));
    }
    let q = case.q as i64;
    let a = a as i64;
    let c: Vec<(i64, FieldElement)> =
        case.g.coeffs().iter().enumerate().map(|(j, &cj)| (j as i64, cj)).collect();
    // sum_j c_j alpha^(m (j + a))
    let twisted_sum = |m: i64| {
        c.iter().fold(FieldElement::ZERO, |acc, &(j, cj)| {
            tower.add(acc, tower.mul(cj, alpha_pow(tower, m * (j + a))))
        })
    };
    let g_sum = c.iter().fold(FieldElement::ZERO, |acc, &(_, cj)| tower.add(acc, cj));
    let beta = tower.beta();

    let mut coeffs = vec![FieldElement::ZERO; (q as usize).div_ceil(2) + 2];
    let mut put = |deg: i64, v: FieldElement| {
        let d = deg as usize;
        coeffs[d] = tower.add(coeffs[d], v);
    };
    match case.kind {
        CaseKind::G1OddOdd => {
            for i in 1..=(q - 1) / 2 {
                put((q + 1) / 2 - i, twisted_sum(i));
            }
            let signed = c.iter().fold(FieldElement::ZERO, |acc, &(j, cj)| {
                let term = if (j + a) % 2 == 0 { cj } else { tower.neg(cj) };
                tower.add(acc, term)
            });
            put(0, tower.mul(signed, beta));
            put((q + 1) / 2, tower.mul(g_sum, beta));
        }
        CaseKind::G1EvenEven => {
            for i in 1..=q / 2 {
                put(q / 2 - i, twisted_sum(i));
            }
            put(q / 2, tower.mul(g_sum, beta));
        }
        CaseKind::G2KOddQEven => {
            for i in 1..=q / 2 {
                put(q / 2 + 1 - i, twisted_sum(i + q / 2));
            }
            put(0, tower.mul(g_sum, beta));
        }
        CaseKind::G3KEvenQOdd => {
            let w = tower.omega();
            for i in 1..=(q + 1) / 2 {
                let v = c.iter().fold(FieldElement::ZERO, |acc, &(j, cj)| {
                    let term = tower.mul(tower.pow(w, (j + a) as u64), alpha_pow(tower, i * (j + a)));
                    tower.add(acc, tower.mul(cj, term))
                });
                put((q + 1) / 2 - i, v);
            }
        }
    }
    Ok(Poly::new(coeffs))
}

/// Column multipliers `theta_s` with `diag(theta) <g>` equal to the
/// evaluation code.
pub fn predicted_multipliers(tower: &FieldTower, case: &GrCase) -> Multipliers {
    let f = tower.base();
    let ratio = match case.kind {
        CaseKind::G1OddOdd => f.neg(FieldElement::ONE),
        CaseKind::G1EvenEven => {
            // omega^((q+1) s/2) read as nu^s with nu^2 = omega^(q+1).
            let norm = tower.pow(tower.omega(), case.q as u64 + 1);
            f.sqrt_char2(norm).expect("this case has even q")
        }
        CaseKind::G2KOddQEven => FieldElement::ONE,
        CaseKind::G3KEvenQOdd => f.neg(tower.pow(tower.omega(), case.q as u64 + 1)),
    };
    let theta = (0..case.n() as u64).map(|s| f.pow(ratio, s)).collect();
    Multipliers::new(tower, theta).expect("powers of a nonzero F_q element")
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Columns `(1, t, t^(2^e), t^(2^e + 1))` for `t` in `F_(2^hh)`, plus
/// `(0, 0, 0, 1)`.
pub fn segre_code(hh: u32, e: u32) -> Result<LinearCode> {
    if hh == 0 || e == 0 || gcd(e, hh) != 1 {
        return Err(Error::InvalidParameters(format!("need e >= 1 coprime to h, got (h, e) = ({hh}, {e})")));
    }
    let tower = Arc::new(FieldTower::new(2, hh)?);
    let f = tower.base();
    let twist = 1u64 << e;
    let mut columns: Vec<[FieldElement; 4]> = f
        .elements()
        .map(|t| {
            let tt = f.pow(t, twist);
            [FieldElement::ONE, t, tt, f.mul(tt, t)]
        })
        .collect();
    columns.push([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]);
    let n = columns.len();
    let rows = (0..4).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    LinearCode::from_rows(&tower, n, rows)
}

/// The smallest-encoding `eta` in `F_9` with `eta^4 = -1`.
pub fn glynn_eta(tower: &FieldTower) -> FieldElement {
    let f = tower.base();
    let minus_one = f.neg(FieldElement::ONE);
    f.elements().find(|&x| f.pow(x, 4) == minus_one).expect("-1 is a fourth power in F_9")
}

/// Columns `(1, t, t^2 + eta t^6, t^3, t^4)` for `t` in `F_9`, plus
/// `(0, 0, 0, 0, 1)`.
pub fn glynn_code() -> Result<LinearCode> {
    let tower = Arc::new(FieldTower::new(3, 2)?);
    let f = tower.base();
    let eta = glynn_eta(&tower);
    let mut columns: Vec<[FieldElement; 5]> = f
        .elements()
        .map(|t| {
            let p = |e| f.pow(t, e);
            [FieldElement::ONE, t, f.add(p(2), f.mul(eta, p(6))), p(3), p(4)]
        })
        .collect();
    let mut inf = [FieldElement::ZERO; 5];
    inf[4] = FieldElement::ONE;
    columns.push(inf);
    let n = columns.len();
    let rows = (0..5).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    LinearCode::from_rows(&tower, n, rows)
}
