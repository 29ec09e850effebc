//! Constructive certification.
//!
//! A code `C` is certified generalised Reed-Solomon by exhibiting points
//! and multipliers `theta` with `C = diag(theta) * RS_k(points)`; every
//! certificate returned here has been re-checked by rebuilding the scaled
//! code and comparing canonical matrices.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constructions::{
    self, canonical_points, gr_generator_poly, h_a_poly, lemma_code, lemma_eval_vector,
    predicted_multipliers, roots_of_unity_points, rs_base_matrix, CaseKind, ProjectivePoint,
};
use crate::error::{Error, Result};
use crate::field_tower::{prime_power, prime_powers_up_to, FieldElement, FieldTower};
use crate::linear_code::{hermitian_puncture_code, nullspace, LinearCode, Multipliers, DEFAULT_DISTANCE_CAP};
use crate::polynomial::Poly;

/// Default number of projective candidates tried in a solution space.
pub const DEFAULT_NULLSPACE_CAP: u64 = 1_000_000;

/// Above this solution-space dimension a verification report flags an anomaly.
pub const NULLSPACE_ANOMALY_DIM: usize = 3;

const SAMPLING_SEED: u64 = 0x6772_5f67_7273;

/// Enumeration limits shared by the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub distance: u64,
    pub nullspace: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { distance: DEFAULT_DISTANCE_CAP, nullspace: DEFAULT_NULLSPACE_CAP }
    }
}

/// Result of a diagonal-equivalence search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSearch {
    /// `theta` with `C = diag_scale(B, theta)`. `None` means the search
    /// was exhaustive and no such `theta` exists.
    pub multipliers: Option<Multipliers>,
    /// Dimension of the linear space of `x` with `diag(x) C` inside `B`.
    pub nullspace_dim: usize,
}

/// Searches for `theta` with `C = diag_scale(B, theta)`.
///
/// The unknowns `x_s` play the role of `1/theta_s`: `diag(x) C` lies in `B`
/// iff every row of `C`, scaled by `x`, is orthogonal to every row of
/// `B`'s dual. Any all-nonzero solution gives an equivalence because both
/// codes have the same dimension. Candidates are enumerated exhaustively
/// when the solution space has at most `cap` projective points, otherwise
/// `cap` seeded random samples are drawn and failure is reported as
/// [`Error::CapExceeded`] rather than as non-existence.
pub fn diagonal_equivalence(c: &LinearCode, b: &LinearCode, cap: u64) -> Result<DiagonalSearch> {
    if c.tower() != b.tower() || c.n() != b.n() || c.k() != b.k() {
        return Err(Error::Mismatch);
    }
    let tower = c.tower();
    let f = tower.base();
    let n = c.n();
    let dual = b.dual();
    let mut system = Vec::with_capacity(c.k() * dual.k());
    for d in c.rows() {
        for p in dual.rows() {
            system.push(d.iter().zip(p).map(|(&x, &y)| f.mul(x, y)).collect::<Vec<_>>());
        }
    }
    let basis = nullspace(&system, n, f);
    let dim = basis.len();

    let combine = |coeffs: &[FieldElement]| -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; n];
        for (&a, row) in coeffs.iter().zip(&basis) {
            if a.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(a, y));
            }
        }
        v
    };
    let try_candidate = |x: Vec<FieldElement>| -> Option<Multipliers> {
        if x.iter().any(|v| v.is_zero()) {
            return None;
        }
        let x = Multipliers::new(tower, x).ok()?;
        let scaled = c.diag_scale(&x).ok()?;
        (scaled == *b).then(|| x.inverse(tower))
    };

    let found = |m| Ok(DiagonalSearch { multipliers: Some(m), nullspace_dim: dim });
    if dim == 0 {
        return Ok(DiagonalSearch { multipliers: None, nullspace_dim: 0 });
    }
    let q = tower.q() as u128;
    let projective = (q.pow(dim as u32) - 1) / (q - 1);
    if projective <= cap as u128 {
        let q = q as u32;
        for lead in 0..dim {
            let mut digits = vec![0u32; dim];
            digits[lead] = 1;
            loop {
                let coeffs: Vec<FieldElement> = digits.iter().map(|&d| FieldElement(d)).collect();
                if let Some(theta) = try_candidate(combine(&coeffs)) {
                    return found(theta);
                }
                if !advance(&mut digits[lead + 1..], q) {
                    break;
                }
            }
        }
        return Ok(DiagonalSearch { multipliers: None, nullspace_dim: dim });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    for _ in 0..cap {
        let coeffs: Vec<FieldElement> = (0..dim).map(|_| FieldElement(rng.gen_range(0..tower.q()))).collect();
        if let Some(theta) = try_candidate(combine(&coeffs)) {
            return found(theta);
        }
    }
    Err(Error::CapExceeded { needed: projective, cap })
}

/// Base-`q` increment; `false` once the digits wrap back to zero.
fn advance(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d = (*d + 1) % q;
        if *d != 0 {
            return true;
        }
    }
    false
}

/// Certificate that `code = diag(theta) * rowspace(rs_base_matrix(k, points))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsWitness {
    pub points: Vec<ProjectivePoint>,
    pub theta: Multipliers,
    pub nullspace_dim: usize,
}

impl GrsWitness {
    /// Rebuilds the scaled Reed-Solomon code and compares it with `code`.
    pub fn check(&self, code: &LinearCode) -> Result<bool> {
        let tower = code.tower();
        let rs = LinearCode::from_rows(tower, code.n(), rs_base_matrix(tower, code.k(), &self.points)?)?;
        rs.diag_scale(&self.theta)?.equals(code)
    }
}

impl Serialize for GrsWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let points: Vec<[u32; 2]> = self.points.iter().map(|p| [p.x1().enc(), p.x2().enc()]).collect();
        let theta: Vec<u32> = self.theta.as_slice().iter().map(|t| t.enc()).collect();
        let mut s = serializer.serialize_struct("GrsWitness", 3)?;
        s.serialize_field("theta", &theta)?;
        s.serialize_field("points", &points)?;
        s.serialize_field("nullspace_dim", &self.nullspace_dim)?;
        s.end()
    }
}

/// Tries to write `code` as a scaled Reed-Solomon code on `points`, in the
/// given coordinate order.
pub fn grs_witness(code: &LinearCode, points: &[ProjectivePoint], cap: u64) -> Result<Option<GrsWitness>> {
    if points.len() != code.n() {
        return Err(Error::RowLength { expected: code.n(), got: points.len() });
    }
    if code.k() == 0 {
        return Err(Error::InvalidParameters("the zero code has no GRS witness".into()));
    }
    let tower = code.tower();
    let rs = LinearCode::from_rows(tower, code.n(), rs_base_matrix(tower, code.k(), points)?)?;
    let search = diagonal_equivalence(code, &rs, cap)?;
    let Some(theta) = search.multipliers else {
        return Ok(None);
    };
    let witness = GrsWitness { points: points.to_vec(), theta, nullspace_dim: search.nullspace_dim };
    if !witness.check(code)? {
        return Ok(None);
    }
    Ok(Some(witness))
}

/// Outcome of the coordinate-order search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Witness(GrsWitness),
    /// Every coordinate order was searched exhaustively.
    NoWitness,
    /// Some searches hit the nullspace cap.
    Inconclusive,
}

/// Largest length the coordinate-order search accepts.
pub const MAX_PROBE_LENGTH: usize = 10;

/// Searches all assignments of coordinates to points of the projective line.
///
/// `PGL(2, q)` is sharply 3-transitive and maps Reed-Solomon codes to
/// diagonally equivalent ones, so the first three coordinates are pinned
/// to infinity, 0 and 1; the rest range over injective assignments.
pub fn grs_probe_permutations(code: &LinearCode, cap: u64) -> Result<ProbeOutcome> {
    let n = code.n();
    if n > MAX_PROBE_LENGTH {
        return Err(Error::InvalidParameters(format!(
            "coordinate-order search is limited to length {MAX_PROBE_LENGTH}, got {n}"
        )));
    }
    let tower = code.tower();
    if code.k() == 0 || n > tower.q() as usize + 1 || !code.is_mds() {
        return Ok(ProbeOutcome::NoWitness);
    }
    let all = canonical_points(tower);
    // canonical order: 0, 1, ..., then infinity
    let pinned = [all[all.len() - 1], all[0], all[1]];
    let mut chosen: Vec<ProjectivePoint> = pinned.iter().copied().take(n.min(3)).collect();
    let rest: Vec<ProjectivePoint> = all.iter().copied().filter(|p| !pinned.contains(p)).collect();
    let mut used = vec![false; rest.len()];
    let mut inconclusive = false;
    let found = probe_rec(code, cap, &rest, &mut used, &mut chosen, &mut inconclusive)?;
    Ok(match found {
        Some(w) => ProbeOutcome::Witness(w),
        None if inconclusive => ProbeOutcome::Inconclusive,
        None => ProbeOutcome::NoWitness,
    })
}

fn probe_rec(
    code: &LinearCode,
    cap: u64,
    rest: &[ProjectivePoint],
    used: &mut [bool],
    chosen: &mut Vec<ProjectivePoint>,
    inconclusive: &mut bool,
) -> Result<Option<GrsWitness>> {
    if chosen.len() == code.n() {
        return match grs_witness(code, chosen, cap) {
            Ok(w) => Ok(w),
            Err(Error::CapExceeded { .. }) => {
                *inconclusive = true;
                Ok(None)
            }
            Err(e) => Err(e),
        };
    }
    for i in 0..rest.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        chosen.push(rest[i]);
        let w = probe_rec(code, cap, rest, used, chosen, inconclusive)?;
        chosen.pop();
        used[i] = false;
        if w.is_some() {
            return Ok(w);
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

/// Everything `verify_theorem` checked for one `(q, k)`.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub q: u32,
    pub k: u32,
    pub case: CaseKind,
    pub n: usize,
    /// Dimension of the constructed code.
    pub dim: usize,
    pub d: Option<usize>,
    /// Whether `d` came from enumeration (otherwise from the MDS check).
    pub d_enumerated: bool,
    pub mds: bool,
    pub g: Vec<FieldElement>,
    /// Degree, subfield, divisibility and constacyclic-closure checks on `g`.
    pub g_ok: bool,
    pub theta: Vec<FieldElement>,
    pub lemma_equal: bool,
    pub h_a_ok: bool,
    pub witness: Option<GrsWitness>,
    pub status: Status,
}

impl VerificationReport {
    pub fn params_ok(&self) -> bool {
        let q = self.q as usize;
        let k = self.k as usize;
        self.n == q + 1 && self.dim == k && self.d == Some(q + 2 - k) && self.mds
    }

    /// Witness solution space larger than expected for an MDS code.
    pub fn anomaly(&self) -> bool {
        self.witness.as_ref().is_some_and(|w| w.nullspace_dim > NULLSPACE_ANOMALY_DIM)
    }
}

/// The pairs `(q, k)` covered by a sweep: prime powers `q <= q_max`
/// ascending, then `k = 1..=q` ascending.
pub fn sweep_cases(q_max: u64) -> Vec<(u64, u32)> {
    prime_powers_up_to(q_max).into_iter().flat_map(|q| (1..=q as u32).map(move |k| (q, k))).collect()
}

/// Runs the complete check that the Grassl-Rötteler `[q+1, k]` code is a
/// generalised Reed-Solomon code.
pub fn verify_theorem(tower: &Arc<FieldTower>, k: u32, caps: Caps) -> Result<VerificationReport> {
    let q = tower.q();
    let case = match gr_generator_poly(tower, k) {
        Ok(case) => case,
        Err(Error::BadGenerator(_)) => return Ok(failed_report(tower, k)),
        Err(e) => return Err(e),
    };
    let n = case.n();
    let theta = predicted_multipliers(tower, &case);
    let mut report = VerificationReport {
        q,
        k,
        case: case.kind,
        n,
        dim: 0,
        d: None,
        d_enumerated: false,
        mds: false,
        g: case.g.coeffs().to_vec(),
        g_ok: false,
        theta: theta.as_slice().to_vec(),
        lemma_equal: false,
        h_a_ok: false,
        witness: None,
        status: Status::Fail,
    };

    let code = match constructions::cyclic_code_from_generator(tower, &case.g, n, case.eta) {
        Ok(code) => code,
        Err(Error::BadGenerator(_)) => return Ok(report),
        Err(e) => return Err(e),
    };
    report.g_ok = code.is_constacyclic(case.eta)?;
    report.dim = code.k();
    report.mds = code.is_mds();
    let singleton = n + 1 - code.k();
    match code.min_distance(caps.distance) {
        Ok(d) => {
            report.d = Some(d);
            report.d_enumerated = true;
            // the two MDS criteria must agree
            if report.mds != (d == singleton) {
                report.mds = false;
            }
        }
        Err(Error::CapExceeded { .. }) => report.d = report.mds.then_some(singleton),
        Err(e) => return Err(e),
    }

    report.h_a_ok = h_a_identities_hold(tower, &case, &theta)?;
    report.lemma_equal = code.diag_scale(&theta)? == lemma_code(tower, &case)?;

    report.witness = match grs_witness(&code, &roots_of_unity_points(tower), caps.nullspace) {
        Ok(w) => w,
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };

    let all_ok =
        report.params_ok() && report.g_ok && report.h_a_ok && report.lemma_equal && report.witness.is_some();
    report.status = if all_ok { Status::Ok } else { Status::Fail };
    Ok(report)
}

fn failed_report(tower: &FieldTower, k: u32) -> VerificationReport {
    let q = tower.q();
    VerificationReport {
        q,
        k,
        case: CaseKind::for_params(q, k),
        n: q as usize + 1,
        dim: 0,
        d: None,
        d_enumerated: false,
        mds: false,
        g: Vec::new(),
        g_ok: false,
        theta: Vec::new(),
        lemma_equal: false,
        h_a_ok: false,
        witness: None,
        status: Status::Fail,
    }
}

/// For every shift `a`: `deg h_a` is within the case's bound and the
/// evaluation vector of `h_a` equals `theta_s * c_{(s - a) mod (q+1)}`.
pub fn h_a_identities_hold(
    tower: &FieldTower,
    case: &constructions::GrCase,
    theta: &Multipliers,
) -> Result<bool> {
    let n = case.n();
    for a in 0..case.k {
        let h: Poly = h_a_poly(tower, case, a)?;
        if h.degree().is_some_and(|d| d > case.h_degree_bound()) {
            return Ok(false);
        }
        let ev = lemma_eval_vector(tower, case.lemma(), &h);
        let matches = ev.iter().enumerate().all(|(s, &v)| {
            let c = case.g.coeff((s + n - a as usize) % n);
            v == tower.mul(theta.as_slice()[s], c)
        });
        if !matches {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The conjectured minimum distance of the Hermitian puncture code of the
/// `k`-dimensional Grassl-Rötteler code over `F_{q^2}`.
pub fn conjecture11_formula(q: u64, k: u64) -> Result<u64> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if k == 0 || k > q {
        return Err(Error::InvalidParameters(format!("k = {k} must lie in 1..={q}")));
    }
    let mut values = Vec::with_capacity(2);
    if 2 * k <= q {
        values.push(2 * k);
    }
    if q % 2 == 1 && 2 * k > q && k < q {
        values.push((q + 1) * (k - (q - 1) / 2));
    }
    if q.is_multiple_of(2) && 2 * k >= q && k < q {
        values.push(q * (k + 1 - q / 2));
    }
    if k == q {
        values.push(q * q + 1);
    }
    match values[..] {
        [] => Err(Error::InvalidParameters(format!("no branch covers (q, k) = ({q}, {k})"))),
        [first, ref rest @ ..] if rest.iter().all(|&v| v == first) => Ok(first),
        _ => Err(Error::InvalidParameters(format!("overlapping branches disagree at ({q}, {k})"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PunctureStatus {
    Match,
    Mismatch,
    Untested,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjecture11Report {
    pub q: u64,
    pub k: u64,
    pub formula_d: u64,
    pub computed_d: Option<u64>,
    /// Length `q^2 + 1` of the puncture code.
    pub n: usize,
    pub puncture_dim: usize,
    pub status: PunctureStatus,
}

/// Brute-forces the minimum distance of the Hermitian puncture code of the
/// `[q^2+1, k]` Grassl-Rötteler code over `F_{q^2}` and compares it with
/// [`conjecture11_formula`].
pub fn conjecture11_check(q: u64, k: u64, caps: Caps) -> Result<Conjecture11Report> {
    let formula_d = conjecture11_formula(q, k)?;
    let (p, h) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let big = Arc::new(FieldTower::new(p, 2 * h)?);
    let (code, _) = constructions::gr_code(&big, k as u32)?;
    let puncture = hermitian_puncture_code(&code)?;
    let mut report = Conjecture11Report {
        q,
        k,
        formula_d,
        computed_d: None,
        n: puncture.n(),
        puncture_dim: puncture.k(),
        status: PunctureStatus::Mismatch,
    };
    if puncture.k() == 0 {
        return Ok(report);
    }
    match puncture.min_distance(caps.distance) {
        Ok(d) => {
            report.computed_d = Some(d as u64);
            if d as u64 == formula_d {
                report.status = PunctureStatus::Match;
            }
        }
        Err(Error::CapExceeded { .. }) => report.status = PunctureStatus::Untested,
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::constructions::gr_code;

    fn tower(q: u64) -> Arc<FieldTower> {
        Arc::new(FieldTower::for_order(q).unwrap())
    }

    fn v(xs: &[u32]) -> Vec<FieldElement> {
        xs.iter().map(|&x| FieldElement(x)).collect()
    }

    #[test]
    fn equivalence_of_a_code_with_itself() {
        let t = tower(5);
        let (c, _) = gr_code(&t, 3).unwrap();
        let s = diagonal_equivalence(&c, &c, DEFAULT_NULLSPACE_CAP).unwrap();
        let theta = s.multipliers.unwrap();
        assert_eq!(c.diag_scale(&theta).unwrap(), c);
        assert_eq!(s.nullspace_dim, 1);
    }

    #[test]
    fn planted_instance() {
        let t = tower(3);
        let b = LinearCode::from_rows(&t, 4, vec![v(&[1, 0, 1, 2]), v(&[0, 1, 1, 1])]).unwrap();
        let planted = Multipliers::new(&t, v(&[1, 2, 1, 2])).unwrap();
        let c = b.diag_scale(&planted).unwrap();
        let theta = diagonal_equivalence(&c, &b, DEFAULT_NULLSPACE_CAP).unwrap().multipliers.unwrap();
        assert_eq!(b.diag_scale(&theta).unwrap(), c);
        // and the other direction with the inverse
        assert_eq!(c.diag_scale(&theta.inverse(&t)).unwrap(), b);
    }

    #[test]
    fn no_equivalence() {
        let t = tower(2);
        let even = LinearCode::from_rows(&t, 3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let units = LinearCode::from_rows(&t, 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let s = diagonal_equivalence(&even, &units, DEFAULT_NULLSPACE_CAP).unwrap();
        assert_eq!(s.multipliers, None);
        assert_eq!(diagonal_equivalence(&even, &LinearCode::full(&t, 3), 10).unwrap_err(), Error::Mismatch);
    }

    #[test]
    fn witness_examples() {
        let t = tower(3);
        let pts = canonical_points(&t);
        let rs = LinearCode::from_rows(&t, 4, rs_base_matrix(&t, 2, &pts).unwrap()).unwrap();
        let w = grs_witness(&rs, &pts, DEFAULT_NULLSPACE_CAP).unwrap().unwrap();
        assert!(w.check(&rs).unwrap());
        let first = w.theta.as_slice()[0];
        assert!(w.theta.as_slice().iter().all(|&x| x == first));

        let (gr, _) = gr_code(&t, 2).unwrap();
        let w = grs_witness(&gr, &roots_of_unity_points(&t), DEFAULT_NULLSPACE_CAP).unwrap().unwrap();
        assert!(w.check(&gr).unwrap());

        let t2 = tower(2);
        let units = LinearCode::from_rows(&t2, 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(grs_witness(&units, &canonical_points(&t2), DEFAULT_NULLSPACE_CAP).unwrap(), None);
    }

    #[test]
    fn verify_small_cases() {
        for (q, k, kind) in [
            (3, 1, CaseKind::G1OddOdd),
            (2, 1, CaseKind::G2KOddQEven),
            (4, 2, CaseKind::G1EvenEven),
            (3, 2, CaseKind::G3KEvenQOdd),
        ] {
            let r = verify_theorem(&tower(q), k, Caps::default()).unwrap();
            assert_eq!(r.case, kind);
            assert_eq!(r.status, Status::Ok, "{r:?}");
        }
        assert!(verify_theorem(&tower(5), 6, Caps::default()).is_err());
    }

    #[test]
    fn formula_examples() {
        assert_eq!(conjecture11_formula(4, 2).unwrap(), 4);
        assert_eq!(conjecture11_formula(5, 3).unwrap(), 6);
        assert_eq!(conjecture11_formula(2, 2).unwrap(), 5);
        assert_eq!(conjecture11_formula(3, 3).unwrap(), 10);
        assert!(conjecture11_formula(6, 2).is_err());
        assert!(conjecture11_formula(5, 0).is_err());
        assert!(conjecture11_formula(5, 6).is_err());
    }

    #[test]
    fn formula_is_total() {
        for q in prime_powers_up_to(64) {
            for k in 1..=q {
                conjecture11_formula(q, k).unwrap();
            }
        }
    }

    #[test]
    fn puncture_small() {
        let r = conjecture11_check(2, 1, Caps::default()).unwrap();
        assert_eq!((r.formula_d, r.computed_d, r.status), (2, Some(2), PunctureStatus::Match));
        let r = conjecture11_check(2, 2, Caps::default()).unwrap();
        assert_eq!((r.formula_d, r.computed_d, r.status), (5, Some(5), PunctureStatus::Match));
    }

    #[test]
    fn probe_rejects_long_codes() {
        let (c, _) = gr_code(&tower(11), 3).unwrap();
        assert!(grs_probe_permutations(&c, 10).is_err());
    }

    #[test]
    fn probe_finds_gr_witness() {
        let (c, _) = gr_code(&tower(5), 3).unwrap();
        match grs_probe_permutations(&c, DEFAULT_NULLSPACE_CAP).unwrap() {
            ProbeOutcome::Witness(w) => assert!(w.check(&c).unwrap()),
            other => panic!("expected a witness, got {other:?}"),
        }
    }
}
