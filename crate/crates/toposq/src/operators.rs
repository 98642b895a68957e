//! Finite-dimensional complex operator kernel.
//!
//! Everything downstream (contexts, spectra, daseinisation, measures) reduces
//! to a handful of operations on Hermitian matrices: spectral decomposition
//! with eigenvalue clustering, joint eigenspace refinement of commuting
//! projections, the range-inclusion order on projections, and Born
//! probabilities ⟨ψ|P̂|ψ⟩.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Global numerical tolerances.
///
/// `eps_num` guards every operator comparison, `eps_cluster` decides when two
/// eigenvalues collapse into one spectral projection, `eps_meas` guards
/// probability comparisons. Scenario files may override all three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eps_num: f64,
    pub eps_cluster: f64,
    pub eps_meas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_num: 1e-9,
            eps_cluster: 1e-7,
            eps_meas: 1e-9,
        }
    }
}

/// Max-modulus norm over all entries; the `‖·‖_max` used by every comparison.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entry-wise closeness in the max norm.
pub fn mats_close(a: &CMat, b: &CMat, eps: f64) -> bool {
    a.shape() == b.shape() && max_abs(&(a - b)) <= eps
}

fn hermitian_deviation(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).map(|z| z * 0.5)
}

fn check_square(m: &CMat) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::DimensionMismatch(r, c));
    }
    if r < 2 {
        return Err(Error::DimensionTooSmall(r));
    }
    Ok(r)
}

/// A self-adjoint operator.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: CMat,
}

impl Observable {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: CMat, tol: &Tolerances) -> Result<Self> {
        check_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if dev > tol.eps_num {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Observable { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }
}

/// An orthogonal projection: Hermitian, idempotent, eigenvalues in {0, 1}.
#[derive(Debug, Clone)]
pub struct Projection {
    matrix: CMat,
}

impl Projection {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: CMat, tol: &Tolerances) -> Result<Self> {
        check_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if dev > tol.eps_num {
            return Err(Error::NotHermitian(dev));
        }
        let idem = max_abs(&(&matrix * &matrix - &matrix));
        if idem > tol.eps_num {
            return Err(Error::NotProjection(idem));
        }
        Ok(Projection { matrix })
    }

    /// Caller guarantees the matrix is an exact-enough projection (sums of
    /// orthogonal atoms, freshly clustered eigenprojections, ...).
    pub(crate) fn from_matrix_unchecked(matrix: CMat) -> Self {
        Projection { matrix }
    }

    pub fn zero(dim: usize) -> Self {
        Projection {
            matrix: CMat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projection {
            matrix: CMat::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Rank read off the trace (exact for projections).
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        max_abs(&self.matrix) <= eps
    }

    /// The complement 1̂ − P̂.
    pub fn complement(&self) -> Projection {
        let n = self.dim();
        Projection {
            matrix: CMat::identity(n, n) - &self.matrix,
        }
    }

    pub fn approx_eq(&self, other: &Projection, eps: f64) -> bool {
        mats_close(&self.matrix, &other.matrix, eps)
    }
}

/// A unit vector in the ambient Hilbert space.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: CVec,
}

impl PureState {
    pub fn new(amplitudes: CVec) -> Result<Self> {
        Self::new_with(amplitudes, &Tolerances::default())
    }

    pub fn new_with(amplitudes: CVec, tol: &Tolerances) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let dev = (amplitudes.norm() - 1.0).abs();
        if dev > tol.eps_num {
            return Err(Error::NotUnitNorm(dev));
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(v: CVec) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::NotUnitNorm(1.0));
        }
        Self::new(v.map(|z| z / n))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    /// The rank-1 projection |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Projection {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        Projection::from_matrix_unchecked(m)
    }
}

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: CMat,
}

impl DensityState {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::new_with(matrix, 1e-9)
    }

    pub fn new_with(matrix: CMat, eps: f64) -> Result<Self> {
        check_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if dev > eps {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > eps || tr.im.abs() > eps {
            return Err(Error::NotDensity(format!("trace {} is not 1", tr)));
        }
        let eig = hermitize(&matrix).symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -eps {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityState { matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityState {
            matrix: psi.projector().matrix().clone(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMat::identity(dim, dim).map(|z| z / dim as f64);
        DensityState { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Number of eigenvalues above `eps`; 1 means the state is pure.
    pub fn rank(&self, eps: f64) -> usize {
        let eig = hermitize(&self.matrix).symmetric_eigen();
        eig.eigenvalues.iter().filter(|&&l| l > eps).count()
    }

    /// tr(ρ P̂), clamped to [0, 1].
    pub fn expectation(&self, p: &Projection) -> Result<f64> {
        if self.dim() != p.dim() {
            return Err(Error::DimensionMismatch(self.dim(), p.dim()));
        }
        let v = (&self.matrix * p.matrix()).trace().re;
        Ok(v.clamp(0.0, 1.0))
    }
}

/// A finite union of closed intervals on the real line; a point is the
/// degenerate interval [x, x].
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::BadInterval("no intervals given".into()));
        }
        for &(lo, hi) in &intervals {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::BadInterval(format!("[{lo}, {hi}]")));
            }
        }
        Ok(IntervalUnion { intervals })
    }

    pub fn point(x: f64) -> Self {
        IntervalUnion {
            intervals: vec![(x, x)],
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.contains_within(x, 0.0)
    }

    /// Closed-interval membership with an `eps` margin; eigenvalues carry
    /// floating-point noise, so spectral tests widen each interval by
    /// `eps_num`.
    pub fn contains_within(&self, x: f64, eps: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(lo, hi)| lo - eps <= x && x <= hi + eps)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }
}

/// Spectral decomposition of a Hermitian operator.
///
/// Eigenvalues come back strictly increasing; values closer than
/// `eps_cluster` are merged into a single eigenprojection (the reported
/// eigenvalue is the cluster mean). The eigenprojections are pairwise
/// orthogonal and sum to the identity.
pub fn spectral_decompose(a: &Observable, tol: &Tolerances) -> Vec<(f64, Projection)> {
    let n = a.dim();
    let eig = hermitize(a.matrix()).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());

    let mut out: Vec<(f64, Projection)> = Vec::new();
    let mut cluster: Vec<usize> = Vec::new();
    let flush = |cluster: &mut Vec<usize>, out: &mut Vec<(f64, Projection)>| {
        if cluster.is_empty() {
            return;
        }
        let mut m = CMat::zeros(n, n);
        let mut mean = 0.0;
        for &k in cluster.iter() {
            let v = eig.eigenvectors.column(k).into_owned();
            m += &v * v.adjoint();
            mean += eig.eigenvalues[k];
        }
        mean /= cluster.len() as f64;
        out.push((mean, Projection::from_matrix_unchecked(m)));
        cluster.clear();
    };
    for &k in &order {
        if let Some(&last) = cluster.last() {
            if (eig.eigenvalues[k] - eig.eigenvalues[last]).abs() >= tol.eps_cluster {
                flush(&mut cluster, &mut out);
            }
        }
        cluster.push(k);
    }
    flush(&mut cluster, &mut out);
    out
}

/// The spectral projection Ê[A ∈ Δ]: the sum of eigenprojections whose
/// eigenvalue falls in Δ. Returns the zero projection when no eigenvalue does.
pub fn spectral_projection(a: &Observable, delta: &IntervalUnion, tol: &Tolerances) -> Projection {
    let n = a.dim();
    let mut m = CMat::zeros(n, n);
    for (lambda, e) in spectral_decompose(a, tol) {
        if delta.contains_within(lambda, tol.eps_num) {
            m += e.matrix();
        }
    }
    Projection::from_matrix_unchecked(m)
}

/// Minimal nonzero projections of the abelian algebra generated by a family
/// of commuting projections.
///
/// The partition {1̂} is refined by each generator P̂ into {a·P̂, a·(1̂−P̂)},
/// dropping components of negligible norm, so the result is pairwise
/// orthogonal and sums to the identity.
pub fn joint_atoms(family: &[Projection], tol: &Tolerances) -> Result<Vec<Projection>> {
    let dim = match family.first() {
        Some(p) => p.dim(),
        None => return Err(Error::DimensionTooSmall(0)),
    };
    for p in family {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let comm = family[i].matrix() * family[j].matrix()
                - family[j].matrix() * family[i].matrix();
            if max_abs(&comm) > tol.eps_num {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }

    let mut atoms: Vec<CMat> = vec![CMat::identity(dim, dim)];
    for p in family {
        let q = CMat::identity(dim, dim) - p.matrix();
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for a in &atoms {
            for part in [a * p.matrix(), a * &q] {
                if max_abs(&part) > tol.eps_num {
                    next.push(part);
                }
            }
        }
        atoms = next;
    }

    // Snap each atom back onto an exact projection: products of commuting
    // projections drift at machine precision, clustering removes the drift.
    Ok(atoms
        .into_iter()
        .map(|m| {
            let obs = Observable {
                matrix: hermitize(&m),
            };
            let mut snapped = CMat::zeros(dim, dim);
            for (lambda, e) in spectral_decompose(&obs, tol) {
                if lambda > 0.5 {
                    snapped += e.matrix();
                }
            }
            Projection::from_matrix_unchecked(snapped)
        })
        .collect())
}

/// Range-inclusion order: P̂ ≤ Q̂ iff Q̂P̂ = P̂.
pub fn projection_leq(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<bool> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(max_abs(&(q.matrix() * p.matrix() - p.matrix())) <= tol.eps_num)
}

/// Orthogonality check: P̂Q̂ = 0.
pub fn projections_orthogonal(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<bool> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(max_abs(&(p.matrix() * q.matrix())) <= tol.eps_num)
}

/// Born probability ⟨ψ|P̂|ψ⟩, clamped to [0, 1].
pub fn born_probability(psi: &PureState, p: &Projection) -> Result<f64> {
    if psi.dim() != p.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), p.dim()));
    }
    let v = psi.amplitudes().dotc(&(p.matrix() * psi.amplitudes())).re;
    Ok(v.clamp(0.0, 1.0))
}

/// Lattice join P̂ ∨ Q̂ for arbitrary (not necessarily commuting) projections:
/// the range projection of P̂ + Q̂, read off its spectrum above `eps_cluster`.
pub fn projection_join(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<Projection> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    let sum = Observable {
        matrix: hermitize(&(p.matrix() + q.matrix())),
    };
    let n = p.dim();
    let mut m = CMat::zeros(n, n);
    for (lambda, e) in spectral_decompose(&sum, tol) {
        if lambda > tol.eps_cluster {
            m += e.matrix();
        }
    }
    Ok(Projection::from_matrix_unchecked(m))
}

/// Lattice meet P̂ ∧ Q̂ via De Morgan: 1̂ − ((1̂−P̂) ∨ (1̂−Q̂)).
pub fn projection_meet(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<Projection> {
    let join = projection_join(&p.complement(), &q.complement(), tol)?;
    Ok(join.complement())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(entries: &[f64]) -> CMat {
        let n = entries.len();
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                c(entries[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    pub(crate) fn sigma_x() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn decompose_diagonal() {
        let a = Observable::new(diag(&[1.0, 2.0, 3.0])).unwrap();
        let dec = spectral_decompose(&a, &tol());
        assert_eq!(dec.len(), 3);
        for (i, (lambda, e)) in dec.iter().enumerate() {
            assert!((lambda - (i as f64 + 1.0)).abs() < 1e-12);
            assert_eq!(e.rank(), 1);
            assert!((e.matrix()[(i, i)] - c(1., 0.)).norm() < 1e-12);
        }
    }

    #[test]
    fn decompose_sigma_x() {
        let a = Observable::new(sigma_x()).unwrap();
        let dec = spectral_decompose(&a, &tol());
        assert_eq!(dec.len(), 2);
        assert!((dec[0].0 + 1.0).abs() < 1e-12);
        assert!((dec[1].0 - 1.0).abs() < 1e-12);
        let p_plus = CMat::from_row_slice(2, 2, &[c(0.5, 0.), c(0.5, 0.), c(0.5, 0.), c(0.5, 0.)]);
        assert!(mats_close(dec[1].1.matrix(), &p_plus, 1e-12));
    }

    #[test]
    fn decompose_merges_close_eigenvalues() {
        // Exact arithmetic on diag(1, 1+1e-12, 2): the first two eigenvalues
        // differ by less than eps_cluster, so they share one rank-2 projection.
        let a = Observable::new(diag(&[1.0, 1.0 + 1e-12, 2.0])).unwrap();
        let dec = spectral_decompose(&a, &tol());
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0].1.rank(), 2);
        assert_eq!(dec[1].1.rank(), 1);
    }

    #[test]
    fn decompose_reconstructs() {
        let m = CMat::from_row_slice(
            3,
            3,
            &[
                c(2., 0.),
                c(0.3, 0.1),
                c(0., -0.2),
                c(0.3, -0.1),
                c(-1., 0.),
                c(0.5, 0.),
                c(0., 0.2),
                c(0.5, 0.),
                c(0.7, 0.),
            ],
        );
        let a = Observable::new(m.clone()).unwrap();
        let dec = spectral_decompose(&a, &tol());
        let mut rec = CMat::zeros(3, 3);
        let mut sum = CMat::zeros(3, 3);
        for (lambda, e) in &dec {
            rec += e.matrix().map(|z| z * *lambda);
            sum += e.matrix();
        }
        assert!(mats_close(&rec, &m, 10.0 * tol().eps_num));
        assert!(mats_close(&sum, &CMat::identity(3, 3), 10.0 * tol().eps_num));
    }

    #[test]
    fn spectral_projection_examples() {
        let a = Observable::new(diag(&[1.0, 2.0, 3.0])).unwrap();
        let p = spectral_projection(&a, &IntervalUnion::new(vec![(1.5, 3.5)]).unwrap(), &tol());
        assert!(mats_close(p.matrix(), &diag(&[0., 1., 1.]), 1e-12));

        let sz = Observable::new(diag(&[1.0, -1.0])).unwrap();
        let p = spectral_projection(&sz, &IntervalUnion::point(1.0), &tol());
        assert!(mats_close(p.matrix(), &diag(&[1., 0.]), 1e-12));

        let sx = Observable::new(sigma_x()).unwrap();
        let p = spectral_projection(&sx, &IntervalUnion::new(vec![(-2.0, -0.5)]).unwrap(), &tol());
        let p_minus =
            CMat::from_row_slice(2, 2, &[c(0.5, 0.), c(-0.5, 0.), c(-0.5, 0.), c(0.5, 0.)]);
        assert!(mats_close(p.matrix(), &p_minus, 1e-12));

        // covering interval -> identity, disjoint interval -> zero
        let full = spectral_projection(&a, &IntervalUnion::new(vec![(0.0, 10.0)]).unwrap(), &tol());
        assert!(mats_close(full.matrix(), &CMat::identity(3, 3), 1e-12));
        let none = spectral_projection(&a, &IntervalUnion::new(vec![(7.0, 9.0)]).unwrap(), &tol());
        assert!(none.is_zero(1e-12));
    }

    #[test]
    fn point_intervals_catch_noisy_eigenvalues() {
        // the computed eigenvalues of X⊗X sit an ulp away from ±1, which a
        // literal [1,1] test would miss
        let xx = Observable::new(sigma_x().kronecker(&sigma_x())).unwrap();
        let p = spectral_projection(&xx, &IntervalUnion::point(1.0), &tol());
        assert_eq!(p.rank(), 2);
        let q = spectral_projection(&xx, &IntervalUnion::point(-1.0), &tol());
        assert_eq!(q.rank(), 2);
        assert!(mats_close(
            &(p.matrix() + q.matrix()),
            &CMat::identity(4, 4),
            1e-10
        ));
    }

    #[test]
    fn joint_atoms_examples() {
        let p = Projection::new(diag(&[1., 0.])).unwrap();
        let atoms = joint_atoms(&[p], &tol()).unwrap();
        assert_eq!(atoms.len(), 2);

        let p1 = Projection::new(diag(&[1., 1., 0.])).unwrap();
        let p2 = Projection::new(diag(&[1., 0., 0.])).unwrap();
        let atoms = joint_atoms(&[p1.clone(), p2.clone()], &tol()).unwrap();
        assert_eq!(atoms.len(), 3);
        // pairwise orthogonal, sum to identity, generators are block sums
        let mut sum = CMat::zeros(3, 3);
        for a in &atoms {
            sum += a.matrix();
            assert_eq!(a.rank(), 1);
        }
        assert!(mats_close(&sum, &CMat::identity(3, 3), 1e-10));
        for g in [&p1, &p2] {
            let mut rec = CMat::zeros(3, 3);
            for a in &atoms {
                if projection_leq(a, g, &tol()).unwrap() {
                    rec += a.matrix();
                }
            }
            assert!(mats_close(&rec, g.matrix(), 1e-10));
        }
    }

    #[test]
    fn joint_atoms_two_qubit() {
        let z = diag(&[1., -1.]);
        let id = CMat::identity(2, 2);
        let z1 = Observable::new(z.kronecker(&id)).unwrap();
        let z2 = Observable::new(id.kronecker(&z)).unwrap();
        let ps: Vec<Projection> = [&z1, &z2]
            .iter()
            .map(|o| spectral_projection(o, &IntervalUnion::point(1.0), &tol()))
            .collect();
        let atoms = joint_atoms(&ps, &tol()).unwrap();
        assert_eq!(atoms.len(), 4);
        for a in &atoms {
            assert_eq!(a.rank(), 1);
        }
    }

    #[test]
    fn joint_atoms_rejects_noncommuting() {
        let p = Projection::new(diag(&[1., 0.])).unwrap();
        let q = Projection::new(
            CMat::from_row_slice(2, 2, &[c(0.5, 0.), c(0.5, 0.), c(0.5, 0.), c(0.5, 0.)]),
        )
        .unwrap();
        match joint_atoms(&[p, q], &tol()) {
            Err(Error::NonCommuting(0, 1)) => {}
            other => panic!("expected NonCommuting, got {other:?}"),
        }
    }

    #[test]
    fn leq_examples() {
        let t = tol();
        let p0 = Projection::new(diag(&[1., 0.])).unwrap();
        let one = Projection::identity(2);
        assert!(projection_leq(&p0, &one, &t).unwrap());
        let sx = Observable::new(sigma_x()).unwrap();
        let p_plus = spectral_projection(&sx, &IntervalUnion::point(1.0), &t);
        assert!(!projection_leq(&p_plus, &p0, &t).unwrap());
        let e1 = Projection::new(diag(&[1., 0., 0.])).unwrap();
        let e12 = Projection::new(diag(&[1., 1., 0.])).unwrap();
        assert!(projection_leq(&e1, &e12, &t).unwrap());
        assert!(!projection_leq(&e12, &e1, &t).unwrap());
    }

    #[test]
    fn born_examples() {
        let ket0 = PureState::new(CVec::from_column_slice(&[c(1., 0.), c(0., 0.)])).unwrap();
        let p0 = Projection::new(diag(&[1., 0.])).unwrap();
        let p1 = Projection::new(diag(&[0., 1.])).unwrap();
        assert!((born_probability(&ket0, &p0).unwrap() - 1.0).abs() < 1e-12);
        assert!(born_probability(&ket0, &p1).unwrap() < 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        let plus = PureState::new(CVec::from_column_slice(&[c(s, 0.), c(s, 0.)])).unwrap();
        assert!((born_probability(&plus, &p0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn join_and_meet() {
        let t = tol();
        let p0 = Projection::new(diag(&[1., 0.])).unwrap();
        let sx = Observable::new(sigma_x()).unwrap();
        let p_plus = spectral_projection(&sx, &IntervalUnion::point(1.0), &t);
        // distinct rank-1 projections in dim 2 span everything
        let join = projection_join(&p0, &p_plus, &t).unwrap();
        assert!(mats_close(join.matrix(), &CMat::identity(2, 2), 1e-10));
        let meet = projection_meet(&p0, &p_plus, &t).unwrap();
        assert!(meet.is_zero(1e-10));
        // join with a subprojection is a no-op
        let e12 = Projection::new(diag(&[1., 1., 0.])).unwrap();
        let e1 = Projection::new(diag(&[1., 0., 0.])).unwrap();
        let j = projection_join(&e12, &e1, &t).unwrap();
        assert!(j.approx_eq(&e12, 1e-10));
    }

    #[test]
    fn validation_errors() {
        let bad = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(2., 0.), c(0., 0.)]);
        assert!(matches!(Observable::new(bad), Err(Error::NotHermitian(_))));
        let not_proj = diag(&[0.5, 0.5]);
        assert!(matches!(
            Projection::new(not_proj),
            Err(Error::NotProjection(_))
        ));
        let v = CVec::from_column_slice(&[c(1., 0.), c(1., 0.)]);
        assert!(matches!(PureState::new(v), Err(Error::NotUnitNorm(_))));
        assert!(DensityState::new(diag(&[0.5, 0.5])).is_ok());
        assert!(DensityState::new(diag(&[1.5, -0.5])).is_err());
        assert!(IntervalUnion::new(vec![]).is_err());
        assert!(IntervalUnion::new(vec![(2.0, 1.0)]).is_err());
    }
}
