use num_complex::Complex;
use rayon::prelude::*;

use super::NumericsError;
use crate::scalar::unit;
use crate::Real;

/// Gauss–Legendre rule mapped to `[0, 1]`: `(node, weight)` pairs, weights
/// summing to one. Computed in `f64` by Newton iteration on the three-term
/// recurrence.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

#[derive(Debug, Clone, Copy)]
struct Ring<T> {
    radius: T,
    /// Weight of every node on the ring (already divided by the angular count).
    weight: T,
}

/// Product rule for the normalized area measure `dA = r dr dθ / π` on the
/// unit disk.
///
/// Radii are Gauss–Legendre nodes in `t` mapped by `r = 1 − (1 − s)^k` with
/// `s = t²(2 − t)`, which clusters rings toward the unit circle (`k` is
/// `radial_refinement`) and smooths the logarithmic weight at the origin. Angles
/// are midpoints `2π(j + ½)/M`, so no node lies on the real axis and none at
/// the origin.
#[derive(Debug, Clone)]
pub struct DiskQuadrature<T> {
    radial_nodes: usize,
    angular_nodes: usize,
    radial_refinement: u32,
    rings: Vec<Ring<T>>,
    phases: Vec<Complex<T>>,
}

impl<T: Real> DiskQuadrature<T> {
    pub fn new(radial_nodes: usize, angular_nodes: usize, radial_refinement: u32) -> Result<Self, NumericsError> {
        if radial_nodes == 0 || angular_nodes == 0 {
            return Err(NumericsError::InvalidQuadrature(
                "disk quadrature needs at least one radial and one angular node".into(),
            ));
        }
        if radial_refinement == 0 {
            return Err(NumericsError::InvalidQuadrature(
                "radial refinement exponent must be at least 1".into(),
            ));
        }
        let k = radial_refinement as i32;
        let m = angular_nodes as f64;
        let rings = gauss_legendre_unit(radial_nodes)
            .into_iter()
            .map(|(t, w)| {
                // s = t²(2 − t) grades the origin, where log weights sit
                let s = t * t * (2.0 - t);
                let ds = t * (4.0 - 3.0 * t);
                let r = 1.0 - (1.0 - s).powi(k);
                let dr = k as f64 * (1.0 - s).powi(k - 1) * ds;
                Ring {
                    radius: T::lit(r),
                    weight: T::lit(2.0 * r * dr * w / m),
                }
            })
            .collect();
        let phases = (0..angular_nodes)
            .map(|j| unit(T::lit(std::f64::consts::TAU * (j as f64 + 0.5) / m)))
            .collect();
        Ok(Self {
            radial_nodes,
            angular_nodes,
            radial_refinement,
            rings,
            phases,
        })
    }

    /// Same layout with both node counts doubled.
    pub fn refined(&self) -> Self {
        Self::new(2 * self.radial_nodes, 2 * self.angular_nodes, self.radial_refinement)
            .expect("refining a valid rule stays valid")
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial_nodes
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular_nodes
    }

    pub fn radial_refinement(&self) -> u32 {
        self.radial_refinement
    }

    pub fn len(&self) -> usize {
        self.radial_nodes * self.angular_nodes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `index` in ring-major order.
    pub fn node(&self, index: usize) -> (Complex<T>, T) {
        let ring = &self.rings[index / self.angular_nodes];
        (self.phases[index % self.angular_nodes] * ring.radius, ring.weight)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Complex<T>, T)> + '_ {
        self.rings
            .iter()
            .flat_map(move |ring| self.phases.iter().map(move |&ph| (ph * ring.radius, ring.weight)))
    }

    pub fn weights_sum(&self) -> T {
        self.rings
            .iter()
            .map(|r| r.weight * T::from_usize_lossy(self.angular_nodes))
            .sum()
    }

    /// Evaluates `f` at every node (ring-major order), in parallel.
    pub fn map_nodes<V, F>(&self, f: F) -> Vec<V>
    where
        V: Send,
        F: Fn(Complex<T>) -> V + Sync,
    {
        self.rings
            .par_iter()
            .flat_map_iter(|ring| self.phases.iter().map(|&ph| f(ph * ring.radius)).collect::<Vec<_>>())
            .collect()
    }

    /// `Σ wᵢ vᵢ` for values tabulated by [`map_nodes`](Self::map_nodes).
    pub fn integrate_values(&self, values: &[T]) -> Result<T, NumericsError> {
        assert_eq!(values.len(), self.len(), "one value per node");
        let m = self.angular_nodes;
        let mut total = T::zero();
        for (i, ring) in self.rings.iter().enumerate() {
            let mut acc = T::zero();
            for (j, &v) in values[i * m..(i + 1) * m].iter().enumerate() {
                if !v.is_finite() {
                    let z = self.phases[j] * ring.radius;
                    return Err(NumericsError::NonFiniteNode {
                        index: i * m + j,
                        re: z.re.as_f64(),
                        im: z.im.as_f64(),
                    });
                }
                acc = acc + v;
            }
            total = total + acc * ring.weight;
        }
        Ok(total)
    }

    /// `∬_D f dA` for a fallible integrand. Rings are summed in parallel and
    /// reduced in a fixed order, so the result is deterministic.
    pub fn try_integrate<E, F>(&self, f: F) -> Result<T, E>
    where
        E: From<NumericsError> + Send,
        F: Fn(Complex<T>) -> Result<T, E> + Sync,
    {
        let m = self.angular_nodes;
        let partial: Vec<Result<T, E>> = self
            .rings
            .par_iter()
            .enumerate()
            .map(|(i, ring)| {
                let mut acc = T::zero();
                for (j, &ph) in self.phases.iter().enumerate() {
                    let z = ph * ring.radius;
                    let v = f(z)?;
                    if !v.is_finite() {
                        return Err(E::from(NumericsError::NonFiniteNode {
                            index: i * m + j,
                            re: z.re.as_f64(),
                            im: z.im.as_f64(),
                        }));
                    }
                    acc = acc + v;
                }
                Ok(acc * ring.weight)
            })
            .collect();
        let mut total = T::zero();
        for p in partial {
            total = total + p?;
        }
        Ok(total)
    }

    pub fn integrate<F>(&self, f: F) -> Result<T, NumericsError>
    where
        F: Fn(Complex<T>) -> T + Sync,
    {
        self.try_integrate(|z| Ok::<T, NumericsError>(f(z)))
    }
}

/// `∬_D f dA` with the normalized area measure.
pub fn integrate_disk<T, F>(f: F, q: &DiskQuadrature<T>) -> Result<T, NumericsError>
where
    T: Real,
    F: Fn(Complex<T>) -> T + Sync,
{
    q.integrate(f)
}

const CIRCLE_CHUNK: usize = 4096;

/// Equispaced rule for the normalized length measure `dm = dθ / 2π`.
///
/// Nodes sit at `2π(j + offset)/n`; the default offset ½ is the midpoint
/// rule, which keeps nodes off angles that are multiples of `2π/n`.
#[derive(Debug, Clone)]
pub struct CircleQuadrature<T> {
    nodes: usize,
    offset: T,
}

impl<T: Real> CircleQuadrature<T> {
    pub fn new(nodes: usize) -> Result<Self, NumericsError> {
        Self::with_offset(nodes, T::lit(0.5))
    }

    pub fn with_offset(nodes: usize, offset: T) -> Result<Self, NumericsError> {
        if nodes == 0 {
            return Err(NumericsError::InvalidQuadrature(
                "circle quadrature needs at least one node".into(),
            ));
        }
        if !(offset >= T::zero() && offset < T::one()) {
            return Err(NumericsError::InvalidQuadrature(
                "node offset must lie in [0, 1)".into(),
            ));
        }
        Ok(Self { nodes, offset })
    }

    /// Enough midpoint nodes to resolve features of angular width `width`.
    pub fn resolving(width: T, min_nodes: usize, max_nodes: usize) -> Self {
        let want = (T::lit(64.0) / width).to_f64().unwrap_or(f64::INFINITY);
        let n = if want.is_finite() && want < max_nodes as f64 {
            (want.ceil() as usize).next_power_of_two()
        } else {
            max_nodes
        };
        Self::new(n.clamp(min_nodes, max_nodes)).expect("positive node count")
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn weight(&self) -> T {
        T::one() / T::from_usize_lossy(self.nodes)
    }

    pub fn angle(&self, j: usize) -> T {
        T::TAU() * (T::from_usize_lossy(j) + self.offset) / T::from_usize_lossy(self.nodes)
    }

    pub fn angles(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.nodes).map(move |j| self.angle(j))
    }

    pub fn refined(&self) -> Self {
        Self::with_offset(2 * self.nodes, self.offset).expect("valid")
    }

    /// `∫_T f dm` where `f` receives the node angle.
    pub fn try_integrate<E, F>(&self, f: F) -> Result<T, E>
    where
        E: From<NumericsError> + Send,
        F: Fn(T) -> Result<T, E> + Sync,
    {
        let chunks = self.nodes.div_ceil(CIRCLE_CHUNK);
        let partial: Vec<Result<T, E>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = T::zero();
                for j in c * CIRCLE_CHUNK..((c + 1) * CIRCLE_CHUNK).min(self.nodes) {
                    let theta = self.angle(j);
                    let v = f(theta)?;
                    if !v.is_finite() {
                        return Err(E::from(NumericsError::NonFiniteNode {
                            index: j,
                            re: theta.cos().as_f64(),
                            im: theta.sin().as_f64(),
                        }));
                    }
                    acc = acc + v;
                }
                Ok(acc)
            })
            .collect();
        let mut total = T::zero();
        for p in partial {
            total = total + p?;
        }
        Ok(total * self.weight())
    }

    pub fn integrate<F>(&self, f: F) -> Result<T, NumericsError>
    where
        F: Fn(T) -> T + Sync,
    {
        self.try_integrate(|t| Ok::<T, NumericsError>(f(t)))
    }
}

/// `∫_T f dm` with the normalized length measure.
pub fn integrate_circle<T, F>(f: F, q: &CircleQuadrature<T>) -> Result<T, NumericsError>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    q.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> DiskQuadrature<f64> {
        DiskQuadrature::new(256, 64, 2).unwrap()
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 17, 64] {
            let rule = gauss_legendre_unit(n);
            let sum: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!((sum - 1.0).abs() < 1e-14, "n={n}");
            // ∫₀¹ x^{2n-1} = 1/(2n)
            let deg = 2 * n as i32 - 1;
            let v: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg)).sum();
            assert!((v - 1.0 / (2.0 * n as f64)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn disk_weights_are_positive_and_sum_to_one() {
        for k in 1..=4 {
            let q = DiskQuadrature::<f64>::new(40, 12, k).unwrap();
            assert!(q.nodes().all(|(z, w)| w > 0.0 && z.norm() > 0.0 && z.norm() < 1.0));
            assert!((q.weights_sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn disk_constant_and_paraboloid() {
        let q = disk();
        assert!((q.integrate(|_| 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((q.integrate(|z| 1.0 - z.norm_sqr()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn disk_log_weight() {
        // ∫₀¹ 2r log(1/r) dr = 1/2
        let q = disk();
        let v = q.integrate(|z| -z.norm().ln()).unwrap();
        assert!((v - 0.5).abs() < 1e-9, "{v}");
        let v2 = q.refined().integrate(|z| -z.norm().ln()).unwrap();
        assert!((v - v2).abs() < 1e-9);
    }

    #[test]
    fn disk_non_finite_node_is_reported() {
        let q = DiskQuadrature::<f64>::new(8, 8, 2).unwrap();
        let err = q.integrate(|z| if z.re > 0.0 && z.im > 0.0 { f64::NAN } else { 1.0 });
        assert!(matches!(err, Err(NumericsError::NonFiniteNode { .. })));
    }

    #[test]
    fn disk_map_matches_node_order() {
        let q = DiskQuadrature::<f64>::new(5, 7, 2).unwrap();
        let mapped = q.map_nodes(|z| z);
        for (i, (z, _)) in q.nodes().enumerate() {
            assert_eq!(mapped[i], z);
            assert_eq!(q.node(i).0, z);
        }
        let vals: Vec<f64> = mapped.iter().map(|z| z.norm_sqr()).collect();
        let direct = q.integrate(|z| z.norm_sqr()).unwrap();
        assert!((q.integrate_values(&vals).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn circle_rules() {
        let q = CircleQuadrature::<f64>::new(512).unwrap();
        assert!((q.integrate(|_| 3.25).unwrap() - 3.25).abs() < 1e-13);
        assert!((q.integrate(|t| unit(t).norm_sqr()).unwrap() - 1.0).abs() < 1e-13);
        // ∫|1 − 0.6e^{iθ}|⁻² dm = 1/(1 − 0.36)
        let f = |t: f64| 1.0 / (Complex::new(1.0, 0.0) - unit(t) * 0.6).norm_sqr();
        let v = q.integrate(f).unwrap();
        assert!((v - 1.5625).abs() < 1e-12);
        assert!((q.refined().integrate(f).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn circle_rejects_bad_layouts() {
        assert!(CircleQuadrature::<f64>::new(0).is_err());
        assert!(CircleQuadrature::<f64>::with_offset(8, 1.0).is_err());
        assert!(DiskQuadrature::<f64>::new(0, 8, 2).is_err());
        assert!(DiskQuadrature::<f64>::new(8, 8, 0).is_err());
    }

    #[test]
    fn resolving_picks_power_of_two() {
        let q = CircleQuadrature::<f64>::resolving(1e-3, 1024, 1 << 20);
        assert_eq!(q.nodes(), 65536);
        let q = CircleQuadrature::<f64>::resolving(1e-12, 1024, 1 << 20);
        assert_eq!(q.nodes(), 1 << 20);
    }

    #[test]
    fn single_precision_instantiation() {
        let q = DiskQuadrature::<f32>::new(64, 16, 2).unwrap();
        let v = q.integrate(|z| 1.0 - z.norm_sqr()).unwrap();
        assert!((v - 0.5).abs() < 1e-5);
    }
}
