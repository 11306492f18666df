//! Real-space quadrature realisation of the fractional Laplacian.
//!
//! The operator is evaluated as `-I^{2-s}[Δf]`: the discrete Laplacian of
//! `f` is integrated against the weakly singular kernel
//! `‖x-ξ‖^{-(d-2+s)}`, so no hyper-singular integral is ever formed.
//!
//! In 1D the kernel is integrated exactly against the piecewise-linear
//! interpolant of `Δf` (product integration), which also covers the cell
//! containing the evaluation point. In 2D the midpoint rule is used away
//! from the evaluation point and the cell containing it is integrated
//! exactly in polar coordinates.
//!
//! The 1D, `s = 1` case has a log kernel: the power-law constant diverges
//! but only multiplies `∫Δf`, which vanishes when `f` has zero flux through
//! the boundary. The finite part `-(1/π) ln r` is used there.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::spectral::FracOrder;
use crate::error::{check_range, Error, Result};
use crate::special::{gamma, gauss_legendre};

/// Largest order accepted by the quadrature operator; the prefactor
/// `Γ((2-s)/2)` diverges as `s → 2`.
pub const MAX_QUADRATURE_ORDER: f64 = 1.99;

const BOUNDARY_TOL: f64 = 1e-6;

/// Boundary condition attached to one surface node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet(f64),
    Neumann(f64),
}

/// Surface quadrature node with its outward unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNode {
    pub position: [f64; 2],
    pub normal: [f64; 2],
    pub weight: f64,
}

/// Dirichlet/Neumann data on every surface node of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    nodes: Vec<SurfaceNode>,
    conditions: Vec<BoundaryCondition>,
}

impl BoundaryData {
    pub fn new(nodes: Vec<SurfaceNode>, conditions: Vec<BoundaryCondition>) -> Result<Self> {
        if nodes.len() != conditions.len() {
            return Err(Error::InvalidArgument(format!(
                "{} surface nodes but {} boundary conditions",
                nodes.len(),
                conditions.len()
            )));
        }
        for (i, n) in nodes.iter().enumerate() {
            let len = n.normal[0].hypot(n.normal[1]);
            if (len - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "normal of surface node {i} has length {len}"
                )));
            }
        }
        Ok(Self { nodes, conditions })
    }

    pub fn nodes(&self) -> &[SurfaceNode] {
        &self.nodes
    }

    pub fn conditions(&self) -> &[BoundaryCondition] {
        &self.conditions
    }

    /// Dirichlet values with their node indices.
    pub fn dirichlet(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.conditions.iter().enumerate().filter_map(|(i, c)| match c {
            BoundaryCondition::Dirichlet(v) => Some((i, *v)),
            _ => None,
        })
    }

    /// Neumann values with their node indices.
    pub fn neumann(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.conditions.iter().enumerate().filter_map(|(i, c)| match c {
            BoundaryCondition::Neumann(v) => Some((i, *v)),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Layout {
    /// 1D nodes at `a + j h`, endpoints included.
    Vertex,
    /// 2D nodes at cell centres of an `n × n` partition.
    Cell,
}

/// Interior and surface quadrature nodes of an interval or a square.
#[derive(Debug, Clone)]
pub struct QuadratureDomain {
    dim: usize,
    n: usize,
    lower: f64,
    upper: f64,
    spacing: f64,
    layout: Layout,
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
    surface: Vec<SurfaceNode>,
}

impl QuadratureDomain {
    /// `[a, b]` with `n` equispaced nodes including both endpoints.
    pub fn interval(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || n < 4 {
            return Err(Error::InvalidArgument(format!(
                "interval [{a}, {b}] with {n} nodes; need b > a and n >= 4"
            )));
        }
        let h = (b - a) / (n - 1) as f64;
        let nodes: Vec<[f64; 2]> = (0..n).map(|j| [a + j as f64 * h, 0.0]).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        let surface = vec![
            SurfaceNode {
                position: [a, 0.0],
                normal: [-1.0, 0.0],
                weight: 1.0,
            },
            SurfaceNode {
                position: [b, 0.0],
                normal: [1.0, 0.0],
                weight: 1.0,
            },
        ];
        Ok(Self {
            dim: 1,
            n,
            lower: a,
            upper: b,
            spacing: h,
            layout: Layout::Vertex,
            nodes,
            weights,
            surface,
        })
    }

    /// `[a, b]^2` split into `n × n` square cells with nodes at the centres.
    pub fn square(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || n < 4 {
            return Err(Error::InvalidArgument(format!(
                "square [{a}, {b}]^2 with {n} cells per side; need b > a and n >= 4"
            )));
        }
        let h = (b - a) / n as f64;
        let c = |i: usize| a + (i as f64 + 0.5) * h;
        let nodes: Vec<[f64; 2]> = (0..n * n).map(|f| [c(f / n), c(f % n)]).collect();
        let weights = vec![h * h; n * n];
        let mut surface = Vec::with_capacity(4 * n);
        for i in 0..n {
            surface.push(SurfaceNode {
                position: [a, c(i)],
                normal: [-1.0, 0.0],
                weight: h,
            });
            surface.push(SurfaceNode {
                position: [b, c(i)],
                normal: [1.0, 0.0],
                weight: h,
            });
            surface.push(SurfaceNode {
                position: [c(i), a],
                normal: [0.0, -1.0],
                weight: h,
            });
            surface.push(SurfaceNode {
                position: [c(i), b],
                normal: [0.0, 1.0],
                weight: h,
            });
        }
        Ok(Self {
            dim: 2,
            n,
            lower: a,
            upper: b,
            spacing: h,
            layout: Layout::Cell,
            nodes,
            weights,
            surface,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn surface(&self) -> &[SurfaceNode] {
        &self.surface
    }

    pub fn measure(&self) -> f64 {
        (self.upper - self.lower).powi(self.dim as i32)
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|p| f(p[0], p[1])).collect()
    }

    /// Boundary data of pure Dirichlet type read off `f` itself.
    pub fn dirichlet_boundary(&self, f: &[f64]) -> Result<BoundaryData> {
        self.check_len(f)?;
        let conds = (0..self.surface.len())
            .map(|i| BoundaryCondition::Dirichlet(self.surface_trace(f, i).0))
            .collect();
        BoundaryData::new(self.surface.clone(), conds)
    }

    /// Boundary data built node by node.
    pub fn boundary_from(&self, cond: impl Fn(&SurfaceNode) -> BoundaryCondition) -> Result<BoundaryData> {
        let conds = self.surface.iter().map(cond).collect();
        BoundaryData::new(self.surface.clone(), conds)
    }

    fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.nodes.len() {
            return Err(Error::SampleCount {
                expected: self.nodes.len(),
                got: f.len(),
            });
        }
        if let Some(index) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }

    /// Second-order Laplacian: centred inside, one-sided next to the boundary.
    pub fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        let h2 = self.spacing * self.spacing;
        let n = self.n;
        let second = |get: &dyn Fn(usize) -> f64, i: usize| -> f64 {
            if i == 0 {
                2.0 * get(0) - 5.0 * get(1) + 4.0 * get(2) - get(3)
            } else if i == n - 1 {
                2.0 * get(n - 1) - 5.0 * get(n - 2) + 4.0 * get(n - 3) - get(n - 4)
            } else {
                get(i - 1) - 2.0 * get(i) + get(i + 1)
            }
        };
        match self.dim {
            1 => (0..n).map(|i| second(&|j| f[j], i) / h2).collect(),
            _ => (0..n * n)
                .map(|flat| {
                    let (i, j) = (flat / n, flat % n);
                    let dxx = second(&|r| f[r * n + j], i);
                    let dyy = second(&|c| f[i * n + c], j);
                    (dxx + dyy) / h2
                })
                .collect(),
        }
    }

    /// Field value and outward normal derivative at surface node `s`.
    fn surface_trace(&self, f: &[f64], s: usize) -> (f64, f64) {
        let h = self.spacing;
        let n = self.n;
        match self.layout {
            Layout::Vertex => {
                let (v, d_in) = if s == 0 {
                    (f[0], (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h))
                } else {
                    (
                        f[n - 1],
                        -(-3.0 * f[n - 1] + 4.0 * f[n - 2] - f[n - 3]) / (2.0 * h),
                    )
                };
                // d_in is d/dx; outward normal is -x at the left end, +x at the right.
                let dn = if s == 0 { -d_in } else { d_in };
                (v, dn)
            }
            Layout::Cell => {
                // Nodes at distances h/2, 3h/2, 5h/2 from the edge, inward.
                let (i, side) = (s / 4, s % 4);
                let pick = |k: usize| -> f64 {
                    match side {
                        0 => f[k * n + i],
                        1 => f[(n - 1 - k) * n + i],
                        2 => f[i * n + k],
                        _ => f[i * n + (n - 1 - k)],
                    }
                };
                let (f0, f1, f2) = (pick(0), pick(1), pick(2));
                let value = (15.0 * f0 - 10.0 * f1 + 3.0 * f2) / 8.0;
                // Inward derivative at the edge; outward is its negative.
                let d_inward = (-2.0 * f0 + 3.0 * f1 - f2) / h;
                (value, -d_inward)
            }
        }
    }
}

/// Kernel `scale·r^{-exponent}` or `scale·ln r`.
#[derive(Debug, Clone, Copy)]
enum Kernel {
    Power { exponent: f64, scale: f64 },
    Log { scale: f64 },
}

impl Kernel {
    fn value(&self, r: f64) -> f64 {
        match *self {
            Kernel::Power { exponent, scale } => scale * r.powf(-exponent),
            Kernel::Log { scale } => scale * r.ln(),
        }
    }

    /// `dK/dr`.
    fn radial_derivative(&self, r: f64) -> f64 {
        match *self {
            Kernel::Power { exponent, scale } => -exponent * scale * r.powf(-exponent - 1.0),
            Kernel::Log { scale } => scale / r,
        }
    }

    /// Antiderivatives of `K(u)` and `u K(u)` for the 1D product rule.
    fn antiderivatives(&self, u: f64) -> (f64, f64) {
        let a = u.abs();
        match *self {
            Kernel::Power { exponent: p, scale } => {
                let a0 = u.signum() * a.powf(1.0 - p) / (1.0 - p);
                let a1 = a.powf(2.0 - p) / (2.0 - p);
                (
                    scale * if a == 0.0 { 0.0 } else { a0 },
                    scale * if a == 0.0 { 0.0 } else { a1 },
                )
            }
            Kernel::Log { scale } => {
                if a == 0.0 {
                    (0.0, 0.0)
                } else {
                    let l = a.ln();
                    (scale * (u * l - u), scale * (0.5 * u * u * l - 0.25 * u * u))
                }
            }
        }
    }

    /// `∫∫ K` over the rectangle `[x0,x1]×[y0,y1]` containing the origin.
    fn rectangle_integral(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        let Kernel::Power { exponent: p, scale } = *self else {
            unreachable!("log kernel only arises in 1D")
        };
        let corner = |a: f64, b: f64| -> f64 {
            if a <= 0.0 || b <= 0.0 {
                return 0.0;
            }
            let theta0 = b.atan2(a);
            let first = gl_integrate(0.0, theta0, |t| t.cos().powf(p - 2.0));
            let second = gl_integrate(theta0, 0.5 * PI, |t| t.sin().powf(p - 2.0));
            (a.powf(2.0 - p) * first + b.powf(2.0 - p) * second) / (2.0 - p)
        };
        scale * (corner(x1, y1) + corner(-x0, y1) + corner(x1, -y0) + corner(-x0, -y0))
    }
}

fn gl_integrate(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    thread_local! {
        static RULE: (Vec<f64>, Vec<f64>) = gauss_legendre(24);
    }
    RULE.with(|(x, w)| {
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        x.iter().zip(w).map(|(xi, wi)| wi * f(m + r * xi)).sum::<f64>() * r
    })
}

impl QuadratureDomain {
    /// `∫_Ω g(ξ) K(x-ξ) dξ` for nodal values `g`.
    fn integrate_kernel(&self, g: &[f64], kernel: Kernel, x: [f64; 2]) -> f64 {
        match self.layout {
            Layout::Vertex => {
                let h = self.spacing;
                let mut acc = 0.0;
                let mut prev = kernel.antiderivatives(self.nodes[0][0] - x[0]);
                for j in 0..self.n - 1 {
                    let u0 = self.nodes[j][0] - x[0];
                    let u1 = self.nodes[j + 1][0] - x[0];
                    let next = kernel.antiderivatives(u1);
                    let m0 = next.0 - prev.0;
                    let m1 = next.1 - prev.1;
                    acc += (g[j] * (u1 * m0 - m1) + g[j + 1] * (m1 - u0 * m0)) / h;
                    prev = next;
                }
                acc
            }
            Layout::Cell => {
                let h = self.spacing;
                let half = 0.5 * h;
                let mut acc = 0.0;
                for (j, node) in self.nodes.iter().enumerate() {
                    let dx = node[0] - x[0];
                    let dy = node[1] - x[1];
                    if dx.abs() < half && dy.abs() < half {
                        // Cell containing x: exact integral of the kernel, g frozen.
                        acc += g[j] * kernel.rectangle_integral(dx - half, dx + half, dy - half, dy + half);
                    } else {
                        acc += g[j] * kernel.value(dx.hypot(dy)) * self.weights[j];
                    }
                }
                acc
            }
        }
    }
}

/// Printed Riesz-potential prefactor `Γ((d-s)/2) / (π^{s/2} 2^s Γ(s/2))`.
pub fn riesz_prefactor(dim: usize, s: f64) -> Result<f64> {
    check_order_open(s)?;
    let a = 0.5 * (dim as f64 - s);
    if a <= 0.0 && a.fract() == 0.0 {
        return Err(Error::PrefactorPole { dim, order: s });
    }
    Ok(gamma(a) / (PI.powf(0.5 * s) * 2f64.powf(s) * gamma(0.5 * s)))
}

/// Riesz prefactor normalised so that the potential has Fourier symbol
/// `|k|^{-s}`: `Γ((d-s)/2) / (π^{d/2} 2^s Γ(s/2))`.
pub fn riesz_prefactor_normalized(dim: usize, s: f64) -> Result<f64> {
    check_order_open(s)?;
    let a = 0.5 * (dim as f64 - s);
    if a <= 0.0 && a.fract() == 0.0 {
        return Err(Error::PrefactorPole { dim, order: s });
    }
    Ok(gamma(a) / (PI.powf(0.5 * dim as f64) * 2f64.powf(s) * gamma(0.5 * s)))
}

fn check_order_open(s: f64) -> Result<()> {
    check_range("s", s, "0 < s < 2", s > 0.0 && s < 2.0)
}

/// Normalisation constant
/// `h = π^{(2-s)/2} 2^{2-s} Γ((2-s)/2) / ((d-2+s) s Γ((d-2+s)/2))`.
///
/// Evaluated through `(d-2+s) Γ((d-2+s)/2) = 2 Γ((d+s)/2)`, which stays
/// finite at `d = 1, s = 1`.
pub fn normalization_h(dim: usize, s: f64) -> Result<f64> {
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidArgument(format!("dimension {dim} not in 1..=3")));
    }
    check_order_open(s)?;
    let num = PI.powf(0.5 * (2.0 - s)) * 2f64.powf(2.0 - s) * gamma(0.5 * (2.0 - s));
    let den = s * 2.0 * gamma(0.5 * (dim as f64 + s));
    Ok(num / den)
}

/// Riesz potential `I_d^s f(x)` with the printed prefactor.
pub fn riesz_potential(domain: &QuadratureDomain, f: &[f64], s: f64, x: [f64; 2]) -> Result<f64> {
    domain.check_len(f)?;
    let c = riesz_prefactor(domain.dim, s)?;
    let kernel = Kernel::Power {
        exponent: domain.dim as f64 - s,
        scale: c,
    };
    Ok(domain.integrate_kernel(f, kernel, x))
}

/// Kernel of `-I^{2-s}[Δ·]`, symbol-normalised.
fn fraclap_kernel(dim: usize, s: f64) -> Result<Kernel> {
    let exponent = dim as f64 - 2.0 + s;
    if dim == 1 && (s - 1.0).abs() < 1e-12 {
        return Ok(Kernel::Log { scale: -1.0 / PI });
    }
    Ok(Kernel::Power {
        exponent,
        scale: riesz_prefactor_normalized(dim, 2.0 - s)?,
    })
}

fn check_quadrature_inputs(
    domain: &QuadratureDomain,
    f: &[f64],
    order: FracOrder,
    boundary: &BoundaryData,
) -> Result<()> {
    domain.check_len(f)?;
    let s = order.value();
    check_range(
        "s",
        s,
        "0 < s <= 1.99 for the quadrature operator",
        s <= MAX_QUADRATURE_ORDER,
    )?;
    if boundary.nodes.len() != domain.surface.len()
        || boundary
            .nodes
            .iter()
            .zip(&domain.surface)
            .any(|(a, b)| a.position != b.position)
    {
        return Err(Error::InvalidArgument(
            "boundary data does not match the domain's surface nodes".into(),
        ));
    }
    let scale = f.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    for (node, d) in boundary.dirichlet() {
        let (value, _) = domain.surface_trace(f, node);
        if (value - d).abs() > BOUNDARY_TOL * scale {
            return Err(Error::BoundaryMismatch {
                node,
                field: value,
                data: d,
            });
        }
    }
    Ok(())
}

/// `(-Δ)^{s/2} f = -I^{2-s}[Δf]` at every node of the domain.
pub fn quadrature_fraclap(
    domain: &QuadratureDomain,
    f: &[f64],
    order: FracOrder,
    boundary: &BoundaryData,
) -> Result<Vec<f64>> {
    check_quadrature_inputs(domain, f, order, boundary)?;
    let kernel = fraclap_kernel(domain.dim, order.value())?;
    let lap = domain.laplacian(f);
    Ok(domain
        .nodes
        .par_iter()
        .map(|&x| -domain.integrate_kernel(&lap, kernel, x))
        .collect())
}

/// The quadrature operator split into a volume part and a boundary part.
#[derive(Debug, Clone, PartialEq)]
pub struct FraclapDecomposition {
    pub total: Vec<f64>,
    /// Hyper-singular volume term `-C∫f Δv`, obtained as `total - surface`.
    pub volume: Vec<f64>,
    /// `C ∫_S [φ ∂v/∂n - v ∂φ/∂n] dS` with `v = ‖x-ξ‖^{-(d-2+s)}`.
    pub surface: Vec<f64>,
}

/// Same operator, reported as volume plus surface contributions (Green's
/// second identity with `v = ‖x-ξ‖^{-(d-2+s)}`).
///
/// Surface values missing from the boundary data (the normal derivative on
/// Dirichlet nodes, the trace on Neumann nodes) are read off the field.
/// Surface nodes coinciding with the evaluation point are skipped.
pub fn quadrature_fraclap_decomposed(
    domain: &QuadratureDomain,
    f: &[f64],
    order: FracOrder,
    boundary: &BoundaryData,
) -> Result<FraclapDecomposition> {
    let total = quadrature_fraclap(domain, f, order, boundary)?;
    let kernel = fraclap_kernel(domain.dim, order.value())?;
    let traces: Vec<(f64, f64)> = boundary
        .conditions
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (v, dn) = domain.surface_trace(f, i);
            match *c {
                BoundaryCondition::Dirichlet(d) => (d, dn),
                BoundaryCondition::Neumann(nv) => (v, nv),
            }
        })
        .collect();
    let eps = 1e-12 * domain.spacing;
    let surface: Vec<f64> = domain
        .nodes
        .iter()
        .map(|&x| {
            boundary
                .nodes
                .iter()
                .zip(&traces)
                .map(|(node, &(phi, dphi))| {
                    let d = [node.position[0] - x[0], node.position[1] - x[1]];
                    let r = d[0].hypot(d[1]);
                    if r < eps {
                        return 0.0;
                    }
                    let dv_dn =
                        kernel.radial_derivative(r) * (d[0] * node.normal[0] + d[1] * node.normal[1]) / r;
                    node.weight * (phi * dv_dn - kernel.value(r) * dphi)
                })
                .sum()
        })
        .collect();
    let volume = total.iter().zip(&surface).map(|(t, s)| t - s).collect();
    Ok(FraclapDecomposition {
        total,
        volume,
        surface,
    })
}
