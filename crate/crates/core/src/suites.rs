//! Named verification suites, each producing one [`Report`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::action::{verify_alpha_derivatives, verify_multiplier, verify_oscillator_intertwine, verify_product_rule_p, verify_product_rule_q, ActionRoute};
use crate::alpha::{alpha, theta, verify_hausdorff_young, verify_inversion, verify_operator_inversion};
use crate::error::{Error, Result};
use crate::grid::{LineGrid, PlaneFunction, PlaneGrid};
use crate::hermite::{hermite_fn, max_resolvable_index, HermiteBasis};
use crate::operator::{op_compose, rank_one, KernelOperator, SchattenExponent};
use crate::oscillator::{eigen_residual, h_inv_schatten_grid, h_inv_schatten_series, oscillator_eigenvalue, oscillator_spectrum};
use crate::random::{complex_normal, dense_kernel, dense_plane, seeded, smooth_plane};
use crate::report::Report;
use crate::synthesis::mollifier::{dyadic_ladder, make_mollifier, tau_delta, versal_sample};

pub const SUITES: [&str; 11] = [
    "plancherel",
    "riemann-lebesgue",
    "hausdorff-young",
    "hoelder",
    "inversion",
    "multiplier",
    "derivatives",
    "product-rules",
    "oscillator",
    "hermite",
    "versal",
];

/// Number of random inputs in each property sweep.
pub const SWEEP: usize = 50;

/// Largest grid the quadrature route is run on inside the suites.
pub const DIRECT_N: usize = 32;

pub fn is_suite(name: &str) -> bool {
    SUITES.contains(&name)
}

pub fn run_suite(name: &str, n: usize, seed: u64) -> Result<Report> {
    let grid = LineGrid::self_dual(n)?;
    match name {
        "plancherel" => plancherel(&grid, seed),
        "riemann-lebesgue" => riemann_lebesgue(&grid, seed),
        "hausdorff-young" => hausdorff_young(&grid, seed),
        "hoelder" => hoelder(&grid, seed),
        "inversion" => inversion(&grid, seed),
        "multiplier" => multiplier(&grid),
        "derivatives" => derivatives(&grid),
        "product-rules" => product_rules(&grid),
        "oscillator" => oscillator(&grid, seed),
        "hermite" => hermite(&grid),
        "versal" => versal(&grid),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite '{other}' (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

pub fn gaussian_projector(grid: &LineGrid) -> Result<KernelOperator> {
    let phi = hermite_fn(grid, 0)?;
    rank_one(&phi, &phi)
}

/// `2e^{-2π(x²+y²)}`, whose transform is `e^{-π(ξ²+η²)/2}`.
pub fn gaussian_weight(plane: &PlaneGrid) -> PlaneFunction {
    PlaneFunction::from_real_fn(*plane, |x, y| 2.0 * (-2.0 * PI * (x * x + y * y)).exp())
}

/// `Σ c_{jk} φ_j ⊗ φ̄_k` over `j, k < modes` with complex Gaussian weights.
pub fn hermite_mixture(grid: &LineGrid, modes: usize, seed: u64) -> Result<KernelOperator> {
    let mut rng = seeded(seed);
    let basis = HermiteBasis::new(grid, modes)?;
    let mut x = KernelOperator::zeros(*grid);
    for j in 0..modes {
        for k in 0..modes {
            let c = complex_normal(&mut rng);
            x = x.add(&rank_one(basis.get(j), basis.get(k))?.scaled(c))?;
        }
    }
    Ok(x)
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn plancherel(grid: &LineGrid, seed: u64) -> Result<Report> {
    let plane = PlaneGrid::square(*grid);
    let mut rng = seeded(seed);
    let inputs: Vec<PlaneFunction> = (0..SWEEP).map(|_| smooth_plane(&plane, 3, &mut rng)).collect();
    let ratios: Vec<f64> = inputs
        .par_iter()
        .map(|f| Ok(theta(f)?.schatten_norm(SchattenExponent::TWO) / f.l2_norm()))
        .collect::<Result<_>>()?;
    let mut r = Report::new("plancherel", grid);
    r.input("f", Some(seed), format!("{SWEEP} sums of 3 random Gaussian wave packets"));
    let dev = worst(ratios.iter().map(|q| (q - 1.0).abs()));
    r.quantity("ratio_first", ratios[0]);
    r.quantity("ratio_min", ratios.iter().copied().fold(f64::INFINITY, f64::min));
    r.quantity("ratio_max", worst(ratios.iter().copied()));
    r.quantity("max_ratio_deviation", dev);
    let violations = ratios.iter().filter(|q| (*q - 1.0).abs() >= 1e-8).count();
    r.quantity("violations", violations as f64);
    r.check_le("theta_s2_over_l2_minus_one", dev, 0.0, 1e-8);
    Ok(r)
}

fn riemann_lebesgue(grid: &LineGrid, seed: u64) -> Result<Report> {
    let plane = PlaneGrid::square(*grid);
    let mut rng = seeded(seed);
    let ops: Vec<KernelOperator> = (0..SWEEP).map(|_| dense_kernel(grid, &mut rng)).collect();
    let planes: Vec<PlaneFunction> = (0..SWEEP).map(|_| dense_plane(&plane, &mut rng)).collect();
    let alpha_ratios: Vec<f64> = ops
        .par_iter()
        .map(|x| Ok(alpha(x)?.sup_norm() / x.trace_norm()))
        .collect::<Result<_>>()?;
    let theta_ratios: Vec<f64> = planes
        .par_iter()
        .map(|f| Ok(theta(f)?.schatten_norm(SchattenExponent::INFINITY) / f.l1_norm()))
        .collect::<Result<_>>()?;
    let mut r = Report::new("riemann-lebesgue", grid);
    r.input("X", Some(seed), format!("{SWEEP} kernels with i.i.d. complex Gaussian entries"));
    r.input("f", Some(seed), format!("{SWEEP} planes with i.i.d. complex Gaussian samples"));
    sweep_checks(&mut r, "alpha_sup_le_s1", &alpha_ratios);
    sweep_checks(&mut r, "theta_op_norm_le_l1", &theta_ratios);
    Ok(r)
}

/// Records the worst ratio and the number of ratios above `1 + 10⁻⁹`.
fn sweep_checks(r: &mut Report, name: &str, ratios: &[f64]) {
    let max = worst(ratios.iter().copied());
    let violations = ratios.iter().filter(|&&q| q > 1.0 + 1e-9).count();
    r.quantity(format!("{name}_max_ratio"), max);
    r.quantity(format!("{name}_violations"), violations as f64);
    r.check_le(name, max, 1.0, 1e-9);
}

fn hausdorff_young(grid: &LineGrid, seed: u64) -> Result<Report> {
    let plane = PlaneGrid::square(*grid);
    let mut rng = seeded(seed);
    let inputs: Vec<PlaneFunction> = (0..SWEEP).map(|_| smooth_plane(&plane, 3, &mut rng)).collect();
    let ps = [1.0, 1.25, 1.5, 1.75, 2.0];
    let per_input: Vec<Vec<f64>> = inputs
        .par_iter()
        .map(|f| {
            let sv = theta(f)?.singular_values();
            ps.iter()
                .map(|&p| Ok(sv.norm(SchattenExponent::new(p)?.conjugate()) / f.lp_norm(p)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut r = Report::new("hausdorff-young", grid);
    r.input("f", Some(seed), format!("{SWEEP} sums of 3 random Gaussian wave packets"));
    for (i, p) in ps.iter().enumerate() {
        let ratios: Vec<f64> = per_input.iter().map(|row| row[i]).collect();
        sweep_checks(&mut r, &format!("theta_sp_conjugate_le_lp@p={p}"), &ratios);
    }
    let detail = verify_hausdorff_young(&inputs[0], 1.5)?;
    r.absorb("first_input", detail);
    Ok(r)
}

fn hoelder(grid: &LineGrid, seed: u64) -> Result<Report> {
    let mut rng = seeded(seed);
    let pairs: Vec<(KernelOperator, KernelOperator)> = (0..SWEEP)
        .map(|_| (dense_kernel(grid, &mut rng), dense_kernel(grid, &mut rng)))
        .collect();
    let ps = [1.0, 4.0 / 3.0, 2.0, 4.0, f64::INFINITY];
    let per_pair: Vec<Vec<f64>> = pairs
        .par_iter()
        .map(|(a, b)| {
            let ab = op_compose(a, b)?.trace_norm();
            let sa = a.singular_values();
            let sb = b.singular_values();
            ps.iter()
                .map(|&p| {
                    let e = SchattenExponent::new(p)?;
                    Ok(ab / (sa.norm(e) * sb.norm(e.conjugate())))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut r = Report::new("hoelder", grid);
    r.input("A, B", Some(seed), format!("{SWEEP} pairs of kernels with i.i.d. complex Gaussian entries"));
    for (i, p) in ps.iter().enumerate() {
        let ratios: Vec<f64> = per_pair.iter().map(|row| row[i]).collect();
        sweep_checks(&mut r, &format!("s1_of_product_le_sp_times_sq@p={p}"), &ratios);
    }
    let tr_ratios: Vec<f64> = pairs.iter().map(|(a, _)| a.trace().norm() / a.trace_norm()).collect();
    sweep_checks(&mut r, "abs_trace_le_s1", &tr_ratios);
    Ok(r)
}

fn inversion(grid: &LineGrid, seed: u64) -> Result<Report> {
    let plane = PlaneGrid::square(*grid);
    let modes = 6.min(max_resolvable_index(grid) + 1);
    let mixture = hermite_mixture(grid, modes, seed)?;
    let gauss = PlaneFunction::from_real_fn(plane, |x, y| 2f64.sqrt() * (-PI * (x * x + y * y)).exp());
    let mut r = Report::new("inversion", grid);
    r.input("gaussian", None, "2^{1/2} exp(-pi (x^2 + y^2)) and the ground-state projector");
    r.input("hermite-mixture", Some(seed), format!("sum of c_jk phi_j (x) conj(phi_k), j, k < {modes}, complex Gaussian c_jk"));
    r.absorb("gaussian_plane", verify_inversion(&gauss)?);
    r.absorb("mixture_plane", verify_inversion(&alpha(&mixture)?)?);
    r.absorb("gaussian_operator", verify_operator_inversion(&gaussian_projector(grid)?)?);
    r.absorb("mixture_operator", verify_operator_inversion(&mixture)?);
    Ok(r)
}

fn multiplier(grid: &LineGrid) -> Result<Report> {
    let small = LineGrid::self_dual(grid.n().min(DIRECT_N))?;
    let mut r = Report::new("multiplier", grid);
    r.input("q", None, "2 exp(-2 pi (x^2 + y^2))");
    r.input("X", None, "ground-state projector phi_0 (x) conj(phi_0)");
    let direct = verify_multiplier(
        &gaussian_weight(&PlaneGrid::square(small)),
        &gaussian_projector(&small)?,
        ActionRoute::Direct,
        1e-3,
    )?;
    r.quantity("direct_n", small.n() as f64);
    r.absorb("direct", direct);
    let spectral = verify_multiplier(
        &gaussian_weight(&PlaneGrid::square(*grid)),
        &gaussian_projector(grid)?,
        ActionRoute::Spectral,
        1e-6,
    )?;
    r.absorb("spectral", spectral);
    Ok(r)
}

fn derivatives(grid: &LineGrid) -> Result<Report> {
    let mut r = Report::new("derivatives", grid);
    r.input("X", None, "Hermite projectors phi_0 (x) conj(phi_0) and phi_1 (x) conj(phi_1)");
    r.absorb("ground", verify_alpha_derivatives(&gaussian_projector(grid)?, 1e-6)?);
    let phi1 = hermite_fn(grid, 1)?;
    r.absorb("first", verify_alpha_derivatives(&rank_one(&phi1, &phi1)?, 1e-5)?);
    Ok(r)
}

fn product_rules(grid: &LineGrid) -> Result<Report> {
    let small = LineGrid::self_dual(grid.n().min(DIRECT_N))?;
    let mut r = Report::new("product-rules", grid);
    r.input("q", None, "2 exp(-2 pi (x^2 + y^2))");
    r.input("X", None, "ground-state projector phi_0 (x) conj(phi_0)");
    let (q, x) = (gaussian_weight(&PlaneGrid::square(*grid)), gaussian_projector(grid)?);
    r.absorb("spectral_p", verify_product_rule_p(&q, &x, ActionRoute::Spectral)?);
    r.absorb("spectral_q", verify_product_rule_q(&q, &x, ActionRoute::Spectral)?);
    let (q, x) = (gaussian_weight(&PlaneGrid::square(small)), gaussian_projector(&small)?);
    r.quantity("direct_n", small.n() as f64);
    r.absorb("direct_p", verify_product_rule_p(&q, &x, ActionRoute::Direct)?);
    r.absorb("direct_q", verify_product_rule_q(&q, &x, ActionRoute::Direct)?);
    Ok(r)
}

fn oscillator(grid: &LineGrid, seed: u64) -> Result<Report> {
    let plane = PlaneGrid::square(*grid);
    let mut r = Report::new("oscillator", grid);
    r.input("q", None, "2 exp(-2 pi (x^2 + y^2))");
    r.input("X", None, "ground-state projector phi_0 (x) conj(phi_0)");
    r.input("Y", Some(seed), "Hermite mixture over the first 4 modes");
    let q = gaussian_weight(&plane);
    r.absorb("ground", verify_oscillator_intertwine(&q, &gaussian_projector(grid)?, 1e-3)?);
    let modes = 4.min(max_resolvable_index(grid) + 1);
    r.absorb("mixture", verify_oscillator_intertwine(&q, &hermite_mixture(grid, modes, seed)?, 1e-3)?);
    let series = h_inv_schatten_series(2.0, 2000);
    r.quantity("h_inv_s2_series", series);
    r.quantity("h_inv_s2_grid", h_inv_schatten_grid(grid, 2.0)?);
    r.check_approx("h_inv_s2_is_one_over_sqrt_32", series, 1.0 / 32f64.sqrt(), 1e-3);
    Ok(r)
}

fn hermite(grid: &LineGrid) -> Result<Report> {
    let kmax = 10.min(max_resolvable_index(grid));
    let mut r = Report::new("hermite", grid);
    r.input("phi_k", None, format!("sampled Hermite functions, k <= {kmax}"));
    r.quantity("max_resolvable_index", max_resolvable_index(grid) as f64);
    let mut worst_residual = 0.0f64;
    for k in 0..=kmax {
        let res = eigen_residual(&hermite_fn(grid, k)?, k)?;
        r.quantity(format!("eigen_residual@k={k}"), res);
        worst_residual = worst_residual.max(res);
    }
    r.check_le("max_eigen_residual", worst_residual, 0.0, 1e-6);
    let gram = HermiteBasis::new(grid, kmax + 1)?.gram();
    let m = gram.nrows();
    let mut off = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let target = if i == j { 1.0 } else { 0.0 };
            off = off.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    r.check_le("orthonormality", off, 0.0, 1e-10);
    let spectrum = oscillator_spectrum(grid)?;
    let spec_err = worst((0..=kmax).map(|k| {
        let lambda = oscillator_eigenvalue(k);
        (spectrum[k] - lambda).abs() / lambda.abs()
    }));
    r.quantity("grid_spectrum_relative_error", spec_err);
    r.check_le("grid_spectrum_matches", spec_err, 0.0, 1e-6);
    Ok(r)
}

fn versal(grid: &LineGrid) -> Result<Report> {
    let fam = make_mollifier(&PlaneGrid::square(*grid))?;
    let v = fam.versal;
    let mut r = Report::new("versal", grid);
    r.input("tau", None, "radial bump, plateau radius 1/2, support radius 1");
    r.quantity("versal", v);
    for delta in dyadic_ladder(grid, usize::MAX) {
        let td = tau_delta(&fam, delta)?;
        r.quantity(format!("same_grid_l1_ratio@delta={delta}"), td.tau_check.l1_norm() / v);
        r.quantity(format!("same_grid_scaling_error@delta={delta}"), td.scaling_error);
    }
    for delta in [1.0, 0.5, 0.25, 0.125] {
        let s = versal_sample(grid.n(), delta)?;
        let ratio = s.l1_norm / v;
        r.quantity(format!("grid_n@delta={delta}"), s.n as f64);
        r.quantity(format!("l1_ratio@delta={delta}"), ratio);
        r.check_le(format!("l1_ratio_at_least_0.99@delta={delta}"), 0.99, ratio, 0.0);
        r.check_le(format!("l1_ratio_at_most_1.01@delta={delta}"), ratio, 1.01, 0.0);
        r.quantity(format!("scaling_probes@delta={delta}"), s.probes as f64);
        r.check_le(format!("scaling_identity@delta={delta}"), s.scaling_error, 0.0, 1e-6);
    }
    Ok(r)
}
