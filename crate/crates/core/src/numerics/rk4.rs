//! Classical fixed-step Runge–Kutta integration.

/// Advances `x` by one classical RK4 step of length `dt`.
///
/// The control `u` is held constant across the step (zero-order hold). A
/// non-finite result is returned as-is; callers decide whether it counts as
/// divergence.
pub fn rk4_step<const N: usize, F>(f: F, x: &[f64; N], u: f64, dt: f64) -> [f64; N]
where
    F: Fn(&[f64; N], f64) -> [f64; N],
{
    debug_assert!(dt > 0.0);
    let offset = |base: &[f64; N], k: &[f64; N], h: f64| -> [f64; N] {
        std::array::from_fn(|i| base[i] + h * k[i])
    };
    let k1 = f(x, u);
    let k2 = f(&offset(x, &k1, 0.5 * dt), u);
    let k3 = f(&offset(x, &k2, 0.5 * dt), u);
    let k4 = f(&offset(x, &k3, dt), u);
    std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates an autonomous system from `t = 0` over `steps` steps of `dt`.
pub fn integrate<const N: usize, F>(f: F, x0: [f64; N], dt: f64, steps: usize) -> [f64; N]
where
    F: Fn(&[f64; N], f64) -> [f64; N],
{
    (0..steps).fold(x0, |x, _| rk4_step(&f, &x, 0.0, dt))
}
