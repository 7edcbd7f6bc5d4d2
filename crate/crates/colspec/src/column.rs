//! Physical and dimensionless parameters of the accretion-column problem
//! and the closed-form maps between them.

use crate::{Error, Result};

/// Physical constants (CODATA 2018), documented to 10 digits.
pub mod constants {
    /// Boltzmann constant [erg/K]
    pub const BOLTZMANN_ERG_PER_K: f64 = 1.380649e-16;
    /// Speed of light [cm/s]
    pub const SPEED_OF_LIGHT_CM_S: f64 = 2.99792458e10;
    /// Electron rest energy m_e c² [erg]
    pub const ELECTRON_REST_ENERGY_ERG: f64 = 8.187105777e-7;
    /// Proton mass [g]
    pub const PROTON_MASS_G: f64 = 1.672621924e-24;
    /// Thomson cross section [cm²]
    pub const THOMSON_CROSS_SECTION_CM2: f64 = 6.652458732e-25;
}

/// Inputs defining one accretion-column problem.
///
/// `ndot0` is the photon injection rate [photons/s], `te` the electron
/// temperature [K], `r0` the column radius [cm]; `alpha` (velocity-profile
/// constant), `xi` (escape parameter) and `beta` (bulk-vs-thermal parameter)
/// are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnParams {
    ndot0: f64,
    te: f64,
    r0: f64,
    alpha: f64,
    xi: f64,
    beta: f64,
}

impl ColumnParams {
    /// All fields must be strictly positive. ξ = 0 in particular is
    /// rejected here: it makes a = 0 and λ₀ = 3, which are poles of the
    /// closed-form and series density expressions.
    pub fn new(ndot0: f64, te: f64, r0: f64, alpha: f64, xi: f64, beta: f64) -> Result<Self> {
        let check = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )))
            }
        };
        check("ndot0", ndot0)?;
        check("te", te)?;
        check("r0", r0)?;
        check("alpha", alpha)?;
        check("xi", xi)?;
        check("beta", beta)?;
        Ok(ColumnParams {
            ndot0,
            te,
            r0,
            alpha,
            xi,
            beta,
        })
    }

    pub fn ndot0(&self) -> f64 {
        self.ndot0
    }
    pub fn te(&self) -> f64 {
        self.te
    }
    pub fn r0(&self) -> f64 {
        self.r0
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// kT_e [erg]
    pub fn kte(&self) -> f64 {
        constants::BOLTZMANN_ERG_PER_K * self.te
    }

    /// Same problem with a different injection rate (everything downstream
    /// is linear in Ṅ₀).
    pub fn with_ndot0(&self, ndot0: f64) -> Result<Self> {
        ColumnParams::new(ndot0, self.te, self.r0, self.alpha, self.xi, self.beta)
    }
}

/// Quantities computed once per problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub w: f64,
    pub a: f64,
    pub kappa: f64,
}

/// w = √(9+12ξ²), a = (w−3)/(4w), κ = (β+4)/2.
pub fn derive(params: &ColumnParams) -> DerivedParams {
    let w = (9.0 + 12.0 * params.xi * params.xi).sqrt();
    DerivedParams {
        w,
        a: (w - 3.0) / (4.0 * w),
        kappa: 0.5 * (params.beta + 4.0),
    }
}

/// Per-index data for one term of the eigenfunction expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    pub n: usize,
    pub lambda_n: f64,
    pub mu_n: f64,
}

/// λ_n = (4nw+w+3)/2 and μ_n = ½√((3−β)² + 4βλ_n).
pub fn eigenmode(n: usize, derived: &DerivedParams, beta: f64) -> EigenMode {
    let w = derived.w;
    let lambda_n = 0.5 * (4.0 * n as f64 * w + w + 3.0);
    let d = 3.0 - beta;
    EigenMode {
        n,
        lambda_n,
        mu_n: 0.5 * (d * d + 4.0 * beta * lambda_n).sqrt(),
    }
}

/// Dimensionless inflow speed v/c = −ατ for the linear velocity profile.
pub fn velocity_of_tau(tau: f64, alpha: f64) -> f64 {
    -alpha * tau
}

/// Optional microphysical inputs for the physical-unit helpers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroPhysics {
    pub sigma_par: f64,
    pub sigma_perp: f64,
    pub sigma_bar: f64,
    pub mdot: f64,
    pub ne: f64,
}

impl MicroPhysics {
    pub fn new(sigma_par: f64, sigma_perp: f64, sigma_bar: f64, mdot: f64, ne: f64) -> Result<Self> {
        for (name, v) in [
            ("sigma_par", sigma_par),
            ("sigma_perp", sigma_perp),
            ("sigma_bar", sigma_bar),
            ("mdot", mdot),
            ("ne", ne),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(MicroPhysics {
            sigma_par,
            sigma_perp,
            sigma_bar,
            mdot,
            ne,
        })
    }
}

/// τ(z) = (σ_∥/σ_⊥)^{1/4} (2z/(αξr₀))^{1/2} for the separable velocity
/// profile.
pub fn tau_of_z(z: f64, alpha: f64, xi: f64, r0: f64, micro: &MicroPhysics) -> f64 {
    (micro.sigma_par / micro.sigma_perp).powf(0.25) * (2.0 * z / (alpha * xi * r0)).sqrt()
}

/// Altitude profile of the inflow speed, v(z)/c = −(σ_∥/σ_⊥)^{1/4}
/// (2αz/(ξr₀))^{1/2}.
pub fn velocity_of_z(z: f64, alpha: f64, xi: f64, r0: f64, micro: &MicroPhysics) -> f64 {
    -(micro.sigma_par / micro.sigma_perp).powf(0.25) * (2.0 * alpha * z / (xi * r0)).sqrt()
}

/// χ = ε/(kT_e) for ε in erg.
pub fn chi_of_energy(eps: f64, te: f64) -> f64 {
    eps / (constants::BOLTZMANN_ERG_PER_K * te)
}

/// ξ = πr₀ m_p c / (Ṁ (σ_∥σ_⊥)^{1/2})
pub fn xi_from_microphysics(micro: &MicroPhysics, r0: f64) -> f64 {
    std::f64::consts::PI * r0 * constants::PROTON_MASS_G * constants::SPEED_OF_LIGHT_CM_S
        / (micro.mdot * (micro.sigma_par * micro.sigma_perp).sqrt())
}

/// β = (α/3)(σ_∥/σ̄)(m_e c²/kT_e)
pub fn beta_from_microphysics(alpha: f64, micro: &MicroPhysics, te: f64) -> f64 {
    alpha / 3.0 * (micro.sigma_par / micro.sigma_bar) * constants::ELECTRON_REST_ENERGY_ERG
        / (constants::BOLTZMANN_ERG_PER_K * te)
}

/// Diffusive mean escape time t_esc = r₀τ_⊥/c with τ_⊥ = n_e σ_⊥ r₀ [s].
pub fn escape_time(micro: &MicroPhysics, r0: f64) -> f64 {
    let tau_perp = micro.ne * micro.sigma_perp * r0;
    r0 * tau_perp / constants::SPEED_OF_LIGHT_CM_S
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1a() -> ColumnParams {
        ColumnParams::new(1.0, 1e7, 1e4, 0.1, 1.5, 0.3).unwrap()
    }

    #[test]
    fn derive_closed_forms() {
        let d = derive(&fig1a());
        assert_eq!(d.w, 6.0); // √(9+12·2.25) = √36
        assert_eq!(d.a, 0.125); // 3/24
        assert_eq!(d.kappa, 2.15); // (0.3+4)/2
        let p2 = ColumnParams::new(1.0, 1e7, 1e4, 0.1, 1.5, 1.5).unwrap();
        assert_eq!(derive(&p2).kappa, 2.75);
    }

    #[test]
    fn xi_zero_rejected() {
        assert!(ColumnParams::new(1.0, 1e7, 1e4, 0.1, 0.0, 0.3).is_err());
        assert!(ColumnParams::new(1.0, 1e7, 1e4, 0.1, -1.0, 0.3).is_err());
    }

    #[test]
    fn eigenvalues() {
        let d = derive(&fig1a());
        let m0 = eigenmode(0, &d, 0.3);
        assert_eq!(m0.lambda_n, 4.5);
        let m1 = eigenmode(1, &d, 0.3);
        assert_eq!(m1.lambda_n, 16.5);
        // high-precision evaluation of μ₀ for β=0.3, λ₀=4.5
        assert!((m0.mu_n - 1.781151313055687585200938).abs() < 1e-14);
    }

    #[test]
    fn eigenmode_algebraic_identity() {
        // (κ+μ−1/2)(μ−κ+1/2) = β(λ−3): at n=0 this equals 0.3·1.5 = 0.45
        let d = derive(&fig1a());
        let kappa = d.kappa;
        let m0 = eigenmode(0, &d, 0.3);
        let lhs = (kappa + m0.mu_n - 0.5) * (m0.mu_n - kappa + 0.5);
        assert!((lhs - 0.45).abs() < 1e-13);
    }

    #[test]
    fn eigenvalue_spacing_is_two_w() {
        let d = derive(&fig1a());
        for n in 0..20 {
            let lo = eigenmode(n, &d, 0.3).lambda_n;
            let hi = eigenmode(n + 1, &d, 0.3).lambda_n;
            assert_eq!(hi - lo, 2.0 * d.w);
        }
    }

    #[test]
    fn velocity_profile() {
        assert_eq!(velocity_of_tau(0.0, 0.1), 0.0);
        assert_eq!(velocity_of_tau(0.5, 0.1), -0.05);
        assert!((velocity_of_tau(1.5, 0.1) + 0.15).abs() < 1e-15);
    }

    #[test]
    fn tau_of_z_inversion() {
        let micro = MicroPhysics::new(1e-24, 1e-24, 1e-24, 1e17, 1e22).unwrap();
        assert_eq!(tau_of_z(0.0, 0.1, 1.5, 1e4, &micro), 0.0);
        // z = αξr₀/2 = 750 cm gives τ = 1 when σ_∥ = σ_⊥
        let tau = tau_of_z(750.0, 0.1, 1.5, 1e4, &micro);
        assert!((tau - 1.0).abs() < 1e-14);
    }

    #[test]
    fn velocity_maps_compose() {
        let micro = MicroPhysics::new(2e-24, 0.5e-24, 1e-24, 1e17, 1e22).unwrap();
        for z in [10.0, 200.0, 750.0, 4000.0] {
            let tau = tau_of_z(z, 0.1, 1.5, 1e4, &micro);
            let v1 = velocity_of_z(z, 0.1, 1.5, 1e4, &micro);
            let v2 = velocity_of_tau(tau, 0.1);
            assert!((v1 / v2 - 1.0).abs() < 1e-12, "z={z}: {v1} vs {v2}");
        }
    }

    #[test]
    fn chi_of_energy_examples() {
        let kte = constants::BOLTZMANN_ERG_PER_K * 1e7;
        assert_eq!(chi_of_energy(kte, 1e7), 1.0);
        assert!((chi_of_energy(0.1 * kte, 1e7) - 0.1).abs() < 1e-15);
        // 1 keV at T_e = 10⁷ K
        let chi = chi_of_energy(1.602176634e-9, 1e7);
        assert!((chi - 1.160451812155008).abs() < 1e-12);
    }

    #[test]
    fn beta_exact_cancellation() {
        // σ_∥ = σ̄ and kT_e = m_e c²/30 with α = 0.1 gives β = 1
        let micro = MicroPhysics::new(1e-24, 1e-24, 1e-24, 1e17, 1e22).unwrap();
        let te = constants::ELECTRON_REST_ENERGY_ERG / (30.0 * constants::BOLTZMANN_ERG_PER_K);
        let beta = beta_from_microphysics(0.1, &micro, te);
        assert!((beta - 1.0).abs() < 1e-14);
    }

    #[test]
    fn xi_scaling_in_mdot() {
        let m1 = MicroPhysics::new(1e-24, 1e-24, 1e-24, 1e17, 1e22).unwrap();
        let m2 = MicroPhysics::new(1e-24, 1e-24, 1e-24, 2e17, 1e22).unwrap();
        let x1 = xi_from_microphysics(&m1, 1e4);
        let x2 = xi_from_microphysics(&m2, 1e4);
        assert!((x1 / x2 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn escape_time_example() {
        let micro = MicroPhysics::new(1e-24, 6.652e-25, 1e-24, 1e17, 1e22).unwrap();
        let t = escape_time(&micro, 1e4);
        // τ_⊥ = n_e σ_⊥ r₀ = 66.52, t_esc = r₀ τ_⊥/c ≈ 2.2189e−5 s
        assert!((t / 2.2188666e-5 - 1.0).abs() < 1e-6);
    }
}
