/// Every floating-point tolerance used by the toolkit.
///
/// The exact feasibility engine never reads these; they only govern float
/// linear algebra and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Unit norm of pure states and bipartite states.
    pub norm: f64,
    /// Hermiticity, PSD and unit trace of density operators.
    pub density: f64,
    /// Bloch ball radius slack.
    pub bloch: f64,
    /// POVM effect positivity and completeness.
    pub povm: f64,
    /// Schmidt coefficient threshold separating rank from noise.
    pub schmidt_rank: f64,
    /// Mixture reconstruction of a decomposition.
    pub reconstruction: f64,
    /// Residual of a projection onto the range of a density operator.
    pub range_residual: f64,
    /// Squared overlap below which two pure states count as orthogonal.
    pub orthogonal: f64,
    /// `1 - fidelity` below which two pure states count as the same ray.
    pub same_state: f64,
    /// Born overlap below which the degree of epistemicity is undefined.
    pub born_orthogonal: f64,
    /// Density threshold defining ontic supports.
    pub support: f64,
    /// Mismatch allowed between a steering target and the reduced state.
    pub steering_target: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-12,
        density: 1e-12,
        bloch: 1e-12,
        povm: 1e-10,
        schmidt_rank: 1e-9,
        reconstruction: 1e-10,
        range_residual: 1e-9,
        orthogonal: 1e-12,
        same_state: 1e-9,
        born_orthogonal: 1e-9,
        support: 1e-12,
        steering_target: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
