use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("degenerate gradient: the point is a critical point of the defining function")]
    DegenerateGradient,

    #[error("Levi-Fefferman determinant J = {0} is not positive; the hypersurface is degenerate here")]
    Degenerate(f64),

    #[error("point is not on the hypersurface: |rho| = {rho:e} exceeds tolerance {tol:e}")]
    OffManifold { rho: f64, tol: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("polynomial term z^{0} w^{1} exceeds total degree 4")]
    DegreeTooHigh(usize, usize),

    #[error("the gamma curves degenerate when b = 0; the b = 0 locus contains the circle w = 0 instead (see special_locus_b0)")]
    DegenerateCurve,

    #[error("a = b = 0 is the unit sphere, which is umbilical everywhere; there is no locus to return")]
    Sphere,

    #[error("cubic has no positive root")]
    NoPositiveRoot,

    #[error("cubic root is degenerate: {0}")]
    RootDegeneracy(String),

    #[error("oracle step h = {0:e} outside [1e-6, 1e-3]")]
    OracleStep(f64),

    #[error("finite-difference oracle is not in its asymptotic range: Richardson ratio {ratio:.3} at h = {h:e}")]
    Richardson { h: f64, ratio: f64 },

    #[error("Newton correction did not converge")]
    NewtonDiverged,

    #[error("{0}")]
    SpecialParameters(String),

    #[error("invalid trace configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
