//! Default tolerances, collected in one place so every solver and check
//! draws from the same constants.

/// Hermitian residual ‖H − H*‖_F accepted before symmetrizing, relative to (1 + ‖H‖_F).
pub const HERMITIAN_RESIDUAL: f64 = 1e-9;

/// Most negative eigenvalue a positive-semidefinite operator may show.
pub const PSD_EIGENVALUE_FLOOR: f64 = 1e-9;

/// Allowed deviation |tr(P) − 1| for a state.
pub const UNIT_TRACE: f64 = 1e-9;

/// Jacobi sweep stop: off-diagonal Frobenius mass ≤ this × n × ‖H‖_F.
pub const EIG_OFF_FACTOR: f64 = 1e-14;

/// Residual criterion for computed eigenvalues: σ_min(A − λI) ≤ this × ‖A‖.
pub const SPECTRUM_RESIDUAL: f64 = 1e-8;

/// Membership slack for enclosing discs.
pub const DISC_MEMBERSHIP: f64 = 1e-12;

/// Absolute slack allowed on each inequality link.
pub const INEQUALITY_ABS: f64 = 1e-9;

/// Relative slack allowed on each inequality link (scaled by 1 + ‖A‖‖T‖).
pub const INEQUALITY_REL: f64 = 1e-9;

/// Looser tolerance where two iterative solvers must meet at an equality.
pub const EQUALITY_LINK: f64 = 1e-6;

/// Normality residual ‖AA* − A*A‖ accepted, relative to ‖A‖².
pub const NORMALITY_RESIDUAL: f64 = 1e-9;

/// σ_min(T) ≥ this × ‖T‖ stands in for "T bounded below".
pub const BOUNDED_BELOW_FACTOR: f64 = 1e-8;

/// dist(A, ℂId) ≤ this × (1 + ‖A‖) flags A as a scalar multiple of the identity.
pub const SCALAR_MULTIPLE: f64 = 1e-10;

/// Negative slack accepted on variance nonnegativity (floating-point Cauchy–Schwarz).
pub const VARIANCE_FLOOR: f64 = 1e-10;

/// Agreement demanded between a variance identity and the direct trace formula.
pub const IDENTITY_AGREEMENT: f64 = 1e-10;
