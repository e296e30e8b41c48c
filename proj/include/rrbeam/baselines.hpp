#pragma once

#include "rrbeam/array_model.hpp"
#include "rrbeam/types.hpp"

namespace rrbeam {

/// r_inv a / (a^H r_inv a). Throws NumericalError when the denominator
/// is not safely positive.
CVector mvdr_weights(const CMatrix& r_inv, const CVector& a);

/// Full-rank beamformer state shared by the SG and RLS baselines.
struct FullRankState {
    CVector weights;
    CVector assumed;  // presumed SoI steering vector
    CovarianceTracker tracker;
    PowerTracker power;
    double step_size = 0.0;
};

/// Starts from w = a_bar / ||a_bar||^2 with r_inv = delta I.
FullRankState make_fullrank_state(const CVector& assumed, double forgetting, double delta,
                                  double step_size);

/// Constrained LMS: w <- w - mu P x y*, then re-projected onto w^H a_bar = 1.
/// mu is normalized by the tracked input power.
void fullrank_sg_step(FullRankState& state, const CVector& x);

/// Rank-one update of the tracked inverse followed by the MVDR solution.
void fullrank_rls_step(FullRankState& state, const CVector& x);

struct RcbSolution {
    CVector weights;
    CVector steering;   // recovered steering vector a_hat
    double multiplier;  // Lagrange multiplier of the spherical constraint
};

/// Full-rank robust Capon beamformer: min a^H R^-1 a s.t. ||a - a_bar||^2 = epsilon,
/// solved through the eigendecomposition of r_hat and a safeguarded Newton /
/// bisection search on the secular equation.
///
/// Throws InvalidArgument when epsilon >= ||a_bar||^2 (the sphere then contains
/// the origin) and NumericalError when the search does not converge in 200 iterations.
RcbSolution solve_robust_capon(const CMatrix& r_hat, const CVector& a_bar, double epsilon);
CVector rcb_fullrank(const CMatrix& r_hat, const CVector& a_bar, double epsilon);

/// Normalized, non-orthogonal Krylov basis [a, R a, ..., R^{D-1} a].
/// Throws NumericalError when the columns are linearly dependent.
CMatrix krylov_projection(const CMatrix& r_hat, const CVector& a, int d);

}  // namespace rrbeam
