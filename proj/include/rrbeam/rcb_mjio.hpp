#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rrbeam/mjio.hpp"

namespace rrbeam {

/// Robust Capon MJIO state: the MJIO core plus the reduced steering estimate
/// and the spherical-constraint multiplier.
struct RcbMjioState {
    MjioState base;
    SteeringBank bank;
    CVector a_tilde;                  // reduced steering estimate (D)
    double lambda_rcb = 0.0;
    double epsilon = 0.0;
    std::vector<CVector> alpha_diff;  // a_d - a_bar per candidate
    double mu_a = 0.0;
    bool gram_schmidt = false;
    std::uint64_t held_weights = 0;   // RLS steps that kept the previous weights
};

RcbMjioState make_rcb_mjio_state(const SteeringBank& bank, double forgetting, double delta,
                                 double mu_w, double mu_s, double mu_a, double epsilon,
                                 bool gram_schmidt);

/// [s_1^H a_1, ..., s_D^H a_D], optionally with entry `skip` set to zero.
CVector bank_reduced_steering(const CMatrix& s_matrix, const SteeringBank& bank,
                              std::optional<Eigen::Index> skip = std::nullopt);

/// Scalar multiplier for column d: minus the least-squares ratio of
/// R_D^-1 a_tilde (a_d^H s_d) onto S^H alpha_d (alpha_d^H s_d).
/// Empty when alpha_d^H s_d or S^H alpha_d vanishes (no mismatch direction).
std::optional<double> lagrange_multiplier_rcb(const RcbMjioState& state, Eigen::Index d,
                                              const CMatrix& reduced_inv);
std::optional<double> lagrange_multiplier_rcb(const RcbMjioState& state, Eigen::Index d);

/// Mean of the per-column multipliers that exist, else 0.
double combined_multiplier(const RcbMjioState& state, const CMatrix& reduced_inv);

/// Robust Lagrangian with R_D^-1 held fixed:
/// a~^H R_D^-1 a~ + lambda (sum_d |s_d^H alpha_d|^2 - epsilon), a~_d = s_d^H a_d.
double rcb_lagrangian(const CMatrix& s_matrix, const SteeringBank& bank, const CMatrix& reduced_inv,
                      double lambda, double epsilon);

/// d/ds_d* of rcb_lagrangian:
/// a_d a_check_d^H r_d + tau_d a_d a_d^H s_d + lambda alpha_d alpha_d^H s_d.
CVector rcb_column_gradient(const CMatrix& s_matrix, const SteeringBank& bank,
                            const CMatrix& reduced_inv, double lambda, Eigen::Index d);

/// (I_D + R_D^-1 / lambda)^-1 a_tilde, evaluated as lambda (R_D^-1 + lambda I)^-1 a_tilde
/// so that lambda = 0 gives zero. Throws NumericalError when the system's
/// condition number exceeds 1e12.
CVector rcb_steering_gradient(const CMatrix& reduced_inv, double lambda, const CVector& a_tilde);

/// Solves (tau a a^H + lambda alpha alpha^H) s = rhs for rhs in span{a, alpha}
/// by an eigen-based pseudo-inverse inside that span, with a 1e-8 Tikhonov
/// term and a 1e-10 relative eigenvalue cutoff.
CVector rank_two_solve(double tau, const CVector& a, double lambda, const CVector& alpha,
                       const CVector& rhs);

/// Modified Gram-Schmidt; throws NumericalError if a column's residual
/// falls below 1e-12 of its original norm.
CMatrix gram_schmidt(const CMatrix& s_matrix);

void rcb_mjio_sg_step(RcbMjioState& state, const CVector& x);
void rcb_mjio_rls_step(RcbMjioState& state, const CVector& x);

/// RLS steering/weight update with an externally supplied projection
/// (the Krylov pairing); the columns of S_D are not adapted.
void rcb_fixed_projection_rls_step(RcbMjioState& state, const CMatrix& s_matrix, const CVector& x);

}  // namespace rrbeam
