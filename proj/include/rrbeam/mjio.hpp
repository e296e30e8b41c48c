#pragma once

#include <vector>

#include "rrbeam/array_model.hpp"
#include "rrbeam/types.hpp"

namespace rrbeam {

/// Assumed steering vector plus D-1 perturbed candidates around it.
struct SteeringBank {
    CVector assumed;
    std::vector<CVector> candidates;        // candidates[0] == assumed
    std::vector<double> candidate_doas;     // degrees
    double perturbation_degrees = 0.0;

    int rank() const { return static_cast<int>(candidates.size()); }
};

/// Candidate k >= 1 sits at assumed + ceil(k/2) * delta, with the sign
/// alternating +, -, +, ... Throws InvalidArgument if a DoA leaves (0, 180).
SteeringBank build_steering_bank(double assumed_doa_degrees, const ArrayGeometry& geometry, int d,
                                 double delta_degrees);

/// S^H a; entry d is s_d^H a.
CVector reduced_steering(const CMatrix& s_matrix, const CVector& a);

/// I - v v^H / (v^H v). Throws InvalidArgument for a zero vector.
CMatrix constraint_projector(const CVector& v);

/// Applies constraint_projector(v) to u without forming the matrix.
CVector project_out(const CVector& u, const CVector& v);

/// Rank-reduction matrix, reduced beamformer and the statistics both
/// MJIO adaptations keep.
struct MjioState {
    CMatrix s_matrix;             // M x D
    CVector weights;              // D
    CovarianceTracker tracker;    // full-dimension R^-1
    CovarianceTracker reduced;    // D-dimension R_D^-1 over x_tilde = S^H x
    PowerTracker power;
    double mu_w = 0.0;
    double mu_s = 0.0;
    std::uint64_t skipped_columns = 0;  // RLS column updates skipped for |w_d| < 1e-12

    const CMatrix& reduced_inv() const { return reduced.r_inv(); }
    /// Full-dimension beamformer S_D w, recomputed on every call.
    CVector full_weights() const { return s_matrix * weights; }
};

/// S_D = [I_D; 0], w = a_D / ||a_D||^2, both inverses at delta * I.
MjioState make_mjio_state(const SteeringBank& bank, double forgetting, double delta, double mu_w,
                          double mu_s);

/// Instantaneous Wirtinger gradients of |w^H S^H x|^2.
struct MjioGradient {
    CVector weights;   // d/dw*   = S^H x z*
    CMatrix s_matrix;  // d/ds_d* = x z* w_d*  (column d)
};
MjioGradient mvdr_mjio_gradient(const CMatrix& s_matrix, const CVector& weights, const CVector& x);

/// Constrained SG update of w and every column of S_D. Step sizes are
/// normalized by the tracked input power.
void mjio_sg_step(MjioState& state, const SteeringBank& bank, const CVector& x);

/// RLS update: reduced inverse, full inverse, columns s_d, then the reduced MVDR weights.
void mjio_rls_step(MjioState& state, const SteeringBank& bank, const CVector& x);

/// Reduced-dimension MVDR solution R_D^-1 a / (a^H R_D^-1 a).
CVector reduced_mvdr_weights(const CMatrix& reduced_inv, const CVector& a_reduced);

/// Smallest singular value of S_D.
double smallest_singular_value(const CMatrix& m);

}  // namespace rrbeam
