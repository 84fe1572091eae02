#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssvep/types.hpp"

namespace ssvep {

// Sinusoidal reference signals per class: rows alternate sin/cos for each
// harmonic in ascending order, sampled at t = n/fs.
struct ReferenceBank {
    std::vector<Eigen::MatrixXd> references;  // one (2*n_harmonics) x T matrix per class
    int n_harmonics = 2;
    double sample_rate_hz = 256.0;

    int num_classes() const { return static_cast<int>(references.size()); }
    int samples() const { return references.empty() ? 0 : static_cast<int>(references[0].cols()); }
};

struct CcaResult {
    double rho = 0.0;       // largest canonical correlation, in [0, 1]
    Eigen::VectorXd w_x;    // projection weights for the first argument
    Eigen::VectorXd w_y;    // projection weights for the second argument
};

ReferenceBank build_reference_bank(const StimulusTable& stimulus, int n_harmonics, int samples,
                                   double sample_rate_hz);

// Largest canonical correlation between row-variable matrices X (C x T) and
// Y (R x T). Rows are mean-centered internally. Solved by whitening both
// covariance blocks (symmetric inverse square root with an eigenvalue floor
// of 1e-10 * trace) and taking the SVD of the whitened cross-covariance.
CcaResult cca_max_corr(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// argmax_k of the canonical correlation against each reference; ties break
// toward the lowest class id.
struct CcaDecision {
    int class_id = 0;
    std::vector<double> rho;  // per class
};
CcaDecision cca_classify(const Eigen::MatrixXd& x, const ReferenceBank& bank);

// Trial data as a C x T double matrix (the 32-bit floats widen here).
Eigen::MatrixXd trial_matrix(const Trial& trial);

}  // namespace ssvep
