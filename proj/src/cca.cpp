#include "ssvep/cca.hpp"

#include <cmath>

#include "ssvep/common.hpp"

namespace ssvep {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEigFloorScale = 1e-10;

Eigen::MatrixXd center_rows(const Eigen::MatrixXd& m) {
    return m.colwise() - m.rowwise().mean();
}

// Symmetric inverse square root with eigenvalue flooring; keeps the solve
// well-posed on near-rank-deficient segments.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const double floor = kEigFloorScale * cov.trace();
    Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(floor);
    return eig.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd ac = a.array() - a.mean();
    const Eigen::VectorXd bc = b.array() - b.mean();
    const double denom = std::sqrt(ac.squaredNorm() * bc.squaredNorm());
    if (denom == 0.0) return 0.0;
    return ac.dot(bc) / denom;
}

}  // namespace

ReferenceBank build_reference_bank(const StimulusTable& stimulus, int n_harmonics, int samples,
                                   double sample_rate_hz) {
    stimulus.validate();
    if (n_harmonics < 1) throw InvalidInput("n_harmonics must be >= 1");
    if (samples < 2) throw InvalidInput("reference length must be >= 2");
    for (const auto& e : stimulus.entries) {
        if (n_harmonics * e.frequency_hz >= sample_rate_hz / 2.0) {
            throw InvalidInput("reference harmonic " + std::to_string(n_harmonics) + " of " +
                               std::to_string(e.frequency_hz) + " Hz aliases at fs " +
                               std::to_string(sample_rate_hz));
        }
    }

    ReferenceBank bank;
    bank.n_harmonics = n_harmonics;
    bank.sample_rate_hz = sample_rate_hz;
    for (const auto& e : stimulus.entries) {
        Eigen::MatrixXd y(2 * n_harmonics, samples);
        for (int h = 1; h <= n_harmonics; ++h) {
            for (int n = 0; n < samples; ++n) {
                const double arg = 2.0 * kPi * h * e.frequency_hz * n / sample_rate_hz;
                y(2 * (h - 1), n) = std::sin(arg);
                y(2 * (h - 1) + 1, n) = std::cos(arg);
            }
        }
        bank.references.push_back(std::move(y));
    }
    return bank;
}

CcaResult cca_max_corr(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    const auto t = x.cols();
    if (y.cols() != t) throw InvalidInput("cca: X and Y must share the sample axis");
    if (t <= x.rows() || t <= y.rows()) {
        throw InvalidInput("cca: need more samples than variables");
    }

    const Eigen::MatrixXd xc = center_rows(x);
    const Eigen::MatrixXd yc = center_rows(y);

    const Eigen::MatrixXd cxx = xc * xc.transpose();
    const Eigen::MatrixXd cyy = yc * yc.transpose();
    if (cxx.trace() <= 0.0 || cyy.trace() <= 0.0) {
        throw InvalidInput("cca: input has no variance (all-constant rows)");
    }
    const Eigen::MatrixXd cxy = xc * yc.transpose();

    const Eigen::MatrixXd wx_white = inverse_sqrt(cxx);
    const Eigen::MatrixXd wy_white = inverse_sqrt(cyy);

    const Eigen::MatrixXd m = wx_white * cxy * wy_white;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

    CcaResult result;
    result.w_x = wx_white * svd.matrixU().col(0);
    result.w_y = wy_white * svd.matrixV().col(0);
    // Report the correlation the returned weights actually achieve.
    const double rho = std::abs(pearson(xc.transpose() * result.w_x, yc.transpose() * result.w_y));
    result.rho = std::min(rho, 1.0);
    return result;
}

CcaDecision cca_classify(const Eigen::MatrixXd& x, const ReferenceBank& bank) {
    if (bank.references.empty()) throw InvalidInput("empty reference bank");
    if (x.cols() != bank.samples()) {
        throw InvalidInput("segment length " + std::to_string(x.cols()) +
                           " does not match reference length " + std::to_string(bank.samples()));
    }
    CcaDecision decision;
    double best = -1.0;
    for (int k = 0; k < bank.num_classes(); ++k) {
        const double rho = cca_max_corr(x, bank.references[k]).rho;
        decision.rho.push_back(rho);
        if (rho > best) {
            best = rho;
            decision.class_id = k;
        }
    }
    return decision;
}

Eigen::MatrixXd trial_matrix(const Trial& trial) {
    Eigen::MatrixXd m(trial.channels, trial.samples);
    for (int c = 0; c < trial.channels; ++c) {
        for (int t = 0; t < trial.samples; ++t) m(c, t) = trial.at(c, t);
    }
    return m;
}

}  // namespace ssvep
