#include "ssvep/combined_cca.hpp"

#include <cmath>
#include <limits>

#include "ssvep/common.hpp"

namespace ssvep {

namespace {

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd ac = a.array() - a.mean();
    const Eigen::VectorXd bc = b.array() - b.mean();
    const double denom = std::sqrt(ac.squaredNorm() * bc.squaredNorm());
    if (denom == 0.0) return 0.0;
    return ac.dot(bc) / denom;
}

}  // namespace

PrototypeBank build_prototypes(const Dataset& ds, const std::vector<std::size_t>& indices) {
    const int k = ds.stimulus.num_classes();
    const int c = ds.channels();
    const int t = ds.samples();
    if (indices.empty()) throw InvalidInput("prototype construction needs training trials");

    PrototypeBank bank;
    bank.prototypes.assign(k, Eigen::MatrixXd::Zero(c, t));
    bank.counts.assign(k, 0);
    for (std::size_t idx : indices) {
        const Trial& tr = ds.trials.at(idx);
        Eigen::MatrixXd& proto = bank.prototypes.at(tr.class_id);
        for (int ch = 0; ch < c; ++ch) {
            for (int n = 0; n < t; ++n) proto(ch, n) += tr.at(ch, n);
        }
        ++bank.counts[tr.class_id];
    }
    for (int cls = 0; cls < k; ++cls) {
        if (bank.counts[cls] == 0) {
            throw InvalidInput("training subset has no trials of class " + std::to_string(cls));
        }
        bank.prototypes[cls] /= bank.counts[cls];
    }
    return bank;
}

PrototypeBank build_prototypes(const Dataset& ds) {
    std::vector<std::size_t> all(ds.trials.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return build_prototypes(ds, all);
}

CombinedCcaDecision combined_cca_classify(const Eigen::MatrixXd& x, const PrototypeBank& prototypes,
                                          const ReferenceBank& bank, FusionMode fusion) {
    if (prototypes.num_classes() != bank.num_classes()) {
        throw InvalidInput("prototype and reference class counts differ");
    }
    if (x.cols() != bank.samples()) {
        throw InvalidInput("segment length does not match reference length");
    }

    CombinedCcaDecision decision;
    decision.p.assign(prototypes.num_classes(), std::numeric_limits<double>::quiet_NaN());
    double best = -std::numeric_limits<double>::infinity();
    int best_class = -1;

    for (int k = 0; k < prototypes.num_classes(); ++k) {
        const Eigen::MatrixXd& proto = prototypes.prototypes[k];
        if (proto.cols() != x.cols() || proto.rows() != x.rows()) {
            throw InvalidInput("prototype shape does not match segment shape");
        }
        if (proto.norm() == 0.0) {
            decision.excluded.push_back(k);
            continue;
        }
        const Eigen::MatrixXd& ref = bank.references[k];

        const CcaResult x_vs_ref = cca_max_corr(x, ref);
        const double r1 = x_vs_ref.rho;

        const Eigen::VectorXd w1 = cca_max_corr(x, proto).w_x;
        const double r2 = pearson(x.transpose() * w1, proto.transpose() * w1);

        const Eigen::VectorXd& w2 = x_vs_ref.w_x;
        const double r3 = pearson(x.transpose() * w2, proto.transpose() * w2);

        const Eigen::VectorXd w3 = cca_max_corr(proto, ref).w_x;
        const double r4 = pearson(x.transpose() * w3, proto.transpose() * w3);

        const double rs[4] = {r1, r2, r3, r4};
        double p = 0.0;
        for (double r : rs) {
            p += fusion == FusionMode::SignedSquare ? (r >= 0 ? r * r : -r * r) : r / 4.0;
        }
        decision.p[k] = p;
        if (p > best) {
            best = p;
            best_class = k;
        }
    }
    if (best_class < 0) throw InvalidInput("all prototypes degenerate; no class decidable");
    decision.class_id = best_class;
    return decision;
}

}  // namespace ssvep
