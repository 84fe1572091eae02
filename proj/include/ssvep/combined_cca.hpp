#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssvep/cca.hpp"
#include "ssvep/types.hpp"

namespace ssvep {

// Class-wise prototype responses: the mean training segment per class,
// pooled across trials and subjects of the training fold.
struct PrototypeBank {
    std::vector<Eigen::MatrixXd> prototypes;  // one C x T matrix per class
    std::vector<int> counts;                  // segments averaged per class

    int num_classes() const { return static_cast<int>(prototypes.size()); }
};

enum class FusionMode {
    SignedSquare,  // p = sum_i sign(r_i) * r_i^2
    Mean,          // p = mean_i r_i
};

// Averages the selected trials per class. Every class in the stimulus table
// must be represented.
PrototypeBank build_prototypes(const Dataset& ds, const std::vector<std::size_t>& indices);
PrototypeBank build_prototypes(const Dataset& ds);

struct CombinedCcaDecision {
    int class_id = 0;
    std::vector<double> p;            // fused score per class
    std::vector<int> excluded;        // classes skipped for degenerate prototypes
};

// Fuses four correlations per class: the canonical correlation against the
// sinusoidal reference, plus Pearson correlations between X and the class
// prototype under three transferred CCA projections.
CombinedCcaDecision combined_cca_classify(const Eigen::MatrixXd& x, const PrototypeBank& prototypes,
                                          const ReferenceBank& bank,
                                          FusionMode fusion = FusionMode::SignedSquare);

}  // namespace ssvep
