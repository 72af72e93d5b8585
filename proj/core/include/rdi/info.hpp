#pragma once

#include <string>
#include <vector>

#include "rdi/pmf.hpp"

namespace rdi {

// H(over | given) in bits, base-2 logs, 0*log 0 := 0.
double entropy(const JointPMF& pmf, const std::vector<std::string>& over,
               const std::vector<std::string>& given = {});

// I(a ; b | given) in bits, computed as H(a|given) - H(a|b,given).
double mutual_information(const JointPMF& pmf, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given = {});

// -p log2 p - (1-p) log2 (1-p); requires 0 <= p <= 1.
double binary_entropy(double p);

struct MarkovCheck {
    bool holds;
    double max_violation;  // max per-slice total variation over all splits
};

// Chain elements may be variable groups. The chain e0 - e1 - ... - e_{m-1}
// holds iff p(e_{j+1} | e_0..e_j) = p(e_{j+1} | e_j) for every j, each
// checked in total variation per conditioning slice.
MarkovCheck check_markov(const JointPMF& pmf,
                         const std::vector<std::vector<std::string>>& chain, double tol);
MarkovCheck check_markov(const JointPMF& pmf, const std::vector<std::string>& chain, double tol);

}  // namespace rdi
