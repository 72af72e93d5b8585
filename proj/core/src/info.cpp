#include "rdi/info.hpp"

#include <cmath>
#include <unordered_set>

#include "rdi/rng.hpp"

namespace rdi {

namespace {

void require_disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const char* what) {
    std::unordered_set<std::string> seen(a.begin(), a.end());
    for (const auto& v : b)
        if (seen.count(v)) throw UsageError(std::string("variable sets must be disjoint: ") + what);
}

// -sum p log2 p over the marginal of the named variables.
double subset_entropy(const JointPMF& pmf, const std::vector<std::string>& vars) {
    if (vars.empty()) return 0.0;
    JointPMF m = pmf.marginal(vars);
    KahanSum h;
    for (double p : m.probs())
        if (p > 0.0) h.add(-p * std::log2(p));
    return h.value();
}

std::vector<std::string> join(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    std::vector<std::string> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

}  // namespace

double entropy(const JointPMF& pmf, const std::vector<std::string>& over,
               const std::vector<std::string>& given) {
    if (over.empty()) throw UsageError("entropy needs at least one variable");
    require_disjoint(over, given, "over/given");
    for (const auto& v : over) pmf.axis_index(v);
    for (const auto& v : given) pmf.axis_index(v);
    if (given.empty()) return subset_entropy(pmf, over);
    return subset_entropy(pmf, join(given, over)) - subset_entropy(pmf, given);
}

double mutual_information(const JointPMF& pmf, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given) {
    require_disjoint(a, b, "a/b");
    require_disjoint(a, given, "a/given");
    require_disjoint(b, given, "b/given");
    return entropy(pmf, a, given) - entropy(pmf, a, join(b, given));
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("binary_entropy needs p in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

MarkovCheck check_markov(const JointPMF& pmf,
                         const std::vector<std::vector<std::string>>& chain, double tol) {
    if (chain.size() < 3) throw UsageError("check_markov needs a chain of length >= 3");
    for (const auto& grp : chain) {
        if (grp.empty()) throw UsageError("check_markov chain element must be non-empty");
        for (const auto& v : grp) pmf.axis_index(v);
    }
    double max_violation = 0.0;
    // Split j: past = chain[0..j-1], present = chain[j], next = chain[j+1].
    for (std::size_t j = 1; j + 1 < chain.size(); ++j) {
        std::vector<std::string> past;
        for (std::size_t i = 0; i < j; ++i) past = join(past, chain[i]);
        const std::vector<std::string>& present = chain[j];
        const std::vector<std::string>& next = chain[j + 1];

        // Marginal ordered (past, present, next): next fastest.
        JointPMF m = pmf.marginal(join(join(past, present), next));
        std::size_t next_cells = 1;
        for (const auto& v : next) next_cells *= static_cast<std::size_t>(m.alphabet_of(v).size());
        std::size_t present_cells = 1;
        for (const auto& v : present)
            present_cells *= static_cast<std::size_t>(m.alphabet_of(v).size());
        const std::size_t past_cells = m.cell_count() / (next_cells * present_cells);

        // p(next | present) from the same marginal.
        std::vector<double> ref(present_cells * next_cells, 0.0);
        std::vector<double> ref_mass(present_cells, 0.0);
        for (std::size_t a = 0; a < past_cells; ++a)
            for (std::size_t b = 0; b < present_cells; ++b)
                for (std::size_t c = 0; c < next_cells; ++c) {
                    const double p = m.prob((a * present_cells + b) * next_cells + c);
                    ref[b * next_cells + c] += p;
                    ref_mass[b] += p;
                }
        for (std::size_t b = 0; b < present_cells; ++b)
            if (ref_mass[b] > 0.0)
                for (std::size_t c = 0; c < next_cells; ++c) ref[b * next_cells + c] /= ref_mass[b];

        for (std::size_t a = 0; a < past_cells; ++a)
            for (std::size_t b = 0; b < present_cells; ++b) {
                double mass = 0.0;
                for (std::size_t c = 0; c < next_cells; ++c)
                    mass += m.prob((a * present_cells + b) * next_cells + c);
                if (mass <= 0.0 || ref_mass[b] <= 0.0) continue;
                double tv = 0.0;
                for (std::size_t c = 0; c < next_cells; ++c) {
                    const double pc = m.prob((a * present_cells + b) * next_cells + c) / mass;
                    tv += std::abs(pc - ref[b * next_cells + c]);
                }
                max_violation = std::max(max_violation, 0.5 * tv);
            }
    }
    return MarkovCheck{max_violation <= tol, max_violation};
}

MarkovCheck check_markov(const JointPMF& pmf, const std::vector<std::string>& chain, double tol) {
    std::vector<std::vector<std::string>> groups;
    groups.reserve(chain.size());
    for (const auto& v : chain) groups.push_back({v});
    return check_markov(pmf, groups, tol);
}

}  // namespace rdi
