#include "rdi/distortion.hpp"

#include <cmath>
#include <limits>

namespace rdi {

DistortionSpec DistortionSpec::hamming(int alphabet_size) {
    if (alphabet_size < 1) throw UsageError("hamming distortion needs alphabet size >= 1");
    std::vector<std::vector<double>> m(static_cast<std::size_t>(alphabet_size),
                                       std::vector<double>(static_cast<std::size_t>(alphabet_size), 1.0));
    for (int i = 0; i < alphabet_size; ++i) m[i][i] = 0.0;
    return DistortionSpec(Kind::hamming, std::move(m));
}

DistortionSpec DistortionSpec::general(std::vector<std::vector<double>> matrix) {
    if (matrix.empty() || matrix[0].empty()) throw UsageError("distortion matrix must be non-empty");
    const std::size_t cols = matrix[0].size();
    for (const auto& row : matrix) {
        if (row.size() != cols) throw UsageError("distortion matrix must be rectangular");
        for (double v : row)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw UsageError("distortion entries must be finite and >= 0");
    }
    return DistortionSpec(Kind::matrix, std::move(matrix));
}

DistortionSpec DistortionSpec::log_loss() { return DistortionSpec(Kind::log_loss, {}); }

double DistortionSpec::pointwise_min(const std::vector<double>& p_x) const {
    if (is_log_loss()) return 0.0;
    double total = 0.0;
    for (std::size_t x = 0; x < p_x.size(); ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (double v : matrix_[x]) best = std::min(best, v);
        total += p_x[x] * best;
    }
    return total;
}

std::pair<int, double> DistortionSpec::best_reconstruction(
    const std::vector<double>& weights) const {
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int xhat = 0; xhat < xhat_size(); ++xhat) {
        double v = 0.0;
        for (std::size_t x = 0; x < weights.size(); ++x) v += weights[x] * matrix_[x][xhat];
        if (v < best_val - 0.0) {
            best_val = v;
            best = xhat;
        }
    }
    return {best, best_val};
}

}  // namespace rdi
