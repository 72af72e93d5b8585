#pragma once

#include <vector>

#include "rdi/errors.hpp"

namespace rdi {

// Per-symbol distortion. For hamming/matrix kinds the reconstruction is a
// symbol; for log-loss it is a pmf over the source alphabet and the loss is
// log2(1/assigned probability of the truth).
class DistortionSpec {
public:
    enum class Kind { hamming, matrix, log_loss };

    static DistortionSpec hamming(int alphabet_size);
    static DistortionSpec general(std::vector<std::vector<double>> matrix);
    static DistortionSpec log_loss();

    Kind kind() const { return kind_; }
    bool is_log_loss() const { return kind_ == Kind::log_loss; }
    int source_size() const { return static_cast<int>(matrix_.size()); }
    int xhat_size() const { return matrix_.empty() ? 0 : static_cast<int>(matrix_[0].size()); }
    double d(int x, int xhat) const { return matrix_[x][xhat]; }

    // Pointwise floor: E_x min_xhat d(x, xhat). Zero for log-loss.
    double pointwise_min(const std::vector<double>& p_x) const;

    // Best fixed reconstruction for the weighted column problem; ties break
    // toward the lowest index. Returns (index, expected distortion).
    std::pair<int, double> best_reconstruction(const std::vector<double>& weights) const;

private:
    DistortionSpec(Kind kind, std::vector<std::vector<double>> matrix)
        : kind_(kind), matrix_(std::move(matrix)) {}
    Kind kind_;
    std::vector<std::vector<double>> matrix_;
};

}  // namespace rdi
