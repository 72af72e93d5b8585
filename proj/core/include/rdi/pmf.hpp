#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rdi/alphabet.hpp"
#include "rdi/errors.hpp"

namespace rdi {

struct Axis {
    std::string name;
    Alphabet alphabet;
};

// Dense joint pmf over a product alphabet. Immutable after construction;
// row-major with the first axis slowest.
class JointPMF {
public:
    static constexpr std::size_t kMaxCells = 100'000'000;

    JointPMF(std::vector<Axis> axes, std::vector<double> probs);

    // Single-variable source.
    static JointPMF marginal_source(const std::string& name, const Alphabet& alphabet,
                                    std::vector<double> probs);

    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t axis_count() const { return axes_.size(); }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t cell_count() const { return probs_.size(); }

    bool has_axis(std::string_view name) const;
    int axis_index(std::string_view name) const;  // UsageError if unknown
    const Alphabet& alphabet_of(std::string_view name) const;

    std::size_t stride(std::size_t axis) const { return strides_[axis]; }
    int symbol_at(std::size_t cell, std::size_t axis) const {
        return static_cast<int>((cell / strides_[axis]) % static_cast<std::size_t>(axes_[axis].alphabet.size()));
    }
    double prob(std::size_t cell) const { return probs_[cell]; }

    // Marginal over the named variables, axes ordered as requested.
    JointPMF marginal(const std::vector<std::string>& vars) const;

    // Replace the named variables by one product variable appended as the
    // last axis; labels are the component labels joined with '|'.
    JointPMF merge_axes(const std::vector<std::string>& vars, const std::string& merged_name) const;

    std::string to_json() const;
    static JointPMF from_json(const std::string& text);

private:
    std::vector<Axis> axes_;
    std::vector<double> probs_;
    std::vector<std::size_t> strides_;

    void build_strides();
};

// Conditional pmf p(out | given), dense over given axes (slowest) then out
// axes. Every conditioning slice sums to one.
class ConditionalPMF {
public:
    ConditionalPMF(std::vector<Axis> given, std::vector<Axis> out, std::vector<double> probs,
                   bool uniform_fill_used = false);

    const std::vector<Axis>& given_axes() const { return given_; }
    const std::vector<Axis>& out_axes() const { return out_; }
    const std::vector<double>& probs() const { return probs_; }

    std::size_t given_cells() const { return given_cells_; }
    std::size_t out_cells() const { return out_cells_; }
    double prob(std::size_t given_cell, std::size_t out_cell) const {
        return probs_[given_cell * out_cells_ + out_cell];
    }

    // True when this object was produced by conditioning a joint that had
    // zero-probability slices (those slices were filled uniformly).
    bool uniform_fill_used() const { return uniform_fill_used_; }

    std::string to_json() const;
    static ConditionalPMF from_json(const std::string& text);

private:
    std::vector<Axis> given_;
    std::vector<Axis> out_;
    std::vector<double> probs_;
    std::size_t given_cells_;
    std::size_t out_cells_;
    bool uniform_fill_used_;
};

// p(base) * p(channel out | channel given), with channel given-axes a subset
// of the base axes. Output axes are appended after the base axes.
JointPMF extend(const JointPMF& base, const ConditionalPMF& channel);

// Conditional of a joint; zero-probability conditioning slices become
// uniform and are flagged on the result.
ConditionalPMF conditional(const JointPMF& joint, const std::vector<std::string>& out,
                           const std::vector<std::string>& given);

// Deterministic channel out = fn(given symbols).
ConditionalPMF deterministic_channel(const std::vector<Axis>& given, const Axis& out,
                                     const std::function<int(const std::vector<int>&)>& fn);

}  // namespace rdi
