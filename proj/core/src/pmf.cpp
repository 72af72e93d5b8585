#include "rdi/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

namespace rdi {

namespace {

constexpr double kSumTol = 1e-12;

std::size_t checked_cell_count(const std::vector<Axis>& axes) {
    std::size_t cells = 1;
    for (const auto& ax : axes) {
        const auto sz = static_cast<std::size_t>(ax.alphabet.size());
        if (cells > JointPMF::kMaxCells / sz)
            throw CapacityError("product alphabet exceeds 1e8 cells");
        cells *= sz;
    }
    return cells;
}

void check_axis_names(const std::vector<Axis>& axes) {
    std::unordered_set<std::string> seen;
    for (const auto& ax : axes) {
        if (ax.name.empty()) throw UsageError("axis name must be non-empty");
        if (!seen.insert(ax.name).second)
            throw UsageError("duplicate axis name: " + ax.name);
    }
}

nlohmann::json axes_to_json(const std::vector<Axis>& axes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& ax : axes) {
        arr.push_back({{"name", ax.name},
                       {"size", ax.alphabet.size()},
                       {"labels", ax.alphabet.labels()}});
    }
    return arr;
}

std::vector<Axis> axes_from_json(const nlohmann::json& arr) {
    std::vector<Axis> axes;
    for (const auto& a : arr) {
        axes.push_back(Axis{a.at("name").get<std::string>(),
                            Alphabet(a.at("size").get<int>(),
                                     a.at("labels").get<std::vector<std::string>>())});
    }
    return axes;
}

}  // namespace

JointPMF::JointPMF(std::vector<Axis> axes, std::vector<double> probs)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
    if (axes_.empty()) throw UsageError("JointPMF needs at least one axis");
    check_axis_names(axes_);
    const std::size_t cells = checked_cell_count(axes_);
    if (probs_.size() != cells)
        throw UsageError("probability array size does not match product alphabet");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw UsageError("probabilities must be finite and >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw UsageError("probabilities must sum to 1 within 1e-12, got " + std::to_string(sum));
    build_strides();
}

void JointPMF::build_strides() {
    strides_.assign(axes_.size(), 1);
    for (std::size_t i = axes_.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(axes_[i].alphabet.size());
}

JointPMF JointPMF::marginal_source(const std::string& name, const Alphabet& alphabet,
                                   std::vector<double> probs) {
    return JointPMF({Axis{name, alphabet}}, std::move(probs));
}

bool JointPMF::has_axis(std::string_view name) const {
    for (const auto& ax : axes_)
        if (ax.name == name) return true;
    return false;
}

int JointPMF::axis_index(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return static_cast<int>(i);
    throw UsageError("unknown variable: " + std::string(name));
}

const Alphabet& JointPMF::alphabet_of(std::string_view name) const {
    return axes_[static_cast<std::size_t>(axis_index(name))].alphabet;
}

JointPMF JointPMF::marginal(const std::vector<std::string>& vars) const {
    if (vars.empty()) throw UsageError("marginal needs at least one variable");
    std::vector<std::size_t> src_axis;
    std::vector<Axis> out_axes;
    std::unordered_set<std::string> seen;
    for (const auto& v : vars) {
        if (!seen.insert(v).second) throw UsageError("duplicate variable in marginal: " + v);
        const auto idx = static_cast<std::size_t>(axis_index(v));
        src_axis.push_back(idx);
        out_axes.push_back(axes_[idx]);
    }
    std::vector<std::size_t> out_strides(out_axes.size(), 1);
    for (std::size_t i = out_axes.size(); i-- > 1;)
        out_strides[i - 1] =
            out_strides[i] * static_cast<std::size_t>(out_axes[i].alphabet.size());
    std::size_t out_cells = out_strides[0] * static_cast<std::size_t>(out_axes[0].alphabet.size());

    std::vector<double> out(out_cells, 0.0);
    for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
        const double p = probs_[cell];
        if (p == 0.0) continue;
        std::size_t dst = 0;
        for (std::size_t i = 0; i < src_axis.size(); ++i)
            dst += static_cast<std::size_t>(symbol_at(cell, src_axis[i])) * out_strides[i];
        out[dst] += p;
    }
    // Re-normalization guard: summation noise only.
    double sum = 0.0;
    for (double p : out) sum += p;
    if (std::abs(sum - 1.0) > kSumTol)
        for (auto& p : out) p /= sum;
    return JointPMF(std::move(out_axes), std::move(out));
}

JointPMF JointPMF::merge_axes(const std::vector<std::string>& vars,
                              const std::string& merged_name) const {
    if (vars.size() < 2) throw UsageError("merge_axes needs at least two variables");
    std::vector<std::size_t> merged_idx;
    std::unordered_set<std::string> merged_set;
    for (const auto& v : vars) {
        merged_idx.push_back(static_cast<std::size_t>(axis_index(v)));
        merged_set.insert(v);
    }
    std::vector<Axis> kept;
    std::vector<std::size_t> kept_idx;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (!merged_set.count(axes_[i].name)) {
            kept.push_back(axes_[i]);
            kept_idx.push_back(i);
        }
    }
    int merged_size = 1;
    for (auto i : merged_idx) merged_size *= axes_[i].alphabet.size();
    std::vector<std::string> merged_labels;
    merged_labels.reserve(static_cast<std::size_t>(merged_size));
    std::vector<int> digits(merged_idx.size(), 0);
    for (int m = 0; m < merged_size; ++m) {
        int rem = m;
        std::string lab;
        for (std::size_t i = merged_idx.size(); i-- > 0;) {
            const int sz = axes_[merged_idx[i]].alphabet.size();
            digits[i] = rem % sz;
            rem /= sz;
        }
        for (std::size_t i = 0; i < merged_idx.size(); ++i) {
            if (i) lab += '|';
            lab += axes_[merged_idx[i]].alphabet.label(digits[i]);
        }
        merged_labels.push_back(lab);
    }
    std::vector<Axis> out_axes = kept;
    out_axes.push_back(Axis{merged_name, Alphabet(merged_size, std::move(merged_labels))});
    check_axis_names(out_axes);

    std::vector<std::size_t> out_strides(out_axes.size(), 1);
    for (std::size_t i = out_axes.size(); i-- > 1;)
        out_strides[i - 1] =
            out_strides[i] * static_cast<std::size_t>(out_axes[i].alphabet.size());
    std::vector<double> out(out_strides[0] * static_cast<std::size_t>(out_axes[0].alphabet.size()),
                            0.0);
    for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
        const double p = probs_[cell];
        std::size_t dst = 0;
        for (std::size_t i = 0; i < kept_idx.size(); ++i)
            dst += static_cast<std::size_t>(symbol_at(cell, kept_idx[i])) * out_strides[i];
        std::size_t m = 0;
        for (auto mi : merged_idx)
            m = m * static_cast<std::size_t>(axes_[mi].alphabet.size()) +
                static_cast<std::size_t>(symbol_at(cell, mi));
        dst += m * out_strides[kept_idx.size()];
        out[dst] += p;
    }
    return JointPMF(std::move(out_axes), std::move(out));
}

std::string JointPMF::to_json() const {
    nlohmann::json j{{"axes", axes_to_json(axes_)}, {"probs", probs_}};
    return j.dump();
}

JointPMF JointPMF::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return JointPMF(axes_from_json(j.at("axes")), j.at("probs").get<std::vector<double>>());
}

ConditionalPMF::ConditionalPMF(std::vector<Axis> given, std::vector<Axis> out,
                               std::vector<double> probs, bool uniform_fill_used)
    : given_(std::move(given)),
      out_(std::move(out)),
      probs_(std::move(probs)),
      uniform_fill_used_(uniform_fill_used) {
    if (out_.empty()) throw UsageError("ConditionalPMF needs at least one output axis");
    std::vector<Axis> all = given_;
    all.insert(all.end(), out_.begin(), out_.end());
    check_axis_names(all);
    given_cells_ = 1;
    for (const auto& ax : given_) given_cells_ *= static_cast<std::size_t>(ax.alphabet.size());
    out_cells_ = 1;
    for (const auto& ax : out_) out_cells_ *= static_cast<std::size_t>(ax.alphabet.size());
    if (given_cells_ > JointPMF::kMaxCells / out_cells_)
        throw CapacityError("conditional pmf exceeds 1e8 cells");
    if (probs_.size() != given_cells_ * out_cells_)
        throw UsageError("conditional probability array has the wrong size");
    for (std::size_t g = 0; g < given_cells_; ++g) {
        double sum = 0.0;
        for (std::size_t o = 0; o < out_cells_; ++o) {
            const double p = probs_[g * out_cells_ + o];
            if (!(p >= 0.0) || !std::isfinite(p))
                throw UsageError("conditional probabilities must be finite and >= 0");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kSumTol)
            throw UsageError("conditioning slice does not sum to 1 (got " + std::to_string(sum) +
                             ")");
    }
}

std::string ConditionalPMF::to_json() const {
    nlohmann::json j{{"given", axes_to_json(given_)},
                     {"out", axes_to_json(out_)},
                     {"probs", probs_},
                     {"uniform_fill_used", uniform_fill_used_}};
    return j.dump();
}

ConditionalPMF ConditionalPMF::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return ConditionalPMF(axes_from_json(j.at("given")), axes_from_json(j.at("out")),
                          j.at("probs").get<std::vector<double>>(),
                          j.value("uniform_fill_used", false));
}

JointPMF extend(const JointPMF& base, const ConditionalPMF& channel) {
    std::vector<std::size_t> given_axis_in_base;
    for (const auto& g : channel.given_axes()) {
        const auto idx = static_cast<std::size_t>(base.axis_index(g.name));
        if (!(base.axes()[idx].alphabet == g.alphabet))
            throw UsageError("channel given-axis alphabet mismatch for " + g.name);
        given_axis_in_base.push_back(idx);
    }
    std::vector<Axis> out_axes = base.axes();
    for (const auto& o : channel.out_axes()) {
        if (base.has_axis(o.name))
            throw UsageError("channel output axis already present: " + o.name);
        out_axes.push_back(o);
    }
    const std::size_t base_cells = base.cell_count();
    const std::size_t ch_out_cells = channel.out_cells();
    if (base_cells > JointPMF::kMaxCells / ch_out_cells)
        throw CapacityError("extended joint exceeds 1e8 cells");

    // Strides of the channel's given cell in terms of base symbols.
    std::vector<std::size_t> given_strides(given_axis_in_base.size(), 1);
    for (std::size_t i = given_axis_in_base.size(); i-- > 1;)
        given_strides[i - 1] =
            given_strides[i] *
            static_cast<std::size_t>(channel.given_axes()[i].alphabet.size());

    std::vector<double> out(base_cells * ch_out_cells);
    for (std::size_t cell = 0; cell < base_cells; ++cell) {
        const double pb = base.prob(cell);
        std::size_t g = 0;
        for (std::size_t i = 0; i < given_axis_in_base.size(); ++i)
            g += static_cast<std::size_t>(base.symbol_at(cell, given_axis_in_base[i])) *
                 given_strides[i];
        for (std::size_t o = 0; o < ch_out_cells; ++o)
            out[cell * ch_out_cells + o] = pb * channel.prob(g, o);
    }
    return JointPMF(std::move(out_axes), std::move(out));
}

ConditionalPMF conditional(const JointPMF& joint, const std::vector<std::string>& out,
                           const std::vector<std::string>& given) {
    std::vector<std::string> order = given;
    order.insert(order.end(), out.begin(), out.end());
    JointPMF m = joint.marginal(order);  // given axes slowest
    std::size_t out_cells = 1;
    for (const auto& v : out)
        out_cells *= static_cast<std::size_t>(m.alphabet_of(v).size());
    const std::size_t given_cells = m.cell_count() / out_cells;

    std::vector<double> probs(m.cell_count());
    bool uniform_fill = false;
    for (std::size_t g = 0; g < given_cells; ++g) {
        double mass = 0.0;
        for (std::size_t o = 0; o < out_cells; ++o) mass += m.prob(g * out_cells + o);
        if (mass <= 0.0) {
            uniform_fill = true;
            for (std::size_t o = 0; o < out_cells; ++o)
                probs[g * out_cells + o] = 1.0 / static_cast<double>(out_cells);
        } else {
            for (std::size_t o = 0; o < out_cells; ++o)
                probs[g * out_cells + o] = m.prob(g * out_cells + o) / mass;
        }
    }
    std::vector<Axis> given_axes, out_axes;
    for (const auto& v : given) given_axes.push_back(Axis{v, joint.alphabet_of(v)});
    for (const auto& v : out) out_axes.push_back(Axis{v, joint.alphabet_of(v)});
    return ConditionalPMF(std::move(given_axes), std::move(out_axes), std::move(probs),
                          uniform_fill);
}

ConditionalPMF deterministic_channel(const std::vector<Axis>& given, const Axis& out,
                                     const std::function<int(const std::vector<int>&)>& fn) {
    std::size_t given_cells = 1;
    for (const auto& ax : given) given_cells *= static_cast<std::size_t>(ax.alphabet.size());
    const auto out_size = static_cast<std::size_t>(out.alphabet.size());
    std::vector<double> probs(given_cells * out_size, 0.0);
    std::vector<int> symbols(given.size());
    for (std::size_t g = 0; g < given_cells; ++g) {
        std::size_t rem = g;
        for (std::size_t i = given.size(); i-- > 0;) {
            const auto sz = static_cast<std::size_t>(given[i].alphabet.size());
            symbols[i] = static_cast<int>(rem % sz);
            rem /= sz;
        }
        const int o = fn(symbols);
        if (o < 0 || o >= out.alphabet.size())
            throw UsageError("deterministic_channel map out of range");
        probs[g * out_size + static_cast<std::size_t>(o)] = 1.0;
    }
    return ConditionalPMF(given, {out}, std::move(probs));
}

}  // namespace rdi
