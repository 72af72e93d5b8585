#include "rdi/channels.hpp"

#include <algorithm>

namespace rdi {

ConditionalPMF make_bsc(double crossover, const std::string& in, const std::string& out) {
    if (!(crossover >= 0.0 && crossover <= 1.0))
        throw UsageError("BSC crossover must be in [0,1]");
    Alphabet binary(2);
    std::vector<double> p = {1.0 - crossover, crossover, crossover, 1.0 - crossover};
    return ConditionalPMF({Axis{in, binary}}, {Axis{out, binary}}, std::move(p));
}

namespace {

ConditionalPMF erasure_like_channel(const Alphabet& in_alphabet, double p_pass,
                                    const std::string& in, const std::string& out,
                                    const std::string& erase_label) {
    const int k = in_alphabet.size();
    std::vector<std::string> labels = in_alphabet.labels();
    // Cascaded erasures: pick the first unused variant of the label.
    std::string symbol = erase_label;
    while (std::find(labels.begin(), labels.end(), symbol) != labels.end()) symbol += '\'';
    labels.push_back(symbol);
    Alphabet out_alpha(k + 1, std::move(labels));
    std::vector<double> p(static_cast<std::size_t>(k) * (k + 1), 0.0);
    for (int x = 0; x < k; ++x) {
        p[static_cast<std::size_t>(x) * (k + 1) + x] = p_pass;
        p[static_cast<std::size_t>(x) * (k + 1) + k] = 1.0 - p_pass;
    }
    return ConditionalPMF({Axis{in, in_alphabet}}, {Axis{out, out_alpha}}, std::move(p));
}

}  // namespace

ConditionalPMF make_erasure_channel(const Alphabet& in_alphabet, double p_e,
                                    const std::string& in, const std::string& out) {
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw UsageError("erasure probability must be in [0,1]");
    return erasure_like_channel(in_alphabet, 1.0 - p_e, in, out, "e");
}

JointPMF make_erasure_source(const JointPMF& source, double p_e, const std::string& out) {
    if (source.axis_count() != 1)
        throw UsageError("make_erasure_source expects a single-variable source");
    const Axis& ax = source.axes()[0];
    return extend(source, make_erasure_channel(ax.alphabet, p_e, ax.name, out));
}

ConditionalPMF make_timeshare_channel(const Alphabet& in_alphabet, double keep,
                                      const std::string& in, const std::string& out) {
    if (!(keep >= 0.0 && keep <= 1.0)) throw UsageError("keep probability must be in [0,1]");
    return erasure_like_channel(in_alphabet, keep, in, out, "_");
}

ConditionalPMF make_constant_channel(const std::vector<Axis>& given, const std::string& out) {
    std::size_t given_cells = 1;
    for (const auto& ax : given) given_cells *= static_cast<std::size_t>(ax.alphabet.size());
    std::vector<double> p(given_cells, 1.0);
    return ConditionalPMF(given, {Axis{out, Alphabet(1)}}, std::move(p));
}

ConditionalPMF make_identity_channel(const Alphabet& alphabet, const std::string& in,
                                     const std::string& out) {
    const auto k = static_cast<std::size_t>(alphabet.size());
    std::vector<double> p(k * k, 0.0);
    for (std::size_t x = 0; x < k; ++x) p[x * k + x] = 1.0;
    return ConditionalPMF({Axis{in, alphabet}}, {Axis{out, alphabet}}, std::move(p));
}

ConditionalPMF lift_channel(const ConditionalPMF& channel, const std::vector<Axis>& extra_given) {
    std::vector<Axis> given = channel.given_axes();
    given.insert(given.end(), extra_given.begin(), extra_given.end());
    std::size_t extra_cells = 1;
    for (const auto& ax : extra_given) extra_cells *= static_cast<std::size_t>(ax.alphabet.size());
    const std::size_t out_cells = channel.out_cells();
    std::vector<double> p(channel.given_cells() * extra_cells * out_cells);
    for (std::size_t g = 0; g < channel.given_cells(); ++g)
        for (std::size_t e = 0; e < extra_cells; ++e)
            for (std::size_t o = 0; o < out_cells; ++o)
                p[(g * extra_cells + e) * out_cells + o] = channel.prob(g, o);
    return ConditionalPMF(std::move(given), channel.out_axes(), std::move(p));
}

ConditionalPMF product_channel(const ConditionalPMF& a, const ConditionalPMF& b) {
    if (a.given_axes().size() != b.given_axes().size())
        throw UsageError("product_channel requires identical given axes");
    for (std::size_t i = 0; i < a.given_axes().size(); ++i)
        if (a.given_axes()[i].name != b.given_axes()[i].name ||
            !(a.given_axes()[i].alphabet == b.given_axes()[i].alphabet))
            throw UsageError("product_channel requires identical given axes");
    std::vector<Axis> out = a.out_axes();
    out.insert(out.end(), b.out_axes().begin(), b.out_axes().end());
    std::vector<double> p(a.given_cells() * a.out_cells() * b.out_cells());
    for (std::size_t g = 0; g < a.given_cells(); ++g)
        for (std::size_t oa = 0; oa < a.out_cells(); ++oa)
            for (std::size_t ob = 0; ob < b.out_cells(); ++ob)
                p[(g * a.out_cells() + oa) * b.out_cells() + ob] = a.prob(g, oa) * b.prob(g, ob);
    return ConditionalPMF(a.given_axes(), std::move(out), std::move(p));
}

}  // namespace rdi
