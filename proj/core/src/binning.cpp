#include "rdi/binning.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rdi/info.hpp"
#include "rdi/rng.hpp"

namespace rdi {

namespace {

constexpr std::uint64_t kEnumCap = 10'000'000;

std::uint64_t pow_checked(std::uint64_t base, int exp, const char* what) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > kEnumCap / base) throw CapacityError(std::string(what) + " exceeds 1e7 sequences");
        v *= base;
    }
    return v;
}

void decode_seq(std::uint64_t idx, int n, int alphabet, std::vector<int>& out) {
    out.resize(static_cast<std::size_t>(n));
    for (int i = n; i-- > 0;) {
        out[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::uint64_t>(alphabet));
        idx /= static_cast<std::uint64_t>(alphabet);
    }
}

}  // namespace

PadIndex one_time_pad(PadIndex m, PadIndex k) {
    if (m.modulus != k.modulus) throw UsageError("one_time_pad moduli must match");
    if (m.modulus == 0 || m.value < 1 || m.value > m.modulus || k.value < 1 ||
        k.value > k.modulus)
        throw UsageError("pad index out of range");
    const std::uint64_t r = (m.value + k.value) % m.modulus;
    return PadIndex{r == 0 ? m.modulus : r, m.modulus};
}

PadIndex one_time_pad_inverse(PadIndex c, PadIndex k) {
    if (c.modulus != k.modulus) throw UsageError("one_time_pad moduli must match");
    if (c.modulus == 0 || c.value < 1 || c.value > c.modulus || k.value < 1 ||
        k.value > k.modulus)
        throw UsageError("pad index out of range");
    const std::uint64_t r = (c.value + c.modulus - k.value % c.modulus) % c.modulus;
    return PadIndex{r == 0 ? c.modulus : r, c.modulus};
}

bool jointly_typical(const JointPMF& ref, const std::vector<const std::vector<int>*>& seqs,
                     double eps) {
    if (seqs.size() != ref.axis_count())
        throw UsageError("jointly_typical needs one sequence per reference axis");
    const std::size_t n = seqs[0]->size();
    for (const auto* s : seqs)
        if (s->size() != n) throw UsageError("sequences must have equal length");

    std::vector<int> counts(ref.cell_count(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cell = 0;
        for (std::size_t a = 0; a < seqs.size(); ++a)
            cell += static_cast<std::size_t>((*seqs[a])[i]) * ref.stride(a);
        ++counts[cell];
    }
    const double dn = static_cast<double>(n);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        const double p = ref.prob(c);
        if (p == 0.0) {
            if (counts[c] != 0) return false;
        } else if (std::abs(counts[c] / dn - p) > eps * p) {
            return false;
        }
    }
    return true;
}

BinningEntropyReport exact_binning_entropy(const BinningExperiment& exp) {
    if (exp.n < 1 || exp.n > 12) throw UsageError("blocklength must be in 1..12");
    if (exp.r_k < 0.0) throw UsageError("key rate must be >= 0");
    if (exp.source.axis_count() != 2)
        throw UsageError("binning source must have exactly two axes (binned, observer)");

    const int k_y = exp.source.axes()[0].alphabet.size();
    const int k_w = exp.source.axes()[1].alphabet.size();
    const std::uint64_t n_yseq = pow_checked(static_cast<std::uint64_t>(k_y), exp.n, "binned enumeration");
    const std::uint64_t n_wseq = pow_checked(static_cast<std::uint64_t>(k_w), exp.n, "observer enumeration");
    if (n_yseq > kEnumCap / n_wseq) throw CapacityError("pair enumeration exceeds 1e7 sequences");

    const auto bins = static_cast<std::uint64_t>(
        std::max<long long>(1, std::llround(std::exp2(exp.r_k * exp.n))));
    auto rng = make_stream(exp.seed, 0);
    std::vector<std::uint32_t> bin_of(n_yseq);
    for (auto& b : bin_of) b = static_cast<std::uint32_t>(uniform_below(rng, bins));

    // p(y^n, w^n) = prod p(y_i, w_i); accumulate H(Y^n, W^n) and p(w^n, k).
    std::vector<double> p_wk(n_wseq * bins, 0.0);
    KahanSum h_joint;
    std::vector<int> yseq, wseq;
    for (std::uint64_t yi = 0; yi < n_yseq; ++yi) {
        decode_seq(yi, exp.n, k_y, yseq);
        const std::uint32_t bin = bin_of[yi];
        for (std::uint64_t wi = 0; wi < n_wseq; ++wi) {
            decode_seq(wi, exp.n, k_w, wseq);
            double p = 1.0;
            for (int i = 0; i < exp.n; ++i)
                p *= exp.source.prob(static_cast<std::size_t>(yseq[static_cast<std::size_t>(i)]) *
                                         exp.source.stride(0) +
                                     static_cast<std::size_t>(wseq[static_cast<std::size_t>(i)]));
            if (p <= 0.0) continue;
            h_joint.add(-p * std::log2(p));
            p_wk[wi * bins + bin] += p;
        }
    }
    KahanSum h_wk;
    for (double p : p_wk)
        if (p > 0.0) h_wk.add(-p * std::log2(p));

    const double entropy_bits = h_joint.value() - h_wk.value();
    const std::string y_name = exp.source.axes()[0].name;
    const std::string w_name = exp.source.axes()[1].name;
    const double h_y_w = entropy(exp.source, {y_name}, {w_name});
    const double bound = exp.n * (h_y_w - exp.r_k);

    BinningEntropyReport rep;
    rep.entropy_bits = entropy_bits;
    rep.bound_bits = bound;
    rep.applicable_bound_bits = std::max(0.0, bound);
    rep.slack_per_symbol = (entropy_bits - rep.applicable_bound_bits) / exp.n;
    rep.h_y_given_w = h_y_w;
    rep.nominal_rate = exp.r_k;
    rep.effective_rate = std::log2(static_cast<double>(bins)) / exp.n;
    rep.bin_count = bins;
    return rep;
}

std::string BinningEntropyReport::to_json() const {
    nlohmann::json j{{"entropy_bits", entropy_bits},
                     {"bound_bits", bound_bits},
                     {"applicable_bound_bits", applicable_bound_bits},
                     {"slack_per_symbol", slack_per_symbol},
                     {"h_y_given_w", h_y_given_w},
                     {"nominal_rate", nominal_rate},
                     {"effective_rate", effective_rate},
                     {"bin_count", bin_count}};
    return j.dump();
}

CodewordBinningReport codeword_binning_entropy(const CodewordBinningConfig& cfg) {
    if (cfg.n < 1 || cfg.n > 12) throw UsageError("blocklength must be in 1..12");
    if (cfg.r_k < 0.0 || cfg.r_codebook <= 0.0)
        throw UsageError("rates must be positive (codebook) and >= 0 (key)");
    if (cfg.joint.axis_count() != 2)
        throw UsageError("codeword binning joint must have exactly two axes (U, observer)");

    const std::string u_name = cfg.joint.axes()[0].name;
    const std::string w_name = cfg.joint.axes()[1].name;
    const double i_uw = mutual_information(cfg.joint, {u_name}, {w_name});
    if (cfg.r_codebook <= i_uw)
        throw PreconditionError("codebook rate must exceed I(U;W~) for the covering step");

    const int k_w = cfg.joint.axes()[1].alphabet.size();
    const std::uint64_t n_wseq = pow_checked(static_cast<std::uint64_t>(k_w), cfg.n, "observer enumeration");
    const auto codebook_size = static_cast<std::uint64_t>(
        std::ceil(std::exp2(cfg.r_codebook * cfg.n)));
    if (codebook_size > kEnumCap) throw CapacityError("codebook exceeds 1e7 sequences");
    const auto bins = static_cast<std::uint64_t>(
        std::max<long long>(1, std::llround(std::exp2(cfg.r_k * cfg.n))));

    JointPMF p_u = cfg.joint.marginal({u_name});
    std::vector<double> u_weights(p_u.probs().begin(), p_u.probs().end());

    auto cb_rng = make_stream(cfg.seed, 0);
    std::vector<std::vector<int>> codebook(codebook_size);
    for (auto& cw : codebook) {
        cw.resize(static_cast<std::size_t>(cfg.n));
        for (auto& sym : cw) sym = sample_index(cb_rng, u_weights);
    }
    auto bin_rng = make_stream(cfg.seed, 1);
    std::vector<std::uint32_t> bin_of(codebook_size);
    for (auto& b : bin_of) b = static_cast<std::uint32_t>(uniform_below(bin_rng, bins));

    JointPMF p_w = cfg.joint.marginal({w_name});
    KahanSum h_l_w, h_k_w;
    double fallback_mass = 0.0;
    std::vector<int> wseq;
    std::vector<std::uint64_t> typical;
    std::vector<double> bin_mass(bins);
    for (std::uint64_t wi = 0; wi < n_wseq; ++wi) {
        decode_seq(wi, cfg.n, k_w, wseq);
        double pw = 1.0;
        for (int i = 0; i < cfg.n; ++i) pw *= p_w.prob(static_cast<std::size_t>(wseq[static_cast<std::size_t>(i)]));
        if (pw <= 0.0) continue;

        typical.clear();
        for (std::uint64_t l = 0; l < codebook_size; ++l)
            if (jointly_typical(cfg.joint, {&codebook[l], &wseq}, cfg.epsilon)) typical.push_back(l);
        const bool fallback = typical.empty();
        if (fallback) fallback_mass += pw;

        const std::uint64_t support = fallback ? codebook_size : typical.size();
        h_l_w.add(pw * std::log2(static_cast<double>(support)));

        std::fill(bin_mass.begin(), bin_mass.end(), 0.0);
        if (fallback) {
            for (std::uint64_t l = 0; l < codebook_size; ++l)
                bin_mass[bin_of[l]] += 1.0 / static_cast<double>(codebook_size);
        } else {
            for (auto l : typical) bin_mass[bin_of[l]] += 1.0 / static_cast<double>(typical.size());
        }
        double hk = 0.0;
        for (double q : bin_mass)
            if (q > 0.0) hk -= q * std::log2(q);
        h_k_w.add(pw * hk);
    }

    CodewordBinningReport rep;
    rep.entropy_bits = h_l_w.value() - h_k_w.value();
    rep.bound_bits = cfg.n * (cfg.r_codebook - cfg.r_k - i_uw);
    rep.slack_per_symbol = (rep.entropy_bits - rep.bound_bits) / cfg.n;
    rep.i_u_w = i_uw;
    rep.codebook_size = codebook_size;
    rep.bin_count = bins;
    rep.fallback_mass = fallback_mass;
    return rep;
}

std::string CodewordBinningReport::to_json() const {
    nlohmann::json j{{"entropy_bits", entropy_bits},
                     {"bound_bits", bound_bits},
                     {"slack_per_symbol", slack_per_symbol},
                     {"i_u_w", i_u_w},
                     {"codebook_size", codebook_size},
                     {"bin_count", bin_count},
                     {"fallback_mass", fallback_mass}};
    return j.dump();
}

}  // namespace rdi
