#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "rdi/binning.hpp"
#include "rdi/info.hpp"
#include "rdi/rng.hpp"

namespace rdi {

namespace {

constexpr std::uint64_t kEnumCap = 10'000'000;
constexpr std::uint64_t kCodebookCap = 1 << 16;
constexpr std::uint64_t kTrialStreamBase = 1ULL << 32;

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t v = 1;
    while (exp-- > 0) v *= base;
    return v;
}

void decode_seq(std::uint64_t idx, int n, int alphabet, std::vector<int>& out) {
    out.resize(static_cast<std::size_t>(n));
    for (int i = n; i-- > 0;) {
        out[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::uint64_t>(alphabet));
        idx /= static_cast<std::uint64_t>(alphabet);
    }
}

double map_entropy(std::unordered_map<std::uint64_t, double>& m) {
    std::vector<std::pair<std::uint64_t, double>> items(m.begin(), m.end());
    std::sort(items.begin(), items.end());
    KahanSum h;
    for (const auto& [k, p] : items)
        if (p > 0.0) h.add(-p * std::log2(p));
    return h.value();
}

// Split m1 in [1:M1] into a secret part [1:MK] and an open part.
struct SplitIndex {
    std::uint64_t secret;  // 1-based
    std::uint64_t open;    // 1-based
};
SplitIndex split_m1(std::uint64_t m1, std::uint64_t mk) {
    return SplitIndex{(m1 - 1) % mk + 1, (m1 - 1) / mk + 1};
}
std::uint64_t unsplit_m1(SplitIndex s, std::uint64_t mk) { return (s.open - 1) * mk + s.secret; }

// Per-symbol reconstruction rule over decoder inputs (U, V, Y).
struct ReconRule {
    bool log_loss = false;
    std::vector<int> table;            // [((u * n_v) + v) * n_y + y] -> xhat
    std::vector<double> neglog_prob;   // log-loss: [(((u n_v)+v) n_y + y) n_x + x]
    int n_u = 0, n_v = 0, n_y = 0, n_x = 0;

    double loss(int x, int u, int v, int y, const DistortionSpec& dist) const {
        const std::size_t uvy =
            (static_cast<std::size_t>(u) * n_v + v) * static_cast<std::size_t>(n_y) + y;
        if (log_loss) return neglog_prob[uvy * static_cast<std::size_t>(n_x) + x];
        return dist.d(x, table[uvy]);
    }
};

ReconRule build_recon(const JointPMF& design, const DistortionSpec& dist,
                      const std::optional<Reconstruction>& recon, double perturb) {
    ReconRule rule;
    rule.n_x = design.alphabet_of("X").size();
    rule.n_u = design.alphabet_of("U").size();
    rule.n_v = design.alphabet_of("V").size();
    rule.n_y = design.alphabet_of("Y").size();
    const std::size_t slices =
        static_cast<std::size_t>(rule.n_u) * rule.n_v * static_cast<std::size_t>(rule.n_y);

    JointPMF m = design.marginal({"U", "V", "Y", "X"});
    if (dist.is_log_loss()) {
        rule.log_loss = true;
        rule.neglog_prob.resize(slices * static_cast<std::size_t>(rule.n_x));
        for (std::size_t s = 0; s < slices; ++s) {
            double mass = 0.0;
            for (int x = 0; x < rule.n_x; ++x) mass += m.prob(s * rule.n_x + x);
            int zero_count = 0;
            for (int x = 0; x < rule.n_x; ++x)
                if (mass <= 0.0 || m.prob(s * rule.n_x + x) <= 0.0) ++zero_count;
            const double scale = 1.0 - static_cast<double>(zero_count) * perturb / rule.n_x;
            for (int x = 0; x < rule.n_x; ++x) {
                const double post = mass > 0.0 ? m.prob(s * rule.n_x + x) / mass : 0.0;
                const double phat = post > 0.0 ? scale * post : perturb / rule.n_x;
                rule.neglog_prob[s * rule.n_x + x] = -std::log2(phat);
            }
        }
        return rule;
    }

    rule.table.resize(slices);
    if (recon) {
        // Reindex the user's table into (U, V, Y) order.
        std::vector<std::string> want = {"U", "V", "Y"};
        std::vector<int> perm;
        for (const auto& name : want) {
            auto it = std::find(recon->inputs.begin(), recon->inputs.end(), name);
            if (it == recon->inputs.end())
                throw UsageError("scheme reconstruction must take inputs (U, V, Y)");
            perm.push_back(static_cast<int>(it - recon->inputs.begin()));
        }
        std::vector<int> sizes(3);
        for (std::size_t i = 0; i < 3; ++i)
            sizes[static_cast<std::size_t>(perm[i])] = i == 0 ? rule.n_u : (i == 1 ? rule.n_v : rule.n_y);
        if (recon->table.size() != slices)
            throw UsageError("reconstruction table size does not match (U, V, Y)");
        std::vector<std::size_t> strides(3, 1);
        for (std::size_t i = 3; i-- > 1;)
            strides[i - 1] = strides[i] * static_cast<std::size_t>(sizes[i]);
        std::vector<int> uvy(3);
        for (int u = 0; u < rule.n_u; ++u)
            for (int v = 0; v < rule.n_v; ++v)
                for (int y = 0; y < rule.n_y; ++y) {
                    uvy[static_cast<std::size_t>(perm[0])] = u;
                    uvy[static_cast<std::size_t>(perm[1])] = v;
                    uvy[static_cast<std::size_t>(perm[2])] = y;
                    std::size_t idx = 0;
                    for (std::size_t i = 0; i < 3; ++i)
                        idx += static_cast<std::size_t>(uvy[i]) * strides[i];
                    const int xh = recon->table[idx];
                    if (xh < 0 || xh >= dist.xhat_size())
                        throw UsageError("reconstruction symbol out of range");
                    rule.table[(static_cast<std::size_t>(u) * rule.n_v + v) * rule.n_y + y] = xh;
                }
    } else {
        std::vector<double> w(static_cast<std::size_t>(rule.n_x));
        for (std::size_t s = 0; s < slices; ++s) {
            for (int x = 0; x < rule.n_x; ++x) w[static_cast<std::size_t>(x)] = m.prob(s * rule.n_x + x);
            rule.table[s] = dist.best_reconstruction(w).first;
        }
    }
    return rule;
}

}  // namespace

ListMeasure measure_list(const DecoderInfoJoint& joint, double eps) {
    const std::uint64_t n_xseq = ipow(static_cast<std::uint64_t>(joint.x_size), joint.n);
    if (n_xseq * std::max<std::uint64_t>(1, joint.info_seqs.size()) > kEnumCap)
        throw CapacityError("list enumeration exceeds 1e7 sequences");

    std::uint64_t max_list = 0;
    double coverage = 0.0;
    std::vector<int> xseq;
    for (std::size_t r = 0; r < joint.info_seqs.size(); ++r) {
        std::uint64_t size = 0;
        for (std::uint64_t xi = 0; xi < n_xseq; ++xi) {
            decode_seq(xi, joint.n, joint.x_size, xseq);
            std::vector<const std::vector<int>*> seqs = {&xseq};
            for (const auto& s : joint.info_seqs[r]) seqs.push_back(&s);
            if (jointly_typical(joint.design, seqs, eps)) {
                ++size;
                coverage += joint.p_x_info[xi][r];
            }
        }
        max_list = std::max(max_list, size);
    }
    return ListMeasure{std::log2(static_cast<double>(std::max<std::uint64_t>(1, max_list))) / joint.n,
                       coverage, max_list};
}

BlockEntropyMeasure measure_block_entropy(const DecoderInfoJoint& joint, double eps) {
    KahanSum h_joint, h_info;
    const std::size_t n_real = joint.info_seqs.size();
    for (std::size_t r = 0; r < n_real; ++r) {
        double mass = 0.0;
        for (std::size_t xi = 0; xi < joint.p_x_info.size(); ++xi) {
            const double p = joint.p_x_info[xi][r];
            if (p > 0.0) h_joint.add(-p * std::log2(p));
            mass += p;
        }
        if (mass > 0.0) h_info.add(-mass * std::log2(mass));
    }
    const double rate = (h_joint.value() - h_info.value()) / joint.n;

    ListMeasure lm = measure_list(joint, eps);
    const double failure = std::max(0.0, 1.0 - lm.coverage);
    const double bound =
        lm.exponent + (2.0 + joint.n * failure * std::log2(static_cast<double>(joint.x_size))) /
                          joint.n;
    return BlockEntropyMeasure{rate, bound, failure, rate <= bound + 1e-12};
}

SchemeCodebook build_scheme_codebook(const JointPMF& joint, const SchemeConfig& cfg) {
    if (cfg.n < 1 || cfg.n > 6) throw UsageError("scheme blocklength must be in 1..6");
    SchemeCodebook cb;
    cb.n = cfg.n;

    // Appendix-style rates with slack: covering gets one unit, binning three.
    const double d1 = cfg.slack(), d3 = 3.0 * cfg.slack();
    const double i_u_xy = mutual_information(joint, {"U"}, {"X", "Y"});
    const double i_u_x_y = mutual_information(joint, {"U"}, {"X"}, {"Y"});
    const double i_v_xy_u = mutual_information(joint, {"V"}, {"X", "Y"}, {"U"});
    const double i_v_x_yu = mutual_information(joint, {"V"}, {"X"}, {"Y", "U"});
    const double h_y_uvxz = entropy(joint, {"Y"}, {"U", "V", "X", "Z"});
    cb.key_rate = std::max(0.0, std::min(i_v_x_yu, h_y_uvxz));

    auto size_of = [&](double rate) {
        return static_cast<std::uint64_t>(std::ceil(std::exp2(cfg.n * rate)));
    };
    cb.u_codebook_size = size_of(i_u_xy + d1);
    cb.u_bins = size_of(i_u_x_y + d3);
    cb.v_codebook_size = size_of(i_v_xy_u + d1);
    cb.v_bins = size_of(i_v_x_yu + d3);
    cb.scrambling_skipped = cb.key_rate <= 1e-12;
    cb.key_bins = cb.scrambling_skipped
                      ? 1
                      : static_cast<std::uint64_t>(std::max<long long>(
                            1, std::llround(std::exp2(cfg.n * cb.key_rate))));
    if (cb.key_bins == 1) cb.scrambling_skipped = true;
    cb.open_part_size = (cb.v_bins + cb.key_bins - 1) / cb.key_bins;
    cb.degenerate = cb.u_codebook_size == 1 || cb.v_codebook_size == 1 || cb.u_bins == 1 ||
                    cb.v_bins == 1;
    if (cb.u_codebook_size * cb.v_codebook_size > kCodebookCap)
        throw CapacityError("scheme codebooks exceed capacity");
    const std::uint64_t n_yseq =
        ipow(static_cast<std::uint64_t>(joint.alphabet_of("Y").size()), cfg.n);

    JointPMF p_u = joint.marginal({"U"});
    std::vector<double> u_weights(p_u.probs().begin(), p_u.probs().end());
    ConditionalPMF p_v_u = conditional(joint, {"V"}, {"U"});
    const int n_v = joint.alphabet_of("V").size();

    auto rng_u = make_stream(cfg.seed, 10);
    cb.u_seqs.resize(cb.u_codebook_size);
    for (auto& s : cb.u_seqs) {
        s.resize(static_cast<std::size_t>(cfg.n));
        for (auto& sym : s) sym = sample_index(rng_u, u_weights);
    }
    auto rng_v = make_stream(cfg.seed, 11);
    std::vector<double> v_weights(static_cast<std::size_t>(n_v));
    cb.v_seqs.resize(cb.u_codebook_size);
    for (std::uint64_t l0 = 0; l0 < cb.u_codebook_size; ++l0) {
        cb.v_seqs[l0].resize(cb.v_codebook_size);
        for (auto& s : cb.v_seqs[l0]) {
            s.resize(static_cast<std::size_t>(cfg.n));
            for (int i = 0; i < cfg.n; ++i) {
                const auto u = static_cast<std::size_t>(cb.u_seqs[l0][static_cast<std::size_t>(i)]);
                for (int v = 0; v < n_v; ++v)
                    v_weights[static_cast<std::size_t>(v)] = p_v_u.prob(u, static_cast<std::size_t>(v));
                s[static_cast<std::size_t>(i)] = sample_index(rng_v, v_weights);
            }
        }
    }
    auto rng_b0 = make_stream(cfg.seed, 12);
    cb.u_bin.resize(cb.u_codebook_size);
    for (auto& b : cb.u_bin) b = static_cast<std::uint32_t>(uniform_below(rng_b0, cb.u_bins));
    auto rng_b1 = make_stream(cfg.seed, 13);
    cb.v_bin.resize(cb.u_codebook_size);
    for (auto& per : cb.v_bin) {
        per.resize(cb.v_codebook_size);
        for (auto& b : per) b = static_cast<std::uint32_t>(uniform_below(rng_b1, cb.v_bins));
    }
    auto rng_k = make_stream(cfg.seed, 14);
    cb.key_bin.resize(n_yseq);
    for (auto& b : cb.key_bin) b = static_cast<std::uint32_t>(uniform_below(rng_k, cb.key_bins));
    return cb;
}

SchemeSimResult simulate_scheme_open(const JointPMF& source_xyz, const AuxChannelSet& aux,
                                     const DistortionSpec& dist, const SchemeConfig& cfg) {
    for (const char* name : {"X", "Y", "Z"})
        if (!source_xyz.has_axis(name))
            throw UsageError(std::string("scheme source is missing axis ") + name);
    if (cfg.n < 1 || cfg.n > 6) throw UsageError("scheme blocklength must be in 1..6");
    for (const auto& ax : source_xyz.axes())
        if (ax.alphabet.size() > 3)
            throw UsageError("scheme simulation supports binary or ternary alphabets only");

    JointPMF joint = extend(source_xyz, aux.uv);
    const int n_x = joint.alphabet_of("X").size();
    const int n_y = joint.alphabet_of("Y").size();
    const int n_z = joint.alphabet_of("Z").size();

    const SchemeCodebook cb = build_scheme_codebook(joint, cfg);
    const std::uint64_t size_l0 = cb.u_codebook_size;
    const std::uint64_t size_l1 = cb.v_codebook_size;
    const std::uint64_t size_m0 = cb.u_bins;
    const std::uint64_t size_m1 = cb.v_bins;
    const std::uint64_t size_mk = cb.key_bins;
    const std::uint64_t size_m1o = cb.open_part_size;
    const double key_rate = cb.key_rate;
    const bool scrambling_skipped = cb.scrambling_skipped;

    const std::uint64_t n_xseq = ipow(static_cast<std::uint64_t>(n_x), cfg.n);
    const std::uint64_t n_yseq = ipow(static_cast<std::uint64_t>(n_y), cfg.n);
    const std::uint64_t n_zseq = ipow(static_cast<std::uint64_t>(n_z), cfg.n);
    if (n_xseq * n_yseq > kEnumCap) throw CapacityError("scheme enumeration exceeds 1e7 sequences");

    JointPMF design = joint.marginal({"X", "U", "V", "Y"});
    JointPMF ref_uxy = joint.marginal({"U", "X", "Y"});
    JointPMF ref_vuxy = joint.marginal({"V", "U", "X", "Y"});
    JointPMF ref_uy = joint.marginal({"U", "Y"});
    JointPMF ref_vuy = joint.marginal({"V", "U", "Y"});
    JointPMF p_xy = joint.marginal({"X", "Y"});
    ConditionalPMF p_z_xy = conditional(source_xyz, {"Z"}, {"X", "Y"});
    ReconRule recon = build_recon(design, dist, aux.reconstruction, cfg.logloss_perturb);

    auto typical_u = [&](const std::vector<int>& xs, const std::vector<int>& ys,
                         std::vector<std::uint64_t>& out) {
        out.clear();
        for (std::uint64_t l0 = 0; l0 < size_l0; ++l0)
            if (jointly_typical(ref_uxy, {&cb.u_seqs[l0], &xs, &ys}, cfg.epsilon)) out.push_back(l0);
    };
    auto typical_v = [&](std::uint64_t l0, const std::vector<int>& xs, const std::vector<int>& ys,
                         std::vector<std::uint64_t>& out) {
        out.clear();
        for (std::uint64_t l1 = 0; l1 < size_l1; ++l1)
            if (jointly_typical(ref_vuxy, {&cb.v_seqs[l0][l1], &cb.u_seqs[l0], &xs, &ys},
                                cfg.epsilon))
                out.push_back(l1);
    };
    // Successive decoding: first bin-matching jointly typical index, 0 when none.
    auto decode = [&](std::uint64_t m0, std::uint64_t m1, const std::vector<int>& ys) {
        std::uint64_t l0_hat = 0;
        for (std::uint64_t l0 = 0; l0 < size_l0; ++l0)
            if (cb.u_bin[l0] == m0 && jointly_typical(ref_uy, {&cb.u_seqs[l0], &ys}, cfg.epsilon)) {
                l0_hat = l0;
                break;
            }
        std::uint64_t l1_hat = 0;
        for (std::uint64_t l1 = 0; l1 < size_l1; ++l1)
            if (cb.v_bin[l0_hat][l1] == m1 - 1 &&
                jointly_typical(ref_vuy, {&cb.v_seqs[l0_hat][l1], &cb.u_seqs[l0_hat], &ys},
                                cfg.epsilon)) {
                l1_hat = l1;
                break;
            }
        return std::pair<std::uint64_t, std::uint64_t>(l0_hat, l1_hat);
    };

    // ---------------- exact pass ----------------
    std::unordered_map<std::uint64_t, double> h_mz_on, h_mz_off, h_xmz_on, h_xmz_off;
    std::unordered_map<std::uint64_t, std::size_t> realization_ids;
    std::vector<std::vector<std::vector<int>>> info_seqs;
    std::vector<std::unordered_map<std::size_t, double>> p_x_info_sparse(n_xseq);
    double enc_fail_mass = 0.0, dec_err_mass = 0.0;

    std::vector<int> xs, ys, zs;
    std::vector<std::uint64_t> cand_u, cand_v;
    for (std::uint64_t xi = 0; xi < n_xseq; ++xi) {
        decode_seq(xi, cfg.n, n_x, xs);
        for (std::uint64_t yi = 0; yi < n_yseq; ++yi) {
            decode_seq(yi, cfg.n, n_y, ys);
            double pxy = 1.0;
            for (int i = 0; i < cfg.n; ++i)
                pxy *= p_xy.prob(static_cast<std::size_t>(xs[static_cast<std::size_t>(i)]) * p_xy.stride(0) +
                                 static_cast<std::size_t>(ys[static_cast<std::size_t>(i)]));
            if (pxy <= 0.0) continue;

            const std::uint64_t key = cb.key_bin[yi] + 1;  // 1-based pad index
            typical_u(xs, ys, cand_u);
            const bool u_fallback = cand_u.empty();
            const std::vector<std::uint64_t>* u_set = &cand_u;
            std::vector<std::uint64_t> all_u;
            if (u_fallback) {
                all_u.resize(size_l0);
                for (std::uint64_t l = 0; l < size_l0; ++l) all_u[l] = l;
                u_set = &all_u;
            }
            const double w_u = 1.0 / static_cast<double>(u_set->size());

            std::unordered_map<std::uint64_t, double> msgs_on, msgs_off;
            double success_mass = 0.0;
            for (std::uint64_t l0 : *u_set) {
                typical_v(l0, xs, ys, cand_v);
                const bool v_fallback = cand_v.empty();
                const std::vector<std::uint64_t>* v_set = &cand_v;
                std::vector<std::uint64_t> all_v;
                if (v_fallback) {
                    all_v.resize(size_l1);
                    for (std::uint64_t l = 0; l < size_l1; ++l) all_v[l] = l;
                    v_set = &all_v;
                }
                if (!u_fallback && !v_fallback) success_mass += w_u;
                const double w_uv = w_u / static_cast<double>(v_set->size());
                for (std::uint64_t l1 : *v_set) {
                    const std::uint64_t m0 = cb.u_bin[l0];
                    const std::uint64_t m1 = cb.v_bin[l0][l1] + 1;  // 1-based
                    const SplitIndex sp = split_m1(m1, size_mk);
                    const std::uint64_t scr =
                        one_time_pad({sp.secret, size_mk}, {key, size_mk}).value;
                    const std::uint64_t idx_on = (m0 * size_m1o + (sp.open - 1)) * size_mk + (scr - 1);
                    const std::uint64_t idx_off =
                        (m0 * size_m1o + (sp.open - 1)) * size_mk + (sp.secret - 1);
                    msgs_on[idx_on] += w_uv;
                    msgs_off[idx_off] += w_uv;

                    // Decoder: unscramble with its own key copy, reassemble m1,
                    // then successively decode. Deterministic given (m, y).
                    const std::uint64_t m1s_dec =
                        one_time_pad_inverse({scr, size_mk}, {key, size_mk}).value;
                    const std::uint64_t m1_dec = unsplit_m1({m1s_dec, sp.open}, size_mk);
                    auto [l0_hat, l1_hat] = decode(m0, m1_dec, ys);
                    if (l0_hat != l0 || l1_hat != l1) dec_err_mass += pxy * w_uv;
                    const std::uint64_t rkey = (l0_hat * size_l1 + l1_hat) * n_yseq + yi;
                    auto [it, inserted] = realization_ids.try_emplace(rkey, info_seqs.size());
                    if (inserted)
                        info_seqs.push_back({cb.u_seqs[l0_hat], cb.v_seqs[l0_hat][l1_hat], ys});
                    p_x_info_sparse[xi][it->second] += pxy * w_uv;
                }
            }
            enc_fail_mass += pxy * (1.0 - success_mass);

            for (std::uint64_t zi = 0; zi < n_zseq; ++zi) {
                decode_seq(zi, cfg.n, n_z, zs);
                double pz = 1.0;
                for (int i = 0; i < cfg.n; ++i) {
                    const std::size_t g =
                        static_cast<std::size_t>(xs[static_cast<std::size_t>(i)]) * static_cast<std::size_t>(n_y) +
                        static_cast<std::size_t>(ys[static_cast<std::size_t>(i)]);
                    pz *= p_z_xy.prob(g, static_cast<std::size_t>(zs[static_cast<std::size_t>(i)]));
                }
                if (pz <= 0.0) continue;
                const double w = pxy * pz;
                for (const auto& [m, pm] : msgs_on) {
                    h_mz_on[m * n_zseq + zi] += w * pm;
                    h_xmz_on[(xi * size_m0 * size_m1o * size_mk + m) * n_zseq + zi] += w * pm;
                }
                for (const auto& [m, pm] : msgs_off) {
                    h_mz_off[m * n_zseq + zi] += w * pm;
                    h_xmz_off[(xi * size_m0 * size_m1o * size_mk + m) * n_zseq + zi] += w * pm;
                }
            }
        }
    }

    const double h_x_block = cfg.n * entropy(source_xyz, {"X"});
    const double leak_on = (h_x_block + map_entropy(h_mz_on) - map_entropy(h_xmz_on)) / cfg.n;
    const double leak_off = (h_x_block + map_entropy(h_mz_off) - map_entropy(h_xmz_off)) / cfg.n;

    DecoderInfoJoint dj{cfg.n, n_x, design, {"U", "V", "Y"}, std::move(info_seqs), {}};
    dj.p_x_info.assign(n_xseq, std::vector<double>(dj.info_seqs.size(), 0.0));
    for (std::uint64_t xi = 0; xi < n_xseq; ++xi)
        for (const auto& [r, p] : p_x_info_sparse[xi]) dj.p_x_info[xi][r] = p;

    // ---------------- Monte Carlo distortion ----------------
    std::vector<double> xy_weights(p_xy.probs().begin(), p_xy.probs().end());
    double mean = 0.0, m2 = 0.0;
    std::uint64_t count = 0;
    std::vector<int> trial_x(static_cast<std::size_t>(cfg.n)), trial_y(static_cast<std::size_t>(cfg.n));
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        auto rng = make_stream(cfg.seed, kTrialStreamBase + t);
        std::uint64_t yi = 0;
        for (int i = 0; i < cfg.n; ++i) {
            const int cell = sample_index(rng, xy_weights);
            trial_x[static_cast<std::size_t>(i)] = cell / n_y;
            trial_y[static_cast<std::size_t>(i)] = cell % n_y;
            yi = yi * static_cast<std::uint64_t>(n_y) + static_cast<std::uint64_t>(cell % n_y);
        }
        typical_u(trial_x, trial_y, cand_u);
        const std::uint64_t l0 =
            cand_u.empty() ? uniform_below(rng, size_l0) : cand_u[uniform_below(rng, cand_u.size())];
        typical_v(l0, trial_x, trial_y, cand_v);
        const std::uint64_t l1 =
            cand_v.empty() ? uniform_below(rng, size_l1) : cand_v[uniform_below(rng, cand_v.size())];

        const std::uint64_t m0 = cb.u_bin[l0];
        const std::uint64_t m1 = cb.v_bin[l0][l1] + 1;
        const std::uint64_t key = cb.key_bin[yi] + 1;
        const SplitIndex sp = split_m1(m1, size_mk);
        const std::uint64_t scr = one_time_pad({sp.secret, size_mk}, {key, size_mk}).value;
        const std::uint64_t m1s_dec =
            one_time_pad_inverse({scr, size_mk}, {key, size_mk}).value;
        auto [l0_hat, l1_hat] = decode(m0, unsplit_m1({m1s_dec, sp.open}, size_mk), trial_y);

        double dsum = 0.0;
        for (int i = 0; i < cfg.n; ++i)
            dsum += recon.loss(trial_x[static_cast<std::size_t>(i)],
                               cb.u_seqs[l0_hat][static_cast<std::size_t>(i)],
                               cb.v_seqs[l0_hat][l1_hat][static_cast<std::size_t>(i)],
                               trial_y[static_cast<std::size_t>(i)], dist);
        const double d_trial = dsum / cfg.n;
        ++count;
        const double delta = d_trial - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (d_trial - mean);
    }
    const double std_err =
        count > 1 ? std::sqrt(m2 / (static_cast<double>(count) * (static_cast<double>(count) - 1.0)))
                  : 0.0;

    // Single-letter target under the same reconstruction rule.
    double single_letter = 0.0;
    {
        JointPMF m = design.marginal({"U", "V", "Y", "X"});
        const int du = design.alphabet_of("U").size();
        const int dv = design.alphabet_of("V").size();
        const int dy = design.alphabet_of("Y").size();
        std::size_t cell = 0;
        for (int u = 0; u < du; ++u)
            for (int v = 0; v < dv; ++v)
                for (int y = 0; y < dy; ++y)
                    for (int x = 0; x < n_x; ++x, ++cell)
                        single_letter += m.prob(cell) * recon.loss(x, u, v, y, dist);
    }

    SimReport rep;
    rep.empirical_distortion = mean;
    rep.distortion_std_error = std_err;
    rep.single_letter_distortion = single_letter;
    rep.leakage_rate_scrambled = leak_on;
    rep.leakage_rate_plain = leak_off;
    rep.encoder_failure_rate = enc_fail_mass;
    rep.decoder_error_rate = dec_err_mass;
    rep.key_rate = std::max(0.0, key_rate);
    rep.key_rate_effective = std::log2(static_cast<double>(size_mk)) / cfg.n;
    rep.scrambling_skipped = scrambling_skipped;
    rep.degenerate_codebook = cb.degenerate;
    rep.u_codebook_size = size_l0;
    rep.v_codebook_size = size_l1;
    rep.u_bins = size_m0;
    rep.v_bins = size_m1;
    rep.key_bins = size_mk;

    ListMeasure lm = measure_list(dj, cfg.epsilon);
    BlockEntropyMeasure bm = measure_block_entropy(dj, cfg.epsilon);
    rep.list_size_exponent = lm.exponent;
    rep.list_coverage = lm.coverage;
    rep.block_entropy_rate = bm.rate;

    return SchemeSimResult{rep, std::move(dj)};
}

std::string SimReport::to_json() const {
    nlohmann::json j{{"empirical_distortion", empirical_distortion},
                     {"distortion_std_error", distortion_std_error},
                     {"single_letter_distortion", single_letter_distortion},
                     {"leakage_rate_scrambled", leakage_rate_scrambled},
                     {"leakage_rate_plain", leakage_rate_plain},
                     {"encoder_failure_rate", encoder_failure_rate},
                     {"decoder_error_rate", decoder_error_rate},
                     {"list_size_exponent", list_size_exponent},
                     {"list_coverage", list_coverage},
                     {"block_entropy_rate", block_entropy_rate},
                     {"key_rate", key_rate},
                     {"key_rate_effective", key_rate_effective},
                     {"scrambling_skipped", scrambling_skipped},
                     {"degenerate_codebook", degenerate_codebook},
                     {"u_codebook_size", u_codebook_size},
                     {"v_codebook_size", v_codebook_size},
                     {"u_bins", u_bins},
                     {"v_bins", v_bins},
                     {"key_bins", key_bins}};
    return j.dump();
}

}  // namespace rdi
