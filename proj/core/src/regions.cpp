#include "rdi/regions.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rdi/channels.hpp"
#include "rdi/info.hpp"

namespace rdi {

namespace {

double clamp_info(double v) {
    if (v < 0.0) {
        if (v < -1e-9) throw UsageError("information quantity unexpectedly negative");
        return 0.0;
    }
    return v;
}

RDIPoint make_point(std::optional<double> r_h, double r, double d, double delta) {
    return RDIPoint{r_h, clamp_info(r), d, clamp_info(delta)};
}

void check_cardinality(const JointPMF& source, const AuxChannelSet& aux) {
    const int cap = source.alphabet_of("X").size() * source.alphabet_of("Y").size() + 2;
    for (const auto& ax : aux.uv.out_axes()) {
        if (ax.name != "U" && ax.name != "V")
            throw UsageError("aux channel outputs must be named U and V");
        if (ax.alphabet.size() > cap)
            throw UsageError("auxiliary cardinality exceeds |X||Y|+2 for " + ax.name);
    }
    if (aux.uv.out_axes().size() != 2) throw UsageError("aux channel must output exactly (U, V)");
}

// Expected distortion of the decoder reconstruction. Log-loss uses the
// posterior reconstruction, whose expected loss is H(X | inputs); otherwise
// the supplied table, or the pointwise-optimal lookup when absent.
double decoder_distortion(const JointPMF& joint, const std::vector<std::string>& inputs,
                          const DistortionSpec& dist,
                          const std::optional<Reconstruction>& recon) {
    if (dist.is_log_loss()) return entropy(joint, {"X"}, inputs);

    std::vector<std::string> order;
    const std::vector<std::string>* idx_order = &inputs;
    if (recon) {
        std::unordered_set<std::string> want(inputs.begin(), inputs.end());
        std::unordered_set<std::string> got(recon->inputs.begin(), recon->inputs.end());
        for (const auto& name : want)
            if (!got.count(name))
                throw UsageError("reconstruction inputs do not match the decoder inputs");
        // Extra table inputs are fine only when they carry no information.
        for (const auto& name : recon->inputs)
            if (!want.count(name) && joint.alphabet_of(name).size() != 1)
                throw UsageError("reconstruction uses an input the decoder does not have: " +
                                 name);
        idx_order = &recon->inputs;
    }
    order = *idx_order;
    order.push_back("X");
    JointPMF m = joint.marginal(order);
    const auto n_x = static_cast<std::size_t>(m.alphabet_of("X").size());
    const std::size_t slices = m.cell_count() / n_x;
    if (recon && recon->table.size() != slices)
        throw UsageError("reconstruction table size does not match the decoder inputs");

    double total = 0.0;
    std::vector<double> w(n_x);
    for (std::size_t s = 0; s < slices; ++s) {
        for (std::size_t x = 0; x < n_x; ++x) w[x] = m.prob(s * n_x + x);
        int xhat;
        if (recon) {
            xhat = recon->table[s];
            if (xhat < 0 || xhat >= dist.xhat_size())
                throw UsageError("reconstruction symbol out of range");
        } else {
            xhat = dist.best_reconstruction(w).first;
        }
        for (std::size_t x = 0; x < n_x; ++x) total += w[x] * dist.d(static_cast<int>(x), xhat);
    }
    return total;
}

void require_axes(const JointPMF& source, std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (!source.has_axis(n)) throw UsageError(std::string("source is missing axis ") + n);
}

}  // namespace

RDIPoint outer_bound_open(const JointPMF& source_xyz, const AuxChannelSet& aux,
                          const DistortionSpec& dist) {
    require_axes(source_xyz, {"X", "Y", "Z"});
    check_cardinality(source_xyz, aux);
    JointPMF joint = extend(source_xyz, aux.uv);

    const double r = mutual_information(joint, {"X"}, {"U", "V"}, {"Y"});
    const double floor_branch = mutual_information(joint, {"X"}, {"Z"});
    const double second = mutual_information(joint, {"X"}, {"Z", "V", "U"}) +
                          mutual_information(joint, {"V"}, {"Z"}, {"U"}) -
                          mutual_information(joint, {"V"}, {"Y"}, {"U"}) -
                          entropy(joint, {"Y"}, {"U", "V", "X", "Z"});
    const double d = decoder_distortion(joint, {"Y", "U", "V"}, dist, aux.reconstruction);
    return make_point({}, r, d, std::max(floor_branch, second));
}

InnerBoundPoint inner_bound_open(const JointPMF& source_xyz, const AuxChannelSet& aux,
                                 const DistortionSpec& dist) {
    require_axes(source_xyz, {"X", "Y", "Z"});
    check_cardinality(source_xyz, aux);
    JointPMF joint = extend(source_xyz, aux.uv);

    const double r = mutual_information(joint, {"X"}, {"U", "V"}, {"Y"});
    const double i_vx = mutual_information(joint, {"V"}, {"X"}, {"U", "Y"});
    const double key = std::min(i_vx, entropy(joint, {"Y"}, {"U", "V", "X", "Z"}));
    const double delta = mutual_information(joint, {"X"}, {"Z", "U"}) + i_vx - key;
    const double d = decoder_distortion(joint, {"Y", "U", "V"}, dist, aux.reconstruction);
    return InnerBoundPoint{make_point({}, r, d, delta), key};
}

InnerBoundPoint inner_bound_closed(const JointPMF& source_xyz, const AuxChannelSet& aux,
                                   const DistortionSpec& dist) {
    require_axes(source_xyz, {"X", "Y", "Z"});
    check_cardinality(source_xyz, aux);
    JointPMF joint = extend(source_xyz, aux.uv);

    const double r = mutual_information(joint, {"X"}, {"U", "V"}, {"Y", "Z"});
    const double i_vx = mutual_information(joint, {"V"}, {"X"}, {"U", "Y", "Z"});
    const double key = std::min(i_vx, entropy(joint, {"Y"}, {"U", "V", "X", "Z"}));
    const double delta = mutual_information(joint, {"X"}, {"Z", "U"}) + i_vx - key;
    const double d = decoder_distortion(joint, {"Y", "Z", "U", "V"}, dist, aux.reconstruction);
    return InnerBoundPoint{make_point({}, r, d, delta), key};
}

RDIPoint outer_bound_closed(const JointPMF& source_xyz, const AuxChannelSet& aux,
                            const DistortionSpec& dist) {
    require_axes(source_xyz, {"X", "Y", "Z"});
    check_cardinality(source_xyz, aux);
    for (const auto& ax : aux.uv.out_axes())
        if (ax.name == "U" && ax.alphabet.size() != 1)
            throw UsageError("switch-closed outer bound uses V only; U must be a singleton");
    JointPMF joint = extend(source_xyz, aux.uv);

    const double r = mutual_information(joint, {"X"}, {"V"}, {"Y", "Z"});
    const double floor_branch = mutual_information(joint, {"X"}, {"Z"});
    const double second = floor_branch + r - entropy(joint, {"Y"}, {"X", "Z"});
    const double d = decoder_distortion(joint, {"Y", "Z", "V"}, dist, aux.reconstruction);
    return make_point({}, r, d, std::max(floor_branch, second));
}

RDIPoint region_open_markov(const JointPMF& source_xyz, const DistortionSpec& dist, double D,
                            const RDSolverConfig& cfg) {
    require_axes(source_xyz, {"X", "Y", "Z"});
    MarkovCheck mc = check_markov(source_xyz, std::vector<std::string>{"X", "Y", "Z"}, 1e-9);
    if (!mc.holds)
        throw PreconditionError("X-Y-Z Markov chain violated, max TV " +
                                std::to_string(mc.max_violation));
    const double r = rd_si_enc(source_xyz, "X", {"Y"}, dist, D, cfg);
    const double i_xz = mutual_information(source_xyz, {"X"}, {"Z"});
    const double second = i_xz + r - entropy(source_xyz, {"Y"}, {"X", "Z"});
    return make_point({}, r, D, std::max(i_xz, second));
}

RDIPoint region_closed(const JointPMF& source_xyz, const DistortionSpec& dist, double D,
                       const RDSolverConfig& cfg) {
    require_axes(source_xyz, {"X", "Y", "Z"});
    const double r = rd_si_enc(source_xyz, "X", {"Y", "Z"}, dist, D, cfg);
    const double i_xz = mutual_information(source_xyz, {"X"}, {"Z"});
    const double second = i_xz + r - entropy(source_xyz, {"Y"}, {"X", "Z"});
    return make_point({}, r, D, std::max(i_xz, second));
}

namespace {

void require_params(const CorollaryParams& p, bool pe, bool zb, bool yb, bool pey, bool pez,
                    bool pw) {
    auto check = [](const std::optional<double>& v, bool needed, const char* name) {
        if (needed && !v) throw UsageError(std::string("missing corollary parameter ") + name);
        if (!needed && v) throw UsageError(std::string("unexpected corollary parameter ") + name);
    };
    check(p.p_e, pe, "p_e");
    check(p.z_bias, zb, "z_bias");
    check(p.y_bias, yb, "y_bias");
    check(p.p_ey, pey, "p_ey");
    check(p.p_ez, pez, "p_ez");
    check(p.p_w, pw, "p_w");
}

JointPMF bern_half(const std::string& name = "X") {
    return JointPMF::marginal_source(name, Alphabet(2), {0.5, 0.5});
}

// X uniform binary, M = erased X, N binary from M: pass-through on 0/1 and a
// biased coin on the erasure.
JointPMF erased_then_binary(double p_e, double bias0, const std::string& mid,
                            const std::string& leaf) {
    JointPMF xm = make_erasure_source(bern_half(), p_e, mid);
    const Alphabet& m_alpha = xm.alphabet_of(mid);
    std::vector<double> probs(static_cast<std::size_t>(m_alpha.size()) * 2);
    for (int m = 0; m < m_alpha.size(); ++m) {
        if (m == 2) {  // erasure symbol
            probs[static_cast<std::size_t>(m) * 2 + 0] = bias0;
            probs[static_cast<std::size_t>(m) * 2 + 1] = 1.0 - bias0;
        } else {
            probs[static_cast<std::size_t>(m) * 2 + 0] = m == 0 ? 1.0 : 0.0;
            probs[static_cast<std::size_t>(m) * 2 + 1] = m == 1 ? 1.0 : 0.0;
        }
    }
    ConditionalPMF ch({Axis{mid, m_alpha}}, {Axis{leaf, Alphabet(2)}}, std::move(probs));
    return extend(xm, ch);
}

// Binary uniform Hamming rate-distortion term p_e (1 - H2(D/p_e)), clipped.
double erased_hamming_rate(double p_e, double D) {
    if (p_e <= 0.0) return 0.0;
    const double ratio = D / p_e;
    if (ratio >= 0.5) return 0.0;
    return p_e * (1.0 - binary_entropy(ratio));
}

}  // namespace

RDIPoint corollary_region(CorollaryCase c, const CorollaryParams& params, double D,
                          std::optional<double> r_h) {
    if (D < 0.0) throw UsageError("distortion must be >= 0");
    const bool helper_case =
        c == CorollaryCase::helper_erased_hamming || c == CorollaryCase::helper_logloss;
    if (helper_case && !r_h) throw UsageError("helper corollary cases require r_h");
    if (!helper_case && r_h) throw UsageError("r_h only applies to helper corollary cases");

    switch (c) {
        case CorollaryCase::erased_y_hamming: {
            require_params(params, true, true, false, false, false, false);
            JointPMF j = erased_then_binary(*params.p_e, *params.z_bias, "Y", "Z");
            const double r = erased_hamming_rate(*params.p_e, D);
            const double i_xz = mutual_information(j, {"X"}, {"Z"});
            const double second = i_xz + r - entropy(j, {"Y"}, {"X", "Z"});
            return make_point({}, r, D, std::max(i_xz, second));
        }
        case CorollaryCase::logloss_open: {
            require_params(params, true, true, false, false, false, false);
            JointPMF j = erased_then_binary(*params.p_e, *params.z_bias, "Y", "Z");
            const double h = *params.p_e;  // H(X|Y) for the uniform binary source
            const double r = std::max(0.0, h - D);
            const double i_xz = mutual_information(j, {"X"}, {"Z"});
            const double second = i_xz + h - D - entropy(j, {"Y"}, {"X", "Z"});
            return make_point({}, r, D, std::max(i_xz, second));
        }
        case CorollaryCase::erased_z_hamming: {
            require_params(params, true, false, true, false, false, false);
            JointPMF j = erased_then_binary(*params.p_e, *params.y_bias, "Z", "Y");
            const double r = erased_hamming_rate(*params.p_e, D);
            const double i_xz = mutual_information(j, {"X"}, {"Z"});
            const double second = i_xz + r - entropy(j, {"Y"}, {"Z"});
            return make_point({}, r, D, std::max(i_xz, second));
        }
        case CorollaryCase::double_erasure_hamming:
        case CorollaryCase::logloss_closed: {
            require_params(params, false, false, false, true, true, false);
            JointPMF xy = make_erasure_source(bern_half(), *params.p_ey, "Y");
            JointPMF j = extend(xy, make_erasure_channel(Alphabet(2), *params.p_ez, "X", "Z"));
            const double pp = *params.p_ey * *params.p_ez;
            const double i_xz = mutual_information(j, {"X"}, {"Z"});
            if (c == CorollaryCase::double_erasure_hamming) {
                const double r = erased_hamming_rate(pp, D);
                const double second = i_xz + r - entropy(j, {"Y"}, {"X"});
                return make_point({}, r, D, std::max(i_xz, second));
            }
            const double r = std::max(0.0, pp - D);  // H(X|Y,Z) = p_ey p_ez
            const double second = i_xz + pp - D - entropy(j, {"Y"}, {"X", "Z"});
            return make_point({}, r, D, std::max(i_xz, second));
        }
        case CorollaryCase::helper_erased_hamming: {
            require_params(params, true, false, false, false, false, true);
            const double i_xw = (1.0 - *params.p_e) * (1.0 - *params.p_w);
            const double r = erased_hamming_rate(*params.p_e, D);
            return make_point(*r_h, r, D, std::max(i_xw, i_xw + r - *r_h));
        }
        case CorollaryCase::helper_logloss: {
            require_params(params, true, false, false, false, false, true);
            const double i_xw = (1.0 - *params.p_e) * (1.0 - *params.p_w);
            const double h_x_given_z = *params.p_e;
            const double r = std::max(0.0, h_x_given_z - D);
            const double second = i_xw + h_x_given_z - D - *r_h;
            return make_point(*r_h, r, D, std::max(i_xw, second));
        }
    }
    throw UsageError("unknown corollary case");
}

HelperInnerBound helper_inner_bound(const JointPMF& source_xyzw, const AuxChannelSet& aux,
                                    double r_h, const DistortionSpec& dist,
                                    std::optional<KeyRates> keys) {
    require_axes(source_xyzw, {"X", "Y", "Z", "W"});
    if (!aux.uh_given_y) throw UsageError("helper inner bound needs the U_h channel");
    if (r_h < 0.0) throw UsageError("helper rate must be >= 0");
    const int uh_cap = source_xyzw.alphabet_of("Y").size() + 2;
    if (aux.uh_given_y->out_axes()[0].alphabet.size() > uh_cap)
        throw UsageError("U_h cardinality exceeds |Y|+2");

    JointPMF with_uh = extend(source_xyzw, *aux.uh_given_y);
    JointPMF joint = extend(with_uh, aux.uv);

    for (const auto& chain : std::initializer_list<std::vector<std::vector<std::string>>>{
             {{"Uh"}, {"Y"}, {"X", "Z", "W"}},
             {{"V", "U"}, {"X", "Uh"}, {"Y", "Z", "W"}},
             {{"V", "U", "Uh"}, {"X", "Y"}, {"W", "Z"}}}) {
        MarkovCheck mc = check_markov(joint, chain, 1e-9);
        if (!mc.holds)
            throw PreconditionError("helper factorization violated, max TV " +
                                    std::to_string(mc.max_violation));
    }

    const double req = std::max(mutual_information(joint, {"Uh"}, {"Y"}, {"Z"}),
                                mutual_information(joint, {"Uh"}, {"Y"}, {"X"}));
    const double cap_codeword = mutual_information(joint, {"Uh"}, {"Y"}) -
                                mutual_information(joint, {"Uh"}, {"X", "W", "U", "V"});
    const double cap_random = std::max(0.0, r_h - req);
    const double cap_sum = mutual_information(joint, {"X"}, {"V"}, {"Z", "Uh", "U"});

    KeyRates used;
    if (keys) {
        used = *keys;
        if (used.r_k < 0.0 || used.r_k_prime < 0.0) throw UsageError("key rates must be >= 0");
    } else {
        // Maximal feasible allocation, preferring the pure-randomness key.
        used.r_k_prime = std::min(cap_random, cap_sum);
        used.r_k = std::max(0.0, std::min(cap_codeword, cap_sum - used.r_k_prime));
    }

    const double r = mutual_information(joint, {"X"}, {"V", "U"}, {"Z", "Uh"});
    const double delta = mutual_information(joint, {"X"}, {"W", "U"}) + cap_sum +
                         mutual_information(joint, {"V", "U"}, {"Uh"}, {"X", "Y"}) +
                         mutual_information(joint, {"U"}, {"Uh"}, {"X", "Y"}) -
                         used.r_k - used.r_k_prime;
    const double d = decoder_distortion(joint, {"Uh", "U", "V", "Z"}, dist, aux.reconstruction);

    HelperInnerBound out;
    out.point = make_point(req, r, d, std::max(0.0, delta));
    out.r_h_required = req;
    out.keys = used;
    out.key_from_codeword = {used.r_k <= cap_codeword + 1e-12, cap_codeword - used.r_k};
    out.key_from_randomness = {used.r_k_prime <= cap_random + 1e-12, cap_random - used.r_k_prime};
    out.key_sum = {used.r_k + used.r_k_prime <= cap_sum + 1e-12,
                   cap_sum - used.r_k - used.r_k_prime};
    out.codeword_binning_used = used.r_k > 0.0;
    return out;
}

RDIPoint region_helper_logloss(const JointPMF& source_xyzw, double r_h, double D,
                               const RDSolverConfig& cfg) {
    require_axes(source_xyzw, {"X", "Y", "Z", "W"});
    if (r_h < 0.0 || D < 0.0) throw UsageError("r_h and D must be >= 0");
    MarkovCheck mc = check_markov(source_xyzw, std::vector<std::string>{"Y", "X", "Z", "W"}, 1e-9);
    if (!mc.holds)
        throw PreconditionError("Y-X-Z-W Markov chain violated, max TV " +
                                std::to_string(mc.max_violation));
    HelperAuxResult aux = helper_aux_optimize(source_xyzw.marginal({"X", "Y", "Z"}), r_h, cfg);
    const double r = std::max(0.0, aux.objective_bits - D);
    const double i_xw = mutual_information(source_xyzw, {"X"}, {"W"});
    const double second = i_xw + entropy(source_xyzw, {"X"}, {"Z"}) - D - r_h;
    return make_point(r_h, r, D, std::max(i_xw, second));
}

RDIPoint region_helper_degraded(const JointPMF& source_xyzw, const DistortionSpec& dist,
                                double r_h, double D, const RDSolverConfig& cfg) {
    require_axes(source_xyzw, {"X", "Y", "Z", "W"});
    if (r_h < 0.0) throw UsageError("r_h must be >= 0");
    MarkovCheck mc = check_markov(source_xyzw, std::vector<std::string>{"Y", "W", "Z", "X"}, 1e-9);
    if (!mc.holds)
        throw PreconditionError("Y-W-Z-X Markov chain violated, max TV " +
                                std::to_string(mc.max_violation));
    const double r = rd_si_enc(source_xyzw, "X", {"Z"}, dist, D, cfg);
    const double i_xw = mutual_information(source_xyzw, {"X"}, {"W"});
    return make_point(r_h, r, D, std::max(i_xw, i_xw + r - r_h));
}

GaussianRegion gaussian_region(const GaussianChainParams& params, double r_h, double D) {
    if (!(params.var_head > 0.0 && params.var_a > 0.0 && params.var_b > 0.0 &&
          params.var_c > 0.0))
        throw UsageError("all variances must be > 0");
    if (!(D > 0.0)) throw UsageError("D must be > 0");
    if (r_h < 0.0) throw UsageError("r_h must be >= 0");

    GaussianRegion out;
    if (params.ordering == GaussianChainParams::Ordering::w_z_x_y) {
        const double vb = params.var_b, vc = params.var_c;
        const double cond_var = vb * (1.0 - vb / (vb + vc) * (1.0 - std::exp2(-2.0 * r_h)));
        const double r_raw = 0.5 * std::log2(cond_var / D);
        const double floor_branch =
            0.5 * std::log2((params.var_head + params.var_a + vb) / (params.var_a + vb));
        const double second = floor_branch + 0.5 * std::log2(vb / (std::exp2(2.0 * r_h) * D));
        out.rate_saturated = r_raw < 0.0;
        out.delta_at_floor = second <= floor_branch;
        out.point = RDIPoint{r_h, std::max(0.0, r_raw), D, std::max(floor_branch, second)};
        return out;
    }
    const double vx = params.var_head, va = params.var_a, vb = params.var_b;
    const double r_raw = 0.5 * std::log2(vx * va / ((vx + va) * D));
    const double floor_branch = 0.5 * std::log2((vx + va + vb) / (va + vb));
    const double second = floor_branch + r_raw - r_h;
    out.rate_saturated = r_raw < 0.0;
    out.delta_at_floor = second <= floor_branch;
    out.point = RDIPoint{r_h, std::max(0.0, r_raw), D, std::max(floor_branch, second)};
    return out;
}

}  // namespace rdi
