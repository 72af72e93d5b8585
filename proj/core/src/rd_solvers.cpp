#include "rdi/rd_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "rdi/channels.hpp"
#include "rdi/rng.hpp"

namespace rdi {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kRateTol = 1e-7;  // per-iteration rate change, bits
constexpr double kNegLogFloor = -1e30;

// Source viewed as p(si) and p(x|si) with the SI cells flattened.
struct CondSource {
    std::size_t n_si = 1;
    int n_x = 0;
    std::vector<double> p_si;        // [s]
    std::vector<double> p_x_si;      // joint [s * n_x + x]
    std::vector<double> p_x;         // [x]
};

CondSource make_cond_source(const JointPMF& source, const std::string& x_var,
                            const std::vector<std::string>& si_vars) {
    std::vector<std::string> order = si_vars;
    order.push_back(x_var);
    JointPMF m = source.marginal(order);
    CondSource cs;
    cs.n_x = m.alphabet_of(x_var).size();
    cs.n_si = m.cell_count() / static_cast<std::size_t>(cs.n_x);
    cs.p_x_si.assign(m.probs().begin(), m.probs().end());
    cs.p_si.assign(cs.n_si, 0.0);
    cs.p_x.assign(static_cast<std::size_t>(cs.n_x), 0.0);
    for (std::size_t s = 0; s < cs.n_si; ++s)
        for (int x = 0; x < cs.n_x; ++x) {
            const double p = cs.p_x_si[s * cs.n_x + x];
            cs.p_si[s] += p;
            cs.p_x[static_cast<std::size_t>(x)] += p;
        }
    return cs;
}

double pointwise_d_min(const CondSource& cs, const DistortionSpec& dist) {
    double total = 0.0;
    for (std::size_t s = 0; s < cs.n_si; ++s)
        for (int x = 0; x < cs.n_x; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (int xh = 0; xh < dist.xhat_size(); ++xh) best = std::min(best, dist.d(x, xh));
            total += cs.p_x_si[s * cs.n_x + x] * best;
        }
    return total;
}

// Distortion of the best constant reconstruction per SI slice (the zero-rate
// point).
double constant_recon_d(const CondSource& cs, const DistortionSpec& dist) {
    double total = 0.0;
    std::vector<double> w(static_cast<std::size_t>(cs.n_x));
    for (std::size_t s = 0; s < cs.n_si; ++s) {
        if (cs.p_si[s] <= 0.0) continue;
        for (int x = 0; x < cs.n_x; ++x) w[static_cast<std::size_t>(x)] = cs.p_x_si[s * cs.n_x + x];
        total += dist.best_reconstruction(w).second;
    }
    return total;
}

struct BAPoint {
    double rate_bits;
    double distortion;
};

// Weighted Blahut-Arimoto for one multiplier; each SI slice solved
// independently, results averaged by p(si).
BAPoint ba_evaluate(const CondSource& cs, const DistortionSpec& dist, double lambda,
                    int max_iterations) {
    const int n_x = cs.n_x;
    const int n_xh = dist.xhat_size();
    KahanSum rate_nats, dd;
    std::vector<double> q(static_cast<std::size_t>(n_xh));
    std::vector<double> t(static_cast<std::size_t>(n_x) * n_xh);
    std::vector<double> px(static_cast<std::size_t>(n_x));

    for (std::size_t s = 0; s < cs.n_si; ++s) {
        if (cs.p_si[s] <= 0.0) continue;
        for (int x = 0; x < n_x; ++x) px[x] = cs.p_x_si[s * n_x + x] / cs.p_si[s];
        std::fill(q.begin(), q.end(), 1.0 / n_xh);
        double prev_rate = std::numeric_limits<double>::infinity();
        double prev_dist = std::numeric_limits<double>::infinity();
        double slice_rate = 0.0, slice_dist = 0.0;
        for (int it = 0; it < max_iterations; ++it) {
            // t(xhat|x) proportional to q(xhat) exp(-lambda d)
            for (int x = 0; x < n_x; ++x) {
                if (px[x] <= 0.0) continue;
                double dmin = std::numeric_limits<double>::infinity();
                for (int xh = 0; xh < n_xh; ++xh)
                    if (q[xh] > 0.0) dmin = std::min(dmin, dist.d(x, xh));
                double z = 0.0;
                for (int xh = 0; xh < n_xh; ++xh) {
                    const double w =
                        q[xh] > 0.0 ? q[xh] * std::exp(-lambda * (dist.d(x, xh) - dmin)) : 0.0;
                    t[static_cast<std::size_t>(x) * n_xh + xh] = w;
                    z += w;
                }
                for (int xh = 0; xh < n_xh; ++xh) t[static_cast<std::size_t>(x) * n_xh + xh] /= z;
            }
            // induced output marginal
            std::fill(q.begin(), q.end(), 0.0);
            for (int x = 0; x < n_x; ++x)
                for (int xh = 0; xh < n_xh; ++xh)
                    q[xh] += px[x] * t[static_cast<std::size_t>(x) * n_xh + xh];
            double r = 0.0, d_now = 0.0;
            for (int x = 0; x < n_x; ++x) {
                if (px[x] <= 0.0) continue;
                for (int xh = 0; xh < n_xh; ++xh) {
                    const double tv = t[static_cast<std::size_t>(x) * n_xh + xh];
                    if (tv > 0.0) {
                        r += px[x] * tv * std::log(tv / q[xh]);
                        d_now += px[x] * tv * dist.d(x, xh);
                    }
                }
            }
            slice_rate = r;
            slice_dist = d_now;
            // Rate alone can stabilize while degenerate slices still drain
            // their free distortion; require both to settle.
            if (std::abs(r - prev_rate) <= kRateTol * kLn2 &&
                std::abs(d_now - prev_dist) <= 1e-10)
                break;
            prev_rate = r;
            prev_dist = d_now;
        }
        rate_nats.add(cs.p_si[s] * slice_rate);
        dd.add(cs.p_si[s] * slice_dist);
    }
    return BAPoint{std::max(0.0, rate_nats.value() / kLn2), dd.value()};
}

// Rate of the deterministic pointwise-optimal reconstruction (the D = D_min
// corner); ties toward the lowest index.
double pointwise_rate(const CondSource& cs, const DistortionSpec& dist) {
    KahanSum rate;
    std::vector<int> amin(static_cast<std::size_t>(cs.n_x));
    for (int x = 0; x < cs.n_x; ++x) {
        int best = 0;
        double bv = std::numeric_limits<double>::infinity();
        for (int xh = 0; xh < dist.xhat_size(); ++xh)
            if (dist.d(x, xh) < bv) {
                bv = dist.d(x, xh);
                best = xh;
            }
        amin[static_cast<std::size_t>(x)] = best;
    }
    std::vector<double> q(static_cast<std::size_t>(dist.xhat_size()));
    for (std::size_t s = 0; s < cs.n_si; ++s) {
        if (cs.p_si[s] <= 0.0) continue;
        std::fill(q.begin(), q.end(), 0.0);
        for (int x = 0; x < cs.n_x; ++x)
            q[static_cast<std::size_t>(amin[static_cast<std::size_t>(x)])] +=
                cs.p_x_si[s * cs.n_x + x] / cs.p_si[s];
        double h = 0.0;
        for (double v : q)
            if (v > 0.0) h -= v * std::log2(v);
        rate.add(cs.p_si[s] * h);
    }
    return rate.value();
}

}  // namespace

void RDSolverConfig::validate() const {
    if (max_iterations < 1) throw UsageError("max_iterations must be >= 1");
    if (!(convergence_tol > 0.0)) throw UsageError("convergence_tol must be > 0");
    if (restarts < 1) throw UsageError("restarts must be >= 1");
}

double rd_logloss(const JointPMF& source, const std::string& x_var,
                  const std::vector<std::string>& si_vars, double D) {
    if (D < 0.0) throw UsageError("distortion must be >= 0");
    return std::max(0.0, entropy(source, {x_var}, si_vars) - D);
}

double rd_si_enc(const JointPMF& source, const std::string& x_var,
                 const std::vector<std::string>& si_vars, const DistortionSpec& dist, double D,
                 const RDSolverConfig& cfg) {
    cfg.validate();
    if (dist.is_log_loss()) return rd_logloss(source, x_var, si_vars, D);

    CondSource cs = make_cond_source(source, x_var, si_vars);
    if (dist.source_size() != cs.n_x)
        throw UsageError("distortion matrix does not match the source alphabet");

    const double d_min = pointwise_d_min(cs, dist);
    if (D < d_min - 1e-9)
        throw InfeasibleError("distortion target below minimum achievable D_min", d_min);
    const double d_max = constant_recon_d(cs, dist);
    if (D >= d_max) return 0.0;
    if (D <= d_min + 1e-12) return pointwise_rate(cs, dist);

    // Bracket the multiplier, then bisect on achieved distortion.
    double lo = 0.0, hi = 1.0;
    BAPoint at_hi = ba_evaluate(cs, dist, hi, cfg.max_iterations);
    while (at_hi.distortion > D && hi < 0x1p30) {
        lo = hi;
        hi *= 2.0;
        at_hi = ba_evaluate(cs, dist, hi, cfg.max_iterations);
    }
    double feasible_rate = at_hi.rate_bits;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        BAPoint p = ba_evaluate(cs, dist, mid, cfg.max_iterations);
        if (std::abs(p.distortion - D) <= cfg.convergence_tol) return p.rate_bits;
        if (p.distortion > D) {
            lo = mid;
        } else {
            hi = mid;
            feasible_rate = p.rate_bits;
        }
    }
    return feasible_rate;
}

ErasedHammingRate rd_erased_hamming(const JointPMF& source_x, double p_e, double D,
                                    const RDSolverConfig& cfg) {
    if (source_x.axis_count() != 1)
        throw UsageError("rd_erased_hamming expects a single-variable source");
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw UsageError("erasure probability must be in [0,1]");
    if (D < 0.0) throw UsageError("distortion must be >= 0");
    if (p_e == 0.0) return {0.0, false};
    if (D > p_e) return {0.0, true};

    const double d_prime = D / p_e;
    const int n = source_x.axes()[0].alphabet.size();
    if (n == 2) {
        const double q = std::min(source_x.prob(0), source_x.prob(1));
        if (d_prime >= q) return {0.0, d_prime >= q};
        return {p_e * (binary_entropy(source_x.prob(0)) - binary_entropy(d_prime)), false};
    }
    // Marginal problem via the conditional machinery with trivial SI.
    CondSource cs;
    cs.n_si = 1;
    cs.n_x = n;
    cs.p_si = {1.0};
    cs.p_x_si.assign(source_x.probs().begin(), source_x.probs().end());
    cs.p_x = cs.p_x_si;
    DistortionSpec hamming = DistortionSpec::hamming(n);
    const double d_max = constant_recon_d(cs, hamming);
    if (d_prime >= d_max) return {0.0, true};
    if (d_prime <= 1e-12) return {p_e * pointwise_rate(cs, hamming), false};
    double lo = 0.0, hi = 1.0;
    BAPoint at_hi = ba_evaluate(cs, hamming, hi, cfg.max_iterations);
    while (at_hi.distortion > d_prime && hi < 0x1p30) {
        lo = hi;
        hi *= 2.0;
        at_hi = ba_evaluate(cs, hamming, hi, cfg.max_iterations);
    }
    double rate = at_hi.rate_bits;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        BAPoint p = ba_evaluate(cs, hamming, mid, cfg.max_iterations);
        if (std::abs(p.distortion - d_prime) <= cfg.convergence_tol) {
            rate = p.rate_bits;
            break;
        }
        if (p.distortion > d_prime) {
            lo = mid;
        } else {
            hi = mid;
            rate = p.rate_bits;
        }
    }
    return {p_e * rate, false};
}

namespace {

struct WZEval {
    double rate_bits;
    double distortion;
    std::vector<double> p_v_x;  // [x * n_v + v]
    std::vector<int> recon;     // [v * n_si + s]
};

// Alternating updates for a fixed slope: induced q(v|si), pointwise-optimal
// reconstruction, exponential-family channel update.
WZEval wz_evaluate(const CondSource& cs, const DistortionSpec& dist, double slope,
                   std::vector<double> p_v_x, int n_v, int max_iterations) {
    const int n_x = cs.n_x;
    const std::size_t n_si = cs.n_si;
    std::vector<double> q_v_s(n_si * static_cast<std::size_t>(n_v));
    std::vector<int> recon(static_cast<std::size_t>(n_v) * n_si, 0);
    std::vector<double> w(static_cast<std::size_t>(n_x));
    double prev_rate = std::numeric_limits<double>::infinity();
    double prev_dist = std::numeric_limits<double>::infinity();
    double rate_bits = 0.0, distortion = 0.0;

    for (int it = 0; it < max_iterations; ++it) {
        // q(v|s)
        std::fill(q_v_s.begin(), q_v_s.end(), 0.0);
        for (std::size_t s = 0; s < n_si; ++s) {
            if (cs.p_si[s] <= 0.0) continue;
            for (int x = 0; x < n_x; ++x) {
                const double pxs = cs.p_x_si[s * n_x + x] / cs.p_si[s];
                if (pxs <= 0.0) continue;
                for (int v = 0; v < n_v; ++v)
                    q_v_s[s * n_v + v] += pxs * p_v_x[static_cast<std::size_t>(x) * n_v + v];
            }
        }
        // reconstruction per (v, s)
        for (std::size_t s = 0; s < n_si; ++s)
            for (int v = 0; v < n_v; ++v) {
                for (int x = 0; x < n_x; ++x)
                    w[static_cast<std::size_t>(x)] =
                        cs.p_x_si[s * n_x + x] * p_v_x[static_cast<std::size_t>(x) * n_v + v];
                recon[static_cast<std::size_t>(v) * n_si + s] = dist.best_reconstruction(w).first;
            }
        // rate and distortion at the current point
        double r = 0.0, dd = 0.0;
        for (std::size_t s = 0; s < n_si; ++s) {
            if (cs.p_si[s] <= 0.0) continue;
            for (int x = 0; x < n_x; ++x) {
                const double pxs = cs.p_x_si[s * n_x + x];
                if (pxs <= 0.0) continue;
                for (int v = 0; v < n_v; ++v) {
                    const double pv = p_v_x[static_cast<std::size_t>(x) * n_v + v];
                    if (pv <= 0.0) continue;
                    r += pxs * pv * std::log(pv / q_v_s[s * n_v + v]);
                    dd += pxs * pv * dist.d(x, recon[static_cast<std::size_t>(v) * n_si + s]);
                }
            }
        }
        rate_bits = std::max(0.0, r / kLn2);
        distortion = dd;
        if (std::abs(r - prev_rate) <= kRateTol * kLn2 && std::abs(dd - prev_dist) <= 1e-10)
            break;
        prev_rate = r;
        prev_dist = dd;

        // channel update
        for (int x = 0; x < n_x; ++x) {
            if (cs.p_x[static_cast<std::size_t>(x)] <= 0.0) continue;
            double lmax = kNegLogFloor;
            std::vector<double> lw(static_cast<std::size_t>(n_v), 0.0);
            for (int v = 0; v < n_v; ++v) {
                double acc = 0.0;
                for (std::size_t s = 0; s < n_si; ++s) {
                    const double ps_x = cs.p_x_si[s * n_x + x] / cs.p_x[static_cast<std::size_t>(x)];
                    if (ps_x <= 0.0) continue;
                    const double qv = q_v_s[s * n_v + v];
                    acc += ps_x * ((qv > 0.0 ? std::log(qv) : kNegLogFloor) -
                                   slope * dist.d(x, recon[static_cast<std::size_t>(v) * n_si + s]));
                }
                lw[static_cast<std::size_t>(v)] = acc;
                lmax = std::max(lmax, acc);
            }
            double z = 0.0;
            for (int v = 0; v < n_v; ++v) {
                const double e = std::exp(lw[static_cast<std::size_t>(v)] - lmax);
                p_v_x[static_cast<std::size_t>(x) * n_v + v] = e;
                z += e;
            }
            for (int v = 0; v < n_v; ++v) p_v_x[static_cast<std::size_t>(x) * n_v + v] /= z;
        }
    }
    return WZEval{rate_bits, distortion, std::move(p_v_x), std::move(recon)};
}

ConditionalPMF channel_from_rows(const std::string& x_var, const Alphabet& x_alpha,
                                 const std::vector<double>& p_v_x, int n_v) {
    return ConditionalPMF({Axis{x_var, x_alpha}}, {Axis{"V", Alphabet(n_v)}}, p_v_x);
}

}  // namespace

WZResult rd_wyner_ziv(const JointPMF& source, const std::string& x_var,
                      const std::vector<std::string>& si_vars, const DistortionSpec& dist,
                      double D, const RDSolverConfig& cfg) {
    cfg.validate();
    const Alphabet& x_alpha = source.alphabet_of(x_var);

    if (dist.is_log_loss()) {
        const double h = entropy(source, {x_var}, si_vars);
        if (D < 0.0) throw UsageError("distortion must be >= 0");
        const double rate = std::max(0.0, h - D);
        const double keep = h > 0.0 ? std::max(0.0, 1.0 - D / h) : 0.0;
        ConditionalPMF v = make_timeshare_channel(x_alpha, keep, x_var, "V");
        return WZResult{rate, std::min(D, h), {rate}, {rate}, std::move(v), {}};
    }

    CondSource cs = make_cond_source(source, x_var, si_vars);
    if (dist.source_size() != cs.n_x)
        throw UsageError("distortion matrix does not match the source alphabet");
    const int n_v = cs.n_x + 1;
    const double d_min = pointwise_d_min(cs, dist);
    if (D < d_min - 1e-9)
        throw InfeasibleError("distortion target below minimum achievable D_min", d_min);

    const double d_max = constant_recon_d(cs, dist);
    if (D >= d_max) {
        // Zero rate: constant auxiliary, best per-SI reconstruction.
        std::vector<double> pvx(static_cast<std::size_t>(cs.n_x) * n_v, 0.0);
        for (int x = 0; x < cs.n_x; ++x) pvx[static_cast<std::size_t>(x) * n_v] = 1.0;
        std::vector<int> recon(static_cast<std::size_t>(n_v) * cs.n_si, 0);
        std::vector<double> w(static_cast<std::size_t>(cs.n_x));
        double dd = 0.0;
        for (std::size_t s = 0; s < cs.n_si; ++s) {
            for (int x = 0; x < cs.n_x; ++x) w[static_cast<std::size_t>(x)] = cs.p_x_si[s * cs.n_x + x];
            auto [xh, val] = dist.best_reconstruction(w);
            for (int v = 0; v < n_v; ++v) recon[static_cast<std::size_t>(v) * cs.n_si + s] = xh;
            dd += val;
        }
        return WZResult{0.0, dd, {0.0}, {0.0},
                        channel_from_rows(x_var, x_alpha, pvx, n_v), std::move(recon)};
    }

    double best_rate = std::numeric_limits<double>::infinity();
    double best_dist = 0.0;
    std::vector<double> best_pvx;
    std::vector<int> best_recon;
    std::vector<double> restart_rates, best_so_far;

    for (int r = 0; r < cfg.restarts; ++r) {
        auto rng = make_stream(cfg.rng_seed, static_cast<std::uint64_t>(r));
        std::vector<double> init(static_cast<std::size_t>(cs.n_x) * n_v);
        for (int x = 0; x < cs.n_x; ++x) {
            auto row = dirichlet_uniform(rng, n_v);
            std::copy(row.begin(), row.end(), init.begin() + static_cast<std::size_t>(x) * n_v);
        }

        double lo = 0.0, hi = 1.0;
        WZEval at_hi = wz_evaluate(cs, dist, hi, init, n_v, cfg.max_iterations);
        while (at_hi.distortion > D && hi < 0x1p20) {
            lo = hi;
            hi *= 2.0;
            at_hi = wz_evaluate(cs, dist, hi, init, n_v, cfg.max_iterations);
        }
        WZEval best = at_hi;
        bool have = at_hi.distortion <= D;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            WZEval p = wz_evaluate(cs, dist, mid, init, n_v, cfg.max_iterations);
            if (p.distortion > D) {
                lo = mid;
            } else {
                hi = mid;
                best = p;
                have = true;
            }
            if (std::abs(p.distortion - D) <= cfg.convergence_tol && p.distortion <= D) break;
        }
        const double rate = have ? best.rate_bits : std::numeric_limits<double>::infinity();
        restart_rates.push_back(rate);
        if (rate < best_rate) {
            best_rate = rate;
            best_dist = best.distortion;
            best_pvx = best.p_v_x;
            best_recon = best.recon;
        }
        best_so_far.push_back(best_rate);
    }
    if (!std::isfinite(best_rate))
        throw InfeasibleError("Wyner-Ziv search found no feasible point", d_min);
    return WZResult{best_rate,
                    best_dist,
                    std::move(restart_rates),
                    std::move(best_so_far),
                    channel_from_rows(x_var, x_alpha, best_pvx, n_v),
                    std::move(best_recon)};
}

SIEqualityReport check_si_equality(const JointPMF& source, const std::string& x_var,
                                   const std::vector<std::string>& si_vars,
                                   const DistortionSpec& dist, const std::vector<double>& d_grid,
                                   const RDSolverConfig& cfg) {
    if (d_grid.empty()) throw UsageError("check_si_equality needs a non-empty distortion grid");
    SIEqualityReport report;
    report.d_grid = d_grid;
    report.max_gap = -std::numeric_limits<double>::infinity();
    for (double d : d_grid) {
        const double r_si = rd_si_enc(source, x_var, si_vars, dist, d, cfg);
        WZResult wz = rd_wyner_ziv(source, x_var, si_vars, dist, d, cfg);
        report.r_si_enc.push_back(r_si);
        report.r_wz.push_back(wz.rate_bits);
        report.max_gap = std::max(report.max_gap, wz.rate_bits - r_si);
        report.points.push_back(SIEqualityPoint{d, wz.rate_bits, r_si, std::move(wz.v_given_x),
                                                std::move(wz.reconstruction)});
    }
    report.verdict = report.max_gap <= cfg.equality_tol;
    report.note = "V* channels are the first optimum found per grid point; ties are not enumerated";
    return report;
}

std::string SIEqualityReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points)
        pts.push_back({{"d", p.d},
                       {"r_wz", p.r_wz},
                       {"r_si_enc", p.r_si_enc},
                       {"v_channel", nlohmann::json::parse(p.v_channel.to_json())},
                       {"reconstruction", p.reconstruction}});
    nlohmann::json j{{"d_grid", d_grid}, {"r_wz", r_wz},       {"r_si_enc", r_si_enc},
                     {"max_gap", max_gap}, {"verdict", verdict}, {"note", note},
                     {"points", pts}};
    return j.dump();
}

namespace {

struct HelperObjective {
    double objective;  // H(X | U_h, Z)
    double rate;       // I(U_h; Y | Z)
};

HelperObjective helper_eval(const JointPMF& source, const ConditionalPMF& ch) {
    JointPMF joint = extend(source, ch);
    return HelperObjective{entropy(joint, {"X"}, {"Uh", "Z"}),
                           mutual_information(joint, {"Uh"}, {"Y"}, {"Z"})};
}

ConditionalPMF rows_to_uh_channel(const Axis& y_axis, const std::vector<double>& rows, int n_uh) {
    return ConditionalPMF({y_axis}, {Axis{"Uh", Alphabet(n_uh)}}, rows);
}

// Blend toward the constant channel until the rate constraint holds.
std::vector<double> make_feasible(const JointPMF& source, const Axis& y_axis,
                                  std::vector<double> rows, int n_uh, double r_h) {
    auto rate_of = [&](const std::vector<double>& r) {
        return helper_eval(source, rows_to_uh_channel(y_axis, r, n_uh)).rate;
    };
    if (rate_of(rows) <= r_h) return rows;
    const int n_y = y_axis.alphabet.size();
    std::vector<double> blended(rows.size());
    double lo = 0.0, hi = 1.0;  // hi = fully constant, rate 0
    for (int it = 0; it < 40; ++it) {
        const double a = 0.5 * (lo + hi);
        for (int y = 0; y < n_y; ++y)
            for (int u = 0; u < n_uh; ++u)
                blended[static_cast<std::size_t>(y) * n_uh + u] =
                    (1.0 - a) * rows[static_cast<std::size_t>(y) * n_uh + u] + (u == 0 ? a : 0.0);
        if (rate_of(blended) <= r_h)
            hi = a;
        else
            lo = a;
    }
    for (int y = 0; y < n_y; ++y)
        for (int u = 0; u < n_uh; ++u)
            blended[static_cast<std::size_t>(y) * n_uh + u] =
                (1.0 - hi) * rows[static_cast<std::size_t>(y) * n_uh + u] + (u == 0 ? hi : 0.0);
    return blended;
}

}  // namespace

HelperAuxResult helper_aux_optimize(const JointPMF& source_xyz, double r_h,
                                    const RDSolverConfig& cfg) {
    cfg.validate();
    if (r_h < 0.0) throw UsageError("helper rate must be >= 0");
    const Axis y_axis{"Y", source_xyz.alphabet_of("Y")};
    const int n_y = y_axis.alphabet.size();
    const int n_uh = n_y + 2;

    static constexpr double kSteps[] = {0.25, 0.1, 0.03, 0.01, 0.003, 0.001};

    double best_objective = std::numeric_limits<double>::infinity();
    double best_rate = 0.0;
    std::vector<double> best_rows;
    std::vector<double> restart_objectives;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::vector<double> rows(static_cast<std::size_t>(n_y) * n_uh, 0.0);
        if (restart == 0) {
            for (int y = 0; y < n_y; ++y) rows[static_cast<std::size_t>(y) * n_uh] = 1.0;
        } else if (restart == 1) {
            for (int y = 0; y < n_y; ++y) rows[static_cast<std::size_t>(y) * n_uh + y] = 1.0;
        } else {
            auto rng = make_stream(cfg.rng_seed, static_cast<std::uint64_t>(restart));
            for (int y = 0; y < n_y; ++y) {
                auto row = dirichlet_uniform(rng, n_uh);
                std::copy(row.begin(), row.end(), rows.begin() + static_cast<std::size_t>(y) * n_uh);
            }
        }
        rows = make_feasible(source_xyz, y_axis, std::move(rows), n_uh, r_h);
        HelperObjective cur = helper_eval(source_xyz, rows_to_uh_channel(y_axis, rows, n_uh));

        for (double step : kSteps) {
            bool improved = true;
            int guard = 0;
            while (improved && guard++ < 200) {
                improved = false;
                for (int y = 0; y < n_y; ++y)
                    for (int ua = 0; ua < n_uh; ++ua)
                        for (int ub = 0; ub < n_uh; ++ub) {
                            if (ub == ua) continue;
                            const double avail = rows[static_cast<std::size_t>(y) * n_uh + ua];
                            if (avail <= 0.0) continue;
                            const double m = std::min(step, avail);
                            std::vector<double> cand = rows;
                            cand[static_cast<std::size_t>(y) * n_uh + ua] -= m;
                            cand[static_cast<std::size_t>(y) * n_uh + ub] += m;
                            HelperObjective co =
                                helper_eval(source_xyz, rows_to_uh_channel(y_axis, cand, n_uh));
                            if (co.rate <= r_h + 1e-12 &&
                                co.objective < cur.objective - 1e-12) {
                                rows = std::move(cand);
                                cur = co;
                                improved = true;
                            }
                        }
            }
        }
        restart_objectives.push_back(cur.objective);
        if (cur.objective < best_objective) {
            best_objective = cur.objective;
            best_rate = cur.rate;
            best_rows = rows;
        }
    }
    return HelperAuxResult{rows_to_uh_channel(y_axis, best_rows, n_uh), best_objective, best_rate,
                           std::move(restart_objectives)};
}

}  // namespace rdi
