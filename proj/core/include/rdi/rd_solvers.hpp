#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdi/distortion.hpp"
#include "rdi/info.hpp"
#include "rdi/pmf.hpp"

namespace rdi {

struct RDSolverConfig {
    int max_iterations = 2000;
    double convergence_tol = 1e-6;  // distortion bisection target
    int restarts = 32;
    std::uint64_t rng_seed = 1;
    // Verdict tolerance for check_si_equality; looser than the solver
    // tolerances because the Wyner-Ziv side is a multi-start upper bound.
    double equality_tol = 1e-3;

    void validate() const;
};

// min I(X; Xhat | SI) over p(xhat|x,si) subject to E d <= D, side information
// at encoder and decoder. Conditional Blahut-Arimoto with one global
// Lagrange multiplier bisected to meet D. Log-loss never enters the
// iteration: it returns the closed form [H(X|SI) - D]^+.
double rd_si_enc(const JointPMF& source, const std::string& x_var,
                 const std::vector<std::string>& si_vars, const DistortionSpec& dist, double D,
                 const RDSolverConfig& cfg);

// [H(X|SI) - D]^+.
double rd_logloss(const JointPMF& source, const std::string& x_var,
                  const std::vector<std::string>& si_vars, double D);

struct ErasedHammingRate {
    double rate_bits;
    bool saturated;  // clipped to zero (D at or past the zero-rate point)
};

// Erased side information with Hamming distortion:
// p_e * min{ I(X; Xhat) : E d(X, Xhat) <= D / p_e } over p(xhat|x).
// Closed form for binary sources, marginal Blahut-Arimoto otherwise.
ErasedHammingRate rd_erased_hamming(const JointPMF& source_x, double p_e, double D,
                                    const RDSolverConfig& cfg = {});

struct WZResult {
    double rate_bits;                 // best feasible objective (upper bound on R_WZ)
    double distortion;                // E d at the reported point
    std::vector<double> restart_rates;
    std::vector<double> best_so_far;  // running minimum, non-increasing
    ConditionalPMF v_given_x;         // achieving auxiliary channel
    std::vector<int> reconstruction;  // xhat per (v, si cell); empty for log-loss
};

// Wyner-Ziv rate at distortion D: multi-start alternating optimization over
// p(v|x) with |V| = |X|+1 and deterministic reconstruction xhat(v, si).
WZResult rd_wyner_ziv(const JointPMF& source, const std::string& x_var,
                      const std::vector<std::string>& si_vars, const DistortionSpec& dist,
                      double D, const RDSolverConfig& cfg);

struct SIEqualityPoint {
    double d;
    double r_wz;
    double r_si_enc;
    ConditionalPMF v_channel;
    std::vector<int> reconstruction;
};

struct SIEqualityReport {
    std::vector<double> d_grid;
    std::vector<double> r_wz;
    std::vector<double> r_si_enc;
    double max_gap;
    bool verdict;
    std::vector<SIEqualityPoint> points;
    std::string note;

    std::string to_json() const;
};

// Runs both solvers over the distortion grid; verdict is true when the
// largest gap r_wz - r_si_enc stays within cfg.equality_tol. The achieving
// V* channel of each grid point is retained for the region evaluators;
// when several optima exist the first one found is kept.
SIEqualityReport check_si_equality(const JointPMF& source, const std::string& x_var,
                                   const std::vector<std::string>& si_vars,
                                   const DistortionSpec& dist, const std::vector<double>& d_grid,
                                   const RDSolverConfig& cfg);

struct HelperAuxResult {
    ConditionalPMF uh_given_y;
    double objective_bits;  // achieved H(X | U_h, Z)
    double rate_bits;       // achieved I(U_h; Y | Z)
    std::vector<double> restart_objectives;
};

// min H(X|U_h, Z) over p(u_h|y) subject to I(U_h; Y|Z) <= r_h, with
// |U_h| = |Y| + 2. Multi-start projected local search on the simplex
// product; the result is an upper bound on the optimum.
HelperAuxResult helper_aux_optimize(const JointPMF& source_xyz, double r_h,
                                    const RDSolverConfig& cfg);

}  // namespace rdi
