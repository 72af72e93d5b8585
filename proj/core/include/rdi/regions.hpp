#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdi/distortion.hpp"
#include "rdi/pmf.hpp"
#include "rdi/rd_solvers.hpp"

namespace rdi {

// One point of a rate / distortion / leakage tradeoff; r_h present only for
// helper settings.
struct RDIPoint {
    std::optional<double> r_h;
    double r = 0.0;
    double d = 0.0;
    double delta = 0.0;
};

// Deterministic reconstruction lookup. `inputs` names the decoder input
// axes; `table` is row-major over those axes in the given order.
struct Reconstruction {
    std::vector<std::string> inputs;
    std::vector<int> table;
    int xhat_size = 0;
};

// Auxiliary channels of the achievability schemes. `uv` outputs {"U","V"}
// given {"X","Y"} (uncoded settings) or {"X","Uh"} (helper setting). The
// empty auxiliary is a singleton alphabet.
struct AuxChannelSet {
    ConditionalPMF uv;
    std::optional<ConditionalPMF> uh_given_y;
    std::optional<Reconstruction> reconstruction;
};

struct KeyRates {
    double r_k = 0.0;
    double r_k_prime = 0.0;
};

struct InnerBoundPoint {
    RDIPoint point;
    double key_rate = 0.0;
};

// Switch-open setting: eavesdropper side information Z not at the decoder.
// Decoder inputs (Y, U, V).
RDIPoint outer_bound_open(const JointPMF& source_xyz, const AuxChannelSet& aux,
                          const DistortionSpec& dist);
InnerBoundPoint inner_bound_open(const JointPMF& source_xyz, const AuxChannelSet& aux,
                                 const DistortionSpec& dist);

// Switch-closed setting: decoder inputs (Y, Z, U, V); the outer bound uses V
// alone (U must be a singleton).
InnerBoundPoint inner_bound_closed(const JointPMF& source_xyz, const AuxChannelSet& aux,
                                   const DistortionSpec& dist);
RDIPoint outer_bound_closed(const JointPMF& source_xyz, const AuxChannelSet& aux,
                            const DistortionSpec& dist);

// Tight region under X - Y - Z and rate-distortion equality of the two
// side-information placements; caller asserts the equality condition.
RDIPoint region_open_markov(const JointPMF& source_xyz, const DistortionSpec& dist, double D,
                            const RDSolverConfig& cfg);

// Tight region with the eavesdropper's side information also at the decoder.
RDIPoint region_closed(const JointPMF& source_xyz, const DistortionSpec& dist, double D,
                       const RDSolverConfig& cfg);

enum class CorollaryCase {
    erased_y_hamming,
    logloss_open,
    erased_z_hamming,
    double_erasure_hamming,
    logloss_closed,
    helper_erased_hamming,
    helper_logloss,
};

// Parameters of the closed-form example families (binary uniform source).
// Each case requires exactly the fields it uses.
struct CorollaryParams {
    std::optional<double> p_e;      // single-erasure cases
    std::optional<double> z_bias;   // P(Z=0 | Y=e), switch-open examples
    std::optional<double> y_bias;   // P(Y=0 | Z=e), erased-Z example
    std::optional<double> p_ey;     // double-erasure cases
    std::optional<double> p_ez;
    std::optional<double> p_w;      // helper cases: W erases Z with this prob
};

RDIPoint corollary_region(CorollaryCase c, const CorollaryParams& params, double D,
                          std::optional<double> r_h = {});

struct KeyConstraint {
    bool satisfied = true;
    double slack = 0.0;
};

struct HelperInnerBound {
    RDIPoint point;         // r_h field carries the helper-rate requirement
    double r_h_required = 0.0;
    KeyRates keys;
    KeyConstraint key_from_codeword;   // R_K <= I(Uh;Y) - I(Uh;X,W,U,V)
    KeyConstraint key_from_randomness; // R_K' <= R_h - max{I(Uh;Y|Z), I(Uh;Y|X)}
    KeyConstraint key_sum;             // R_K + R_K' <= I(X;V|Z,Uh,U)
    bool codeword_binning_used = false;
};

// Rate-limited helper inner bound. The joint must factorize as
// p(x,y) p(uh|y) p(u,v|x,uh) p(w,z|x,y); the three implied Markov chains are
// checked. When `keys` is absent the maximal feasible allocation is used,
// preferring the pure-randomness key.
HelperInnerBound helper_inner_bound(const JointPMF& source_xyzw, const AuxChannelSet& aux,
                                    double r_h, const DistortionSpec& dist,
                                    std::optional<KeyRates> keys = {});

// Helper region under Y - X - Z - W with log-loss distortion. The rate term
// optimizes the helper auxiliary channel at budget r_h.
RDIPoint region_helper_logloss(const JointPMF& source_xyzw, double r_h, double D,
                               const RDSolverConfig& cfg);

// Helper region under Y - W - Z - X when side information at the encoder
// does not improve the rate-distortion region for Z.
RDIPoint region_helper_degraded(const JointPMF& source_xyzw, const DistortionSpec& dist,
                                double r_h, double D, const RDSolverConfig& cfg);

struct GaussianChainParams {
    enum class Ordering {
        w_z_x_y,  // W ~ N(0, var_head), Z = W+A, X = Z+B, Y = X+C
        x_z_w_y,  // X ~ N(0, var_head), Z = X+A, W = Z+B, Y = W+C
    };
    Ordering ordering;
    double var_head = 1.0;
    double var_a = 1.0;
    double var_b = 1.0;
    double var_c = 1.0;
};

struct GaussianRegion {
    RDIPoint point;
    bool rate_saturated = false;  // [.]^+ clipped the rate to zero
    bool delta_at_floor = false;  // max picked the I(X;W) floor
};

// Quadratic Gaussian closed forms, half log base 2 throughout.
GaussianRegion gaussian_region(const GaussianChainParams& params, double r_h, double D);

}  // namespace rdi
