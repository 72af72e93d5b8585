#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdi/distortion.hpp"
#include "rdi/pmf.hpp"
#include "rdi/regions.hpp"

namespace rdi {

// Index in [1:modulus], as carried by the scheme's message components.
struct PadIndex {
    std::uint64_t value = 1;
    std::uint64_t modulus = 1;
};

// Modular one-time pad: (m + k) mod modulus with 0 mapped to modulus.
// Bijective in m for fixed k; uniform k makes the output uniform.
PadIndex one_time_pad(PadIndex m, PadIndex k);
PadIndex one_time_pad_inverse(PadIndex c, PadIndex k);

// Robust typicality: every cell count within eps * p relatively, zero counts
// on zero-probability cells. One sequence per axis of `ref`, each length n.
bool jointly_typical(const JointPMF& ref, const std::vector<const std::vector<int>*>& seqs,
                     double eps);

// ---------------------------------------------------------------------------
// Exact verification of the side-information binning lemma: bin all |Y|^n
// sequences uniformly into 2^{nR_K} bins and measure H(Y^n | W^n, K) exactly.

struct BinningExperiment {
    int n = 8;
    double r_k = 0.0;  // bits/symbol
    std::uint64_t seed = 1;
    JointPMF source;   // exactly two axes: [binned variable, observer]
};

struct BinningEntropyReport {
    double entropy_bits;        // exact H(Y^n | W^n, K)
    double bound_bits;          // n (H(Y|W) - R_K) at the nominal rate, may be negative
    // The lemma claims the bound only for R_K <= H(Y|W); past that point the
    // binding statement is entropy >= 0, so the applicable bound clips at 0.
    double applicable_bound_bits;
    double slack_per_symbol;    // (entropy - applicable bound) / n, the measured delta
    double h_y_given_w;         // single-letter H(Y|W)
    double nominal_rate;
    double effective_rate;      // log2(bin count) / n; rounding can push it past nominal
    std::uint64_t bin_count;

    std::string to_json() const;
};

BinningEntropyReport exact_binning_entropy(const BinningExperiment& exp);

// ---------------------------------------------------------------------------
// Exact verification of the codeword binning lemma: an i.i.d. codebook of
// 2^{nR~} U-sequences, joint-typicality encoding against the observer, and
// uniform binning of the codeword indices.

struct CodewordBinningConfig {
    int n = 8;
    double r_codebook = 0.9;  // R~, bits/symbol
    double r_k = 0.3;         // bits/symbol
    double epsilon = 0.15;
    std::uint64_t seed = 1;
    JointPMF joint;           // exactly two axes: [U, observer]
};

struct CodewordBinningReport {
    double entropy_bits;      // exact H(L | K, W~^n)
    double bound_bits;        // n (R~ - R_K - I(U;W~))
    double slack_per_symbol;
    double i_u_w;             // single-letter I(U;W~)
    std::uint64_t codebook_size;
    std::uint64_t bin_count;
    double fallback_mass;     // observer mass with no jointly typical codeword

    std::string to_json() const;
};

CodewordBinningReport codeword_binning_entropy(const CodewordBinningConfig& cfg);

// ---------------------------------------------------------------------------
// End-to-end simulation of the switch-open layered scheme: covering
// codebooks, rate-distortion binning, key binning of Y^n and one-time-pad
// scrambling of the secret message part.

struct SchemeConfig {
    int n = 4;
    double epsilon = 0.15;      // robust-typicality parameter
    // Rate slack delta(epsilon) entering the codebook/bin exponents; the
    // asymptotic analysis never pins the function down, so it is a separate
    // dial defaulting to epsilon itself.
    std::optional<double> rate_slack;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    double logloss_perturb = 1e-3;  // floor mixed into posterior reconstructions

    double slack() const { return rate_slack.value_or(epsilon); }
};

// One sampled realization of the layered scheme's codebooks: i.i.d. covering
// codebooks, rate-distortion bin maps (per U-index for the V layer), and the
// key bin map over all Y^n sequences. Sizes are ceil(2^{n(rate+slack)}) for
// codebooks and bins, round(2^{n R_K}) for the key.
struct SchemeCodebook {
    int n = 0;
    std::uint64_t u_codebook_size = 0, v_codebook_size = 0;
    std::uint64_t u_bins = 0, v_bins = 0, key_bins = 0;
    std::uint64_t open_part_size = 0;  // ceil(v_bins / key_bins)
    double key_rate = 0.0;             // min{H(Y|U,V,X,Z), I(V;X|U,Y)}
    bool scrambling_skipped = false;   // key rate zero: no binning done
    bool degenerate = false;           // a size-1 codebook or bin map
    std::vector<std::vector<int>> u_seqs;                 // [l0][i]
    std::vector<std::vector<std::vector<int>>> v_seqs;    // [l0][l1][i]
    std::vector<std::uint32_t> u_bin;                     // [l0]
    std::vector<std::vector<std::uint32_t>> v_bin;        // [l0][l1]
    std::vector<std::uint32_t> key_bin;                   // [y sequence index]
};

// Samples the codebooks for the joint p(X,Y,Z,U,V) = source * aux.
SchemeCodebook build_scheme_codebook(const JointPMF& joint, const SchemeConfig& cfg);

// Exact joint of the source block and the realized decoder information,
// kept for the amplification measurements.
struct DecoderInfoJoint {
    int n = 0;
    int x_size = 0;
    JointPMF design;                       // single-letter p(X, U, V, Y)
    std::vector<std::string> info_axes;    // {"U", "V", "Y"}
    std::vector<std::vector<std::vector<int>>> info_seqs;  // [realization][axis][position]
    std::vector<std::vector<double>> p_x_info;             // [x sequence][realization]
};

struct ListMeasure {
    double exponent;          // (1/n) log2 of the largest typical list
    double coverage;          // P(X^n in list)
    std::uint64_t max_list_size;
};

ListMeasure measure_list(const DecoderInfoJoint& joint, double eps);

struct BlockEntropyMeasure {
    double rate;          // exact (1/n) H(X^n | decoder info)
    double bound_rate;    // list exponent + (2 + n * failure_mass * log2|X|) / n
    double failure_mass;  // 1 - list coverage
    bool lemma_holds;     // rate <= bound_rate
};

BlockEntropyMeasure measure_block_entropy(const DecoderInfoJoint& joint, double eps);

struct SimReport {
    double empirical_distortion = 0.0;
    double distortion_std_error = 0.0;
    double single_letter_distortion = 0.0;
    double leakage_rate_scrambled = 0.0;  // exact (1/n) I(X^n; M, Z^n), key on
    double leakage_rate_plain = 0.0;      // same with the pad disabled
    double encoder_failure_rate = 0.0;    // exact typicality-failure mass
    double decoder_error_rate = 0.0;      // exact
    double list_size_exponent = 0.0;
    double list_coverage = 0.0;
    double block_entropy_rate = 0.0;
    double key_rate = 0.0;                // single-letter R_K
    double key_rate_effective = 0.0;      // log2(key bins) / n
    bool scrambling_skipped = false;      // R_K = 0 case: no binning done
    bool degenerate_codebook = false;     // some size-1 codebook or bin map
    std::uint64_t u_codebook_size = 0, v_codebook_size = 0;
    std::uint64_t u_bins = 0, v_bins = 0, key_bins = 0;

    std::string to_json() const;
};

struct SchemeSimResult {
    SimReport report;
    DecoderInfoJoint decoder_joint;
};

SchemeSimResult simulate_scheme_open(const JointPMF& source_xyz, const AuxChannelSet& aux,
                                     const DistortionSpec& dist, const SchemeConfig& cfg);

}  // namespace rdi
