#pragma once

#include <string>

#include "rdi/pmf.hpp"

namespace rdi {

// Binary symmetric channel with the given crossover probability.
ConditionalPMF make_bsc(double crossover, const std::string& in = "X",
                        const std::string& out = "Y");

// Symbol-preserving erasure channel: out = in with prob 1-p_e, the extra
// symbol "e" with prob p_e. Output alphabet is the input's plus "e".
ConditionalPMF make_erasure_channel(const Alphabet& in_alphabet, double p_e,
                                    const std::string& in, const std::string& out);

// Joint (X, Y) where Y is an erased version of the single-variable source.
JointPMF make_erasure_source(const JointPMF& source, double p_e,
                             const std::string& out = "Y");

// out = in with prob keep, the extra erasure symbol otherwise (used to build
// time-sharing auxiliaries).
ConditionalPMF make_timeshare_channel(const Alphabet& in_alphabet, double keep,
                                      const std::string& in, const std::string& out);

// Singleton output independent of the given axes (the empty auxiliary).
ConditionalPMF make_constant_channel(const std::vector<Axis>& given, const std::string& out);

ConditionalPMF make_identity_channel(const Alphabet& alphabet, const std::string& in,
                                     const std::string& out);

// Reinterpret a channel as conditioned on extra (ignored) given axes,
// appended after the existing ones.
ConditionalPMF lift_channel(const ConditionalPMF& channel, const std::vector<Axis>& extra_given);

// p(a_out, b_out | union of givens) with the two outputs conditionally
// independent given the inputs. Both channels must share identical given axes.
ConditionalPMF product_channel(const ConditionalPMF& a, const ConditionalPMF& b);

}  // namespace rdi
