#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rdi/regions.hpp"

namespace rdi {

struct CurveMetadata {
    std::string case_id;
    std::string params_json;  // serialized parameter object
    std::string timestamp;
    std::string tool_version;
    std::uint64_t seed = 0;
};

// Swept tradeoff curve; points ordered by D (or by R_h for helper sweeps).
struct RDICurve {
    CurveMetadata meta;
    std::vector<RDIPoint> points;
    bool swept_by_rh = false;

    void validate_sorted() const;

    std::string to_json() const;
    static RDICurve from_json(const std::string& text);
};

// Fixed columns "D,R,Delta[,Rh]", one header line, 12 significant digits.
void write_curve_csv(const RDICurve& curve, std::ostream& os);
std::string format_sig(double v);  // 12 significant digits

}  // namespace rdi
