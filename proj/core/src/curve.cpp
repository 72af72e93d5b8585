#include "rdi/curve.hpp"

#include <cstdio>

#include <json.hpp>

#include "rdi/errors.hpp"

namespace rdi {

void RDICurve::validate_sorted() const {
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double prev = swept_by_rh ? points[i - 1].r_h.value() : points[i - 1].d;
        const double cur = swept_by_rh ? points[i].r_h.value() : points[i].d;
        if (cur < prev) throw UsageError("curve points must be sorted by the sweep variable");
    }
}

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_curve_csv(const RDICurve& curve, std::ostream& os) {
    const bool has_rh = !curve.points.empty() && curve.points.front().r_h.has_value();
    os << (has_rh ? "D,R,Delta,Rh\n" : "D,R,Delta\n");
    for (const auto& p : curve.points) {
        os << format_sig(p.d) << ',' << format_sig(p.r) << ',' << format_sig(p.delta);
        if (has_rh) os << ',' << format_sig(p.r_h.value());
        os << '\n';
    }
}

std::string RDICurve::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json jp{{"d", p.d}, {"r", p.r}, {"delta", p.delta}};
        if (p.r_h) jp["r_h"] = *p.r_h;
        pts.push_back(jp);
    }
    nlohmann::json j{{"meta",
                      {{"case_id", meta.case_id},
                       {"params", meta.params_json.empty()
                                      ? nlohmann::json::object()
                                      : nlohmann::json::parse(meta.params_json)},
                       {"timestamp", meta.timestamp},
                       {"tool_version", meta.tool_version},
                       {"seed", meta.seed}}},
                     {"swept_by_rh", swept_by_rh},
                     {"points", pts}};
    return j.dump(2);
}

RDICurve RDICurve::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RDICurve curve;
    const auto& meta = j.at("meta");
    curve.meta.case_id = meta.at("case_id").get<std::string>();
    curve.meta.params_json = meta.at("params").dump();
    curve.meta.timestamp = meta.at("timestamp").get<std::string>();
    curve.meta.tool_version = meta.at("tool_version").get<std::string>();
    curve.meta.seed = meta.at("seed").get<std::uint64_t>();
    curve.swept_by_rh = j.value("swept_by_rh", false);
    for (const auto& jp : j.at("points")) {
        RDIPoint p;
        p.d = jp.at("d").get<double>();
        p.r = jp.at("r").get<double>();
        p.delta = jp.at("delta").get<double>();
        if (jp.contains("r_h")) p.r_h = jp.at("r_h").get<double>();
        curve.points.push_back(p);
    }
    curve.validate_sorted();
    return curve;
}

}  // namespace rdi
