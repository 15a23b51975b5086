#pragma once

// Text and JSON renderings of an AxiomReport.  Both carry the same verdicts.
//
// JSON: [{"check": name, "pass": bool, "witness": string}, ...]

#include <ostream>
#include <string>

#include <json.hpp>

#include "galg/algebroid.hpp"

namespace galg {

inline void write_text(std::ostream& os, const AxiomReport& r) {
    std::size_t passed = 0;
    for (const auto& c : r.checks()) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.pass && !c.witness.empty()) os << ": " << c.witness;
        os << '\n';
        passed += c.pass ? 1 : 0;
    }
    os << passed << '/' << r.checks().size() << " checks passed\n";
}

inline nlohmann::json to_json(const AxiomReport& r) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : r.checks()) out.push_back({{"check", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    return out;
}

inline void write_json(std::ostream& os, const AxiomReport& r) { os << to_json(r).dump(2) << '\n'; }

} // namespace galg
