#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace polyapprox::verify {

// One checked comparison.  `lhs` and `rhs` are the two sides as evaluated;
// the optional fields carry whichever diagnostic the case produced
// (a residual for identities, a fitted constant and trend slope for scans).
struct CaseResult {
    std::string name;
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> residual;
    std::optional<double> fitted_c;
    std::optional<double> slope;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CaseResult> cases;
    bool pass = false;
    double elapsed_ms = 0.0;
    std::string resolution;  // echo of the grids/degrees the suite ran at
    std::uint64_t seed = 0;

    void finalize() {
        pass = true;
        for (const auto& c : cases) pass = pass && c.pass;
    }
};

// Deterministic 64-bit hash (FNV-1a); decorrelates per-suite RNG streams
// from a single base seed without depending on execution order.
inline std::uint64_t suite_seed(std::uint64_t base, const std::string& id) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : id) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return base ^ h;
}

inline nlohmann::ordered_json to_json(const CaseResult& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["params"] = c.params;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    if (c.residual) j["residual"] = *c.residual;
    if (c.fitted_c) j["fitted_c"] = *c.fitted_c;
    if (c.slope) j["slope"] = *c.slope;
    j["pass"] = c.pass;
    return j;
}

inline nlohmann::ordered_json to_json(const SuiteReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["cases"] = nlohmann::ordered_json::array();
    for (const auto& c : r.cases) j["cases"].push_back(to_json(c));
    j["pass"] = r.pass;
    j["elapsed_ms"] = r.elapsed_ms;
    j["resolution"] = r.resolution;
    j["seed"] = r.seed;
    return j;
}

namespace detail {

// Shortest round-trip decimal form, via the JSON serializer; keeps CSV and
// JSON output byte-for-byte reproducible across runs.
inline std::string num_str(double v) { return nlohmann::json(v).dump(); }

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        out += ch;
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline std::string csv_header() { return "suite,name,lhs,rhs,residual,fitted_c,slope,pass\n"; }

inline std::string csv_rows(const SuiteReport& r) {
    std::string out;
    for (const auto& c : r.cases) {
        out += detail::csv_escape(r.suite);
        out += ',';
        out += detail::csv_escape(c.name);
        out += ',';
        out += detail::num_str(c.lhs);
        out += ',';
        out += detail::num_str(c.rhs);
        out += ',';
        if (c.residual) out += detail::num_str(*c.residual);
        out += ',';
        if (c.fitted_c) out += detail::num_str(*c.fitted_c);
        out += ',';
        if (c.slope) out += detail::num_str(*c.slope);
        out += ',';
        out += c.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Writes one <suite>.json per suite plus combined report.json / report.csv.
// `format` is "json", "csv", or "both".
inline void emit_report(const std::vector<SuiteReport>& reports, const std::string& out_dir,
                        const std::string& format) {
    if (format != "json" && format != "csv" && format != "both")
        throw std::invalid_argument("emit_report: format must be json, csv, or both");
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    const bool want_json = (format == "json" || format == "both");
    const bool want_csv = (format == "csv" || format == "both");

    if (want_json) {
        nlohmann::ordered_json combined = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            const auto j = to_json(r);
            write_text_file(dir / (r.suite + ".json"), j.dump(2) + "\n");
            combined.push_back(j);
        }
        write_text_file(dir / "report.json", combined.dump(2) + "\n");
    }
    if (want_csv) {
        std::string csv = csv_header();
        for (const auto& r : reports) csv += csv_rows(r);
        write_text_file(dir / "report.csv", csv);
    }
}

}  // namespace polyapprox::verify
