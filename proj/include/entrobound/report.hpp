// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace entrobound {

/// Full-precision decimal rendering (17 significant digits); infinities
/// spelled "inf"/"-inf" for lossless round-trips.
inline std::string format_full(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Table rendering, 6 significant digits.
inline std::string format_short(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Named quantities attached to a check; absent means not applicable.
struct CheckQuantities {
    std::optional<double> h;
    std::optional<double> i;
    std::optional<double> f;
    std::optional<double> w;
};

/// One verified claim: inputs, computed quantities, margins and verdict.
/// wall_time_seconds is diagnostic only and never serialized, so reports
/// stay byte-identical across runs.
struct CheckRecord {
    std::string name;
    std::string rho;
    std::optional<std::string> mu;
    CheckQuantities quantities;
    std::vector<double> margins;
    bool passed = false;
    std::string case_label;
    double wall_time_seconds = 0.0;
};

struct ReportSummary {
    int total = 0;
    int passed = 0;
    int failed = 0;
};

struct VerificationReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;

    ReportSummary summary() const {
        ReportSummary s;
        s.total = static_cast<int>(checks.size());
        for (const CheckRecord& c : checks) (c.passed ? s.passed : s.failed)++;
        return s;
    }

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckRecord& c) { return c.passed; });
    }

    void append(VerificationReport other) {
        for (CheckRecord& c : other.checks) checks.push_back(std::move(c));
    }

    /// Deterministic order: by name, then rho, then mu.
    void sort_checks() {
        std::stable_sort(checks.begin(), checks.end(),
                         [](const CheckRecord& a, const CheckRecord& b) {
                             return std::tie(a.name, a.rho, a.mu) < std::tie(b.name, b.rho, b.mu);
                         });
    }
};

namespace detail {

inline void json_escape_into(std::string& out, const std::string& s) {
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
}

inline void json_number_into(std::string& out, double v) {
    // JSON has no infinity literal; the convention here is the string "inf".
    if (std::isinf(v)) {
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
    } else {
        out += format_full(v);
    }
}

inline void json_quantity_into(std::string& out, const std::optional<double>& q) {
    if (!q.has_value()) {
        out += "null";
    } else {
        json_number_into(out, *q);
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline std::string to_json(const VerificationReport& report) {
    std::string out;
    out += "{\n  \"suite\": \"";
    detail::json_escape_into(out, report.suite);
    out += "\",\n  \"seed\": " + std::to_string(report.seed) + ",\n  \"checks\": [";
    bool first = true;
    for (const CheckRecord& c : report.checks) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"name\": \"";
        detail::json_escape_into(out, c.name);
        out += "\", \"rho\": \"";
        detail::json_escape_into(out, c.rho);
        out += "\", \"mu\": ";
        if (c.mu.has_value()) {
            out += '"';
            detail::json_escape_into(out, *c.mu);
            out += '"';
        } else {
            out += "null";
        }
        out += ", \"quantities\": {\"H\": ";
        detail::json_quantity_into(out, c.quantities.h);
        out += ", \"I\": ";
        detail::json_quantity_into(out, c.quantities.i);
        out += ", \"F\": ";
        detail::json_quantity_into(out, c.quantities.f);
        out += ", \"W\": ";
        detail::json_quantity_into(out, c.quantities.w);
        out += "}, \"margins\": [";
        for (std::size_t i = 0; i < c.margins.size(); ++i) {
            if (i > 0) out += ", ";
            detail::json_number_into(out, c.margins[i]);
        }
        out += "], \"verdict\": \"";
        out += c.passed ? "pass" : "fail";
        out += "\", \"case\": \"";
        detail::json_escape_into(out, c.case_label);
        out += "\"}";
    }
    const ReportSummary s = report.summary();
    out += "\n  ],\n  \"summary\": {\"total\": " + std::to_string(s.total) +
           ", \"passed\": " + std::to_string(s.passed) +
           ", \"failed\": " + std::to_string(s.failed) + "}\n}\n";
    return out;
}

inline std::string to_csv(const VerificationReport& report) {
    std::string out = "name,rho,mu,H,I,F,W,margins,verdict,case\n";
    auto quantity = [](const std::optional<double>& q) {
        return q.has_value() ? format_full(*q) : std::string();
    };
    for (const CheckRecord& c : report.checks) {
        out += detail::csv_field(c.name) + ',' + detail::csv_field(c.rho) + ',' +
               detail::csv_field(c.mu.value_or("")) + ',';
        out += quantity(c.quantities.h) + ',' + quantity(c.quantities.i) + ',' +
               quantity(c.quantities.f) + ',' + quantity(c.quantities.w) + ',';
        std::string margins;
        for (std::size_t i = 0; i < c.margins.size(); ++i) {
            if (i > 0) margins += ';';
            margins += format_full(c.margins[i]);
        }
        out += detail::csv_field(margins);
        out += c.passed ? ",pass," : ",fail,";
        out += detail::csv_field(c.case_label);
        out += '\n';
    }
    return out;
}

inline std::string to_table(const VerificationReport& report) {
    std::string out = "suite " + report.suite + " (seed " + std::to_string(report.seed) + ")\n";
    auto quantity = [](const char* label, const std::optional<double>& q) {
        return q.has_value() ? std::string(" ") + label + "=" + format_short(*q) : std::string();
    };
    for (const CheckRecord& c : report.checks) {
        out += c.passed ? "[pass] " : "[FAIL] ";
        out += c.name + "  rho=" + c.rho;
        if (c.mu.has_value()) out += "  mu=" + *c.mu;
        out += quantity("H", c.quantities.h) + quantity("I", c.quantities.i) +
               quantity("F", c.quantities.f) + quantity("W", c.quantities.w);
        if (!c.margins.empty()) {
            out += "  margins=";
            for (std::size_t i = 0; i < c.margins.size(); ++i) {
                if (i > 0) out += ';';
                out += format_short(c.margins[i]);
            }
        }
        if (!c.case_label.empty()) out += "  case=" + c.case_label;
        out += '\n';
    }
    const ReportSummary s = report.summary();
    out += "total=" + std::to_string(s.total) + " passed=" + std::to_string(s.passed) +
           " failed=" + std::to_string(s.failed) + "\n";
    return out;
}

}  // namespace entrobound
