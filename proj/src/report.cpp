#include "mcalc/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mcalc/errors.hpp"

namespace mcalc {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
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
    return out;
}

void append_string_array(std::string& out, const std::vector<std::string>& items) {
    out += '[';
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += '"';
        out += json_escape(items[i]);
        out += '"';
    }
    out += ']';
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json(const std::vector<VerificationReport>& reports, const RunMetadata& meta) {
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.pass ? 1 : 0;

    std::string out;
    out.reserve(reports.size() * 256 + 512);
    out += "{\n  \"tool\": \"mcalc\",\n  \"seed\": ";
    out += std::to_string(meta.seed);
    out += ",\n  \"suites\": ";
    append_string_array(out, meta.suites);
    out += ",\n  \"manifolds\": ";
    append_string_array(out, meta.manifolds);
    out += ",\n  \"summary\": {\"entries\": ";
    out += std::to_string(reports.size());
    out += ", \"passed\": ";
    out += std::to_string(passed);
    out += ", \"failed\": ";
    out += std::to_string(reports.size() - passed);
    out += "},\n  \"entries\": [\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        out += "    {\"identity\": \"";
        out += json_escape(r.identity);
        out += "\", \"instance\": \"";
        out += json_escape(r.instance);
        out += "\", \"instance_hash\": \"";
        out += r.instance_hash();
        out += "\", \"lhs\": ";
        out += format_g17(r.lhs);
        out += ", \"rhs\": ";
        out += format_g17(r.rhs);
        out += ", \"residual\": ";
        out += format_g17(r.residual);
        out += ", \"tolerance\": ";
        out += format_g17(r.tolerance);
        out += ", \"pass\": ";
        out += r.pass ? "true" : "false";
        if (!r.diagnostic.empty()) {
            out += ", \"diagnostic\": \"";
            out += json_escape(r.diagnostic);
            out += '"';
        }
        if (!r.ladder.empty()) {
            out += ", \"ladder\": [";
            for (std::size_t k = 0; k < r.ladder.size(); ++k) {
                if (k) out += ',';
                out += format_g17(r.ladder[k]);
            }
            out += ']';
        }
        out += i + 1 < reports.size() ? "},\n" : "}\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string to_csv(const std::vector<VerificationReport>& reports) {
    std::string out = "identity,instance,lhs,rhs,residual,tolerance,pass\n";
    for (const auto& r : reports) {
        out += r.identity;
        out += ',';
        out += r.instance_hash();
        out += ',';
        out += format_g17(r.lhs);
        out += ',';
        out += format_g17(r.rhs);
        out += ',';
        out += format_g17(r.residual);
        out += ',';
        out += format_g17(r.tolerance);
        out += ',';
        out += r.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

void emit_report(const std::vector<VerificationReport>& reports, const RunMetadata& meta,
                 const std::string& path, ReportFormat format) {
    if (reports.empty()) throw input_error("emit_report: nothing to report");
    std::string body = format == ReportFormat::Json ? to_json(reports, meta) : to_csv(reports);
    if (path.empty()) {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("emit_report: cannot open '" + path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw input_error("emit_report: failed writing '" + path + "'");
}

}  // namespace mcalc
