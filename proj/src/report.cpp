#include "sqn/report.hpp"

#include <sstream>

namespace sqn {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string Report::render_text() const {
    std::ostringstream os;
    os << "== " << command << " ==\n";
    for (const auto& c : checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    os << (all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
    return os.str();
}

std::string Report::render_json() const {
    std::ostringstream os;
    os << "{\n  \"command\": \"" << json_escape(command) << "\",\n  \"pass\": "
       << (all_pass() ? "true" : "false") << ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        os << "    {\"name\": \"" << json_escape(checks[i].name) << "\", \"pass\": "
           << (checks[i].pass ? "true" : "false") << ", \"detail\": \""
           << json_escape(checks[i].detail) << "\"}" << (i + 1 < checks.size() ? "," : "")
           << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

}  // namespace sqn
