#include "urarq/sweep.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>

#include "urarq/errors.hpp"

namespace urarq {

namespace {

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) {
        ++used;
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

} // namespace

std::vector<double> parse_value_list(const std::string& text) {
    if (text.empty()) throw UsageError("empty value list");

    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw UsageError("range must be start:step:stop");
        }
        const double start = parse_number(parts[0]);
        const double step = parse_number(parts[1]);
        const double stop = parse_number(parts[2]);
        if (step == 0.0) throw UsageError("range step must be nonzero");
        const double span = (stop - start) / step;
        if (span < -1e-9) {
            throw UsageError("range step points away from stop");
        }
        const auto count = static_cast<std::size_t>(std::floor(span + 1e-9));
        std::vector<double> out;
        out.reserve(count + 1);
        for (std::size_t i = 0; i <= count; ++i) {
            out.push_back(start + static_cast<double>(i) * step);
        }
        return out;
    }

    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        out.push_back(parse_number(part));
    }
    return out;
}

} // namespace urarq
