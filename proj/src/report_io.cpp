#include "triosc/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "triosc/errors.hpp"

namespace triosc {

namespace {

void dump_rec(const Json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                out += pad;
                out += "  ";
                out += Json(it.key()).dump();  // escaped key
                out += ": ";
                dump_rec(it.value(), out, depth + 1);
                if (k + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Scalar-only arrays stay on one line; nested ones get a line
            // per element.
            bool flat = true;
            for (const auto& el : j)
                if (el.is_structured()) flat = false;
            if (flat) {
                out += '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    dump_rec(j[i], out, depth);
                }
                out += ']';
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad;
                out += "  ";
                dump_rec(j[i], out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();  // integers, booleans, strings, null
            return;
    }
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string s;
    dump_rec(j, s, 0);
    s += '\n';
    return s;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text_output(const std::string& text, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        fallback.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw NumericalError(ErrorKind::UsageError, "cannot open output file '" + path + "'");
    }
    f << text;
    if (!f.good()) {
        throw NumericalError(ErrorKind::UsageError, "failed writing output file '" + path + "'");
    }
}

}  // namespace triosc
