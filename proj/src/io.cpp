#include "laguerre/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "laguerre/errors.hpp"

namespace laguerre {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("write failed for " + path);
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t"), e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("empty entry in list '" + s + "'");
        tok = tok.substr(b, e - b + 1);
        double x = 0.0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
            throw ConfigError("malformed number '" + tok + "' in list '" + s + "'");
        v.push_back(x);
    }
    return v;
}

}  // namespace laguerre
