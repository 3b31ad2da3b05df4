#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "jacobi/cli.hpp"

namespace jacobi::cli {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v))
        throw SchemaError("line " + std::to_string(line_no) + ": not a finite number '" + s + "'");
    return v;
}

}  // namespace

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i, v >>= 4) buf[i] = digits[v & 15];
    buf[16] = '\0';
    return buf;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
    (void)ec;
    return std::string(buf, ptr);
}

Table read_samples(const std::filesystem::path& path, const std::string& x_name) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    Table t;
    t.x_name = x_name;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto cells = split(s);
        if (!header) {
            if (cells.size() != 3 || cells[0] != x_name || cells[1] != "re" || cells[2] != "im")
                throw SchemaError(path.string() + ": expected header '" + x_name + ",re,im'");
            header = true;
            continue;
        }
        if (cells.size() != 3) throw SchemaError("line " + std::to_string(line_no) + ": expected 3 columns");
        t.x.push_back(parse_double(cells[0], line_no));
        t.y.emplace_back(parse_double(cells[1], line_no), parse_double(cells[2], line_no));
    }
    if (!header) throw SchemaError(path.string() + ": missing header");
    if (t.x.empty()) throw SchemaError(path.string() + ": no data rows");
    return t;
}

std::vector<cplx> resample(const Table& t, const std::vector<double>& nodes) {
    const std::size_t n = t.x.size();
    if (n == nodes.size()) {
        bool same = true;
        for (std::size_t i = 0; i < n && same; ++i)
            same = std::abs(t.x[i] - nodes[i]) <= 1e-12 * std::max(1.0, std::abs(nodes[i]));
        if (same) return t.y;
    }
    if (n < 4) throw SchemaError("need at least 4 samples to interpolate onto the grid");
    if (t.x.front() < 0.0) throw SchemaError(t.x_name + " must be >= 0");
    for (std::size_t i = 1; i < n; ++i)
        if (!(t.x[i] > t.x[i - 1])) throw SchemaError(t.x_name + " must be strictly increasing");
    // even reflection supplies the points left of the first sample
    std::vector<double> x;
    std::vector<cplx> y;
    const std::size_t skip = t.x.front() == 0.0 ? 1 : 0;
    for (std::size_t k = 3 + skip; k-- > skip;) {
        x.push_back(-t.x[k]);
        y.push_back(t.y[k]);
    }
    x.insert(x.end(), t.x.begin(), t.x.end());
    y.insert(y.end(), t.y.begin(), t.y.end());
    std::vector<cplx> out(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double z = nodes[i];
        if (z > t.x.back()) continue;
        std::size_t j = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), z) - x.begin());
        std::size_t lo = j >= 2 ? j - 2 : 0;
        lo = std::min(lo, x.size() - 4);
        cplx s = 0.0;
        for (std::size_t a = lo; a < lo + 4; ++a) {
            double w = 1.0;
            for (std::size_t b = lo; b < lo + 4; ++b)
                if (b != a) w *= (z - x[b]) / (x[a] - x[b]);
            s += w * y[a];
        }
        out[i] = s;
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SchemaError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw SchemaError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace jacobi::cli
