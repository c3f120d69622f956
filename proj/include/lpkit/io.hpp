#pragma once

// Serialization: SampledField as CSV or flat binary, symbol tables, and JSON
// forms of the experiment reports.
//
// Binary layout (little-endian): "LPKF", u32 dim, u64 N, f64 L, then N^dim
// (re, im) pairs of f64 in row-major order.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpkit/conditions.hpp"
#include "lpkit/grid.hpp"
#include "lpkit/multiplier.hpp"
#include "lpkit/sobolev.hpp"

namespace lpkit {

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw io_error("truncated field file");
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

inline void write_field_binary(std::ostream& os, const SampledField& f) {
    os.write("LPKF", 4);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim));
    detail::put_le<std::uint64_t>(os, f.grid.n);
    detail::put_le<double>(os, f.grid.half_length);
    for (const auto& z : f.values) {
        detail::put_le<double>(os, z.real());
        detail::put_le<double>(os, z.imag());
    }
}

inline SampledField read_field_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "LPKF", 4) != 0) throw io_error("not a field file (bad magic)");
    const auto dim = detail::get_le<std::uint32_t>(is);
    const auto n = detail::get_le<std::uint64_t>(is);
    const auto L = detail::get_le<double>(is);
    SampledField f(Grid(static_cast<int>(dim), static_cast<std::size_t>(n), L));
    for (auto& z : f.values) {
        const double re = detail::get_le<double>(is);
        const double im = detail::get_le<double>(is);
        z = {re, im};
    }
    f.check_finite();
    return f;
}

/// "# dim=.. n=.. L=.." then index,re,im rows.
inline void write_field_csv(std::ostream& os, const SampledField& f) {
    os << "# dim=" << f.grid.dim << " n=" << f.grid.n << " L=" << detail::fmt(f.grid.half_length) << "\n";
    os << "index,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        os << i << "," << detail::fmt(f.values[i].real()) << "," << detail::fmt(f.values[i].imag()) << "\n";
}

inline SampledField read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw io_error("missing field CSV header");
    int dim = 0;
    std::size_t n = 0;
    double L = 0.0;
    {
        std::istringstream hs(line.substr(2));
        std::string tok;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
            if (k == "dim") dim = std::stoi(v);
            else if (k == "n") n = std::stoul(v);
            else if (k == "L") L = std::stod(v);
        }
    }
    SampledField f(Grid(dim, n, L));
    std::getline(is, line);  // column names
    std::size_t seen = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::string a, b, c;
        if (!std::getline(rs, a, ',') || !std::getline(rs, b, ',') || !std::getline(rs, c))
            throw io_error("malformed field CSV row: " + line);
        const std::size_t idx = std::stoul(a);
        if (idx >= f.size()) throw io_error("field CSV index out of range: " + a);
        f.values[idx] = {std::stod(b), std::stod(c)};
        ++seen;
    }
    if (seen != f.size()) throw io_error("field CSV has " + std::to_string(seen) + " rows, expected " +
                                         std::to_string(f.size()));
    f.check_finite();
    return f;
}

inline void save_field(const std::string& path, const SampledField& f) {
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    std::ofstream os(path, csv ? std::ios::out : std::ios::binary);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    if (csv) write_field_csv(os, f);
    else write_field_binary(os, f);
    if (!os) throw io_error("write failed for '" + path + "'");
}

inline SampledField load_field(const std::string& path) {
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    std::ifstream is(path, csv ? std::ios::in : std::ios::binary);
    if (!is) throw io_error("cannot open '" + path + "' for reading");
    return csv ? read_field_csv(is) : read_field_binary(is);
}

/// xi,re,im rows at the given frequencies (1-D) or xi0,xi1,re,im (2-D).
inline void write_symbol_csv(std::ostream& os, const Symbol& m, const std::vector<Vec>& freqs) {
    os << (m.dim == 1 ? "xi,re,im\n" : "xi0,xi1,re,im\n");
    for (const Vec& xi : freqs) {
        const cplx v = m(xi);
        os << detail::fmt(xi[0]);
        if (m.dim == 2) os << "," << detail::fmt(xi[1]);
        os << "," << detail::fmt(v.real()) << "," << detail::fmt(v.imag()) << "\n";
    }
}

using json = nlohmann::ordered_json;

/// JSON number, or null for non-finite values.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const RatioReport& r) {
    json ratios = json::array();
    for (double v : r.ratios) ratios.push_back(num(v));
    json j;
    j["operator"] = r.op;
    j["p"] = r.p;
    j["weight"] = r.weight;
    j["members"] = r.members;
    j["ratios"] = ratios;
    j["min"] = num(r.min);
    j["max"] = num(r.max);
    j["spread"] = num(r.spread);
    if (!r.skipped.empty()) j["skipped"] = r.skipped;
    return j;
}

inline json to_json(const ScanReport& r) {
    json j;
    j["alpha"] = r.alpha;
    j["max_ratio"] = num(r.max_ratio);
    j["argmax"] = {{"x", r.argmax.x}, {"y", r.argmax.y}};
    j["refinement_delta"] = num(r.refinement_delta);
    j["pass"] = r.pass;
    j["refined_max_ratio"] = num(r.refined_max);
    j["points"] = r.points;
    return j;
}

inline json to_json(const QuantityReport& q) {
    json j;
    j["value"] = num(q.value);
    j["finite"] = q.finite;
    if (!q.note.empty()) j["note"] = q.note;
    return j;
}

inline json to_json(const DecayCheck& d) {
    return {{"c_est", num(d.c_est)}, {"c_refined", num(d.c_refined)}, {"pass", d.pass}};
}

inline json to_json(const NondegReport& r) {
    return {{"min_value", num(r.min_value)}, {"argmin", {r.argmin[0], r.argmin[1]}}, {"pass", r.pass}};
}

inline json to_json(const MomentReport& r) {
    json moments = json::array();
    for (const auto& m : r.moments)
        moments.push_back({{"gamma", {m.exponents[0], m.exponents[1]}}, {"value", num(m.value)}});
    json j{{"pass", r.pass}, {"mass", num(r.mass)}, {"order", r.order}, {"moments", moments}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

}  // namespace lpkit
