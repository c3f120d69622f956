#pragma once

// String ids for the kernel zoo, used by the command-line front end:
//   haar | gm:<alpha> | poisson-q:<dim> | riesz-diff:<alpha>:ball[:<dim>]
//   | sgn-diff:ball | band:<lo>:<hi>[:<dim>]

#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/kernels.hpp"

namespace lpkit {

class unknown_kernel : public kernel_error {
public:
    using kernel_error::kernel_error;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_number(const std::string& s, const std::string& id) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw unknown_kernel("bad number '" + s + "' in kernel id '" + id + "'");
    return v;
}

inline int parse_dim(const std::string& s, const std::string& id) {
    if (s == "1") return 1;
    if (s == "2") return 2;
    throw unknown_kernel("bad dimension '" + s + "' in kernel id '" + id + "'");
}

inline AveragingProfile parse_profile(const std::string& name, int dim, const std::string& id) {
    if (name == "ball") return make_ball_average(dim);
    throw unknown_kernel("unknown averaging profile '" + name + "' in kernel id '" + id + "'");
}

}  // namespace detail

inline AveragingProfile profile_from_id(const std::string& name, int dim) {
    return detail::parse_profile(name, dim, name);
}

inline Kernel kernel_from_id(const std::string& id) {
    const auto parts = detail::split(id, ':');
    const std::string& head = parts[0];
    if (head == "haar" && parts.size() == 1) return make_haar();
    if (head == "gm" && parts.size() == 2)
        return make_gen_marcinkiewicz(detail::parse_number(parts[1], id));
    if (head == "poisson-q" && parts.size() <= 2)
        return make_poisson_deriv(parts.size() == 2 ? detail::parse_dim(parts[1], id) : 1);
    if (head == "riesz-diff" && (parts.size() == 3 || parts.size() == 4)) {
        const int dim = parts.size() == 4 ? detail::parse_dim(parts[3], id) : 1;
        return make_riesz_diff(detail::parse_number(parts[1], id),
                               detail::parse_profile(parts[2], dim, id));
    }
    if (head == "sgn-diff" && parts.size() == 2)
        return make_sgn_diff(detail::parse_profile(parts[1], 1, id));
    if (head == "band" && (parts.size() == 3 || parts.size() == 4)) {
        const int dim = parts.size() == 4 ? detail::parse_dim(parts[3], id) : 1;
        return make_fourier_band(dim, detail::parse_number(parts[1], id),
                                 detail::parse_number(parts[2], id));
    }
    throw unknown_kernel("unknown kernel id '" + id + "'");
}

}  // namespace lpkit
