#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgflab/format.hpp"
#include "mgflab/mgf.hpp"

namespace mgflab {

namespace grid_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

inline double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed " + what + ": '" + s + "'");
    }
}

}  // namespace grid_detail

/// Grid syntax `lo:hi:count`: count equispaced points, endpoints included.
inline std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = grid_detail::split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("malformed grid '" + spec + "', expected lo:hi:count");
    const double lo = grid_detail::to_double(parts[0], "grid bound");
    const double hi = grid_detail::to_double(parts[1], "grid bound");
    const double cnt = grid_detail::to_double(parts[2], "grid count");
    const int count = static_cast<int>(cnt);
    if (count < 1 || static_cast<double>(count) != cnt)
        throw std::invalid_argument("malformed grid '" + spec + "', count must be a positive integer");
    if (count == 1) {
        if (lo != hi) throw std::invalid_argument("grid '" + spec + "': single point needs lo == hi");
        return {lo};
    }
    if (!(lo < hi)) throw std::invalid_argument("grid '" + spec + "': lo must be less than hi");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        out[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / (count - 1);
    out.back() = hi;
    return out;
}

/// n-set syntax: comma list of positive integers, or
/// `logspace:lo:hi:count` rounded to integers and deduplicated.
inline std::vector<int> parse_n_set(const std::string& spec) {
    std::vector<int> out;
    if (spec.rfind("logspace:", 0) == 0) {
        const auto parts = grid_detail::split(spec, ':');
        if (parts.size() != 4)
            throw std::invalid_argument("malformed n-set '" + spec + "', expected logspace:lo:hi:count");
        const double lo = grid_detail::to_double(parts[1], "n-set bound");
        const double hi = grid_detail::to_double(parts[2], "n-set bound");
        const int count = static_cast<int>(grid_detail::to_double(parts[3], "n-set count"));
        if (!(lo >= 1.0) || !(hi >= lo) || count < 1)
            throw std::invalid_argument("malformed n-set '" + spec + "'");
        for (int k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
            out.push_back(static_cast<int>(std::lround(lo * std::pow(hi / lo, f))));
        }
    } else {
        for (const auto& tok : grid_detail::split(spec, ',')) {
            const double v = grid_detail::to_double(tok, "n value");
            const int n = static_cast<int>(v);
            if (n < 1 || static_cast<double>(n) != v)
                throw std::invalid_argument("n-set entries must be positive integers: '" + tok + "'");
            out.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw std::invalid_argument("empty n-set '" + spec + "'");
    return out;
}

/// Interval syntax `a,b` with a < b.
inline Interval parse_interval(const std::string& spec) {
    const auto parts = grid_detail::split(spec, ',');
    if (parts.size() != 2) throw std::invalid_argument("malformed interval '" + spec + "', expected a,b");
    Interval iv{grid_detail::to_double(parts[0], "interval bound"),
                grid_detail::to_double(parts[1], "interval bound")};
    iv.validate();
    return iv;
}

/// `count` equispaced interior points of (a, b); never includes endpoints.
inline std::vector<double> interior_grid(const Interval& iv, int count) {
    iv.validate();
    if (count < 1) throw std::invalid_argument("interior_grid: count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k)
        out[static_cast<std::size_t>(k - 1)] =
            iv.a + (iv.b - iv.a) * static_cast<double>(k) / (count + 1);
    return out;
}

}  // namespace mgflab
