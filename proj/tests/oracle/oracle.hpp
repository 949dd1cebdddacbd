// Direct-definition reference implementations. Deliberately naive: no
// sorting tricks, no incremental state, nothing shared with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace oracle {

using Ranking = std::vector<std::string>;
using Grades = std::unordered_map<std::string, int>;

inline int grade_of(const Grades& g, const std::string& d) {
    const auto it = g.find(d);
    return it == g.end() ? 0 : it->second;
}

inline double precision(const Ranking& r, const Grades& g, std::size_t k, int threshold = 1) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k && i < r.size(); ++i) {
        if (grade_of(g, r[i]) >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

inline double average_precision(const Ranking& r, const Grades& g, std::size_t k, int threshold = 1) {
    std::size_t total = 0;
    for (const auto& [d, v] : g) {
        if (v >= threshold) ++total;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k && i < r.size(); ++i) {
        if (grade_of(g, r[i]) < threshold) continue;
        std::size_t above = 0;
        for (std::size_t j = 0; j <= i; ++j) {
            if (grade_of(g, r[j]) >= threshold) ++above;
        }
        sum += static_cast<double>(above) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(total);
}

inline double gain(int grade, bool exponential) {
    if (grade <= 0) return 0.0;
    return exponential ? std::pow(2.0, grade) - 1.0 : static_cast<double>(grade);
}

inline double dcg(const std::vector<int>& grades, std::size_t k, bool exponential) {
    double s = 0.0;
    for (std::size_t i = 0; i < k && i < grades.size(); ++i) {
        s += gain(grades[i], exponential) / std::log2(static_cast<double>(i) + 2.0);
    }
    return s;
}

// Ideal DCG as the maximum DCG over every ordering of the judged grades,
// found by repeatedly picking the largest remaining gain for each slot.
inline double ndcg(const Ranking& r, const Grades& g, std::size_t k, bool exponential = false) {
    std::vector<int> got;
    for (const auto& d : r) got.push_back(grade_of(g, d));
    std::vector<int> pool;
    for (const auto& [d, v] : g) pool.push_back(v);
    std::vector<int> ideal;
    std::vector<bool> used(pool.size(), false);
    for (std::size_t slot = 0; slot < pool.size(); ++slot) {
        std::size_t best = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!used[i] && (best == pool.size() || pool[i] > pool[best])) best = i;
        }
        used[best] = true;
        ideal.push_back(pool[best]);
    }
    return dcg(got, k, exponential) / dcg(ideal, k, exponential);
}

// O(n^2) tau-b straight from pair counts.
inline std::optional<double> kendall(const std::vector<double>& x, const std::vector<double>& y) {
    long p = 0, q = 0, tx = 0, ty = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue;
            if (dx == 0) {
                ++tx;
            } else if (dy == 0) {
                ++ty;
            } else if ((dx > 0) == (dy > 0)) {
                ++p;
            } else {
                ++q;
            }
        }
    }
    const double den = std::sqrt(static_cast<double>(p + q + tx) * static_cast<double>(p + q + ty));
    if (den == 0.0) return std::nullopt;
    return static_cast<double>(p - q) / den;
}

// Union list: r in order, then s's unseen documents. Pairs the first
// min(|r|, |s|) positions of both rankings.
inline std::optional<double> tau_union(const Ranking& r, const Ranking& s) {
    Ranking u = r;
    for (const auto& d : s) {
        if (std::find(u.begin(), u.end(), d) == u.end()) u.push_back(d);
    }
    auto pos = [&](const std::string& d) {
        return static_cast<double>(std::find(u.begin(), u.end(), d) - u.begin() + 1);
    };
    const std::size_t n = std::min(r.size(), s.size());
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
        x.push_back(pos(r[i]));
        y.push_back(pos(s[i]));
    }
    return kendall(x, y);
}

// Truncated RBO by direct summation; the overlap at each depth is recounted.
inline double rbo(const Ranking& r, const Ranking& s, double phi, std::size_t depth) {
    const std::size_t d = std::min(depth, std::max(r.size(), s.size()));
    double sum = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
        std::size_t overlap = 0;
        for (std::size_t a = 0; a < i && a < r.size(); ++a) {
            for (std::size_t b = 0; b < i && b < s.size(); ++b) {
                if (r[a] == s[b]) ++overlap;
            }
        }
        sum += std::pow(phi, static_cast<double>(i - 1)) * static_cast<double>(overlap) / static_cast<double>(i);
    }
    return (1.0 - phi) * sum;
}

inline double t_density(double x, double nu) {
    const double c = std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) / std::sqrt(nu * M_PI);
    return c * std::pow(1.0 + x * x / nu, -(nu + 1.0) / 2.0);
}

// Two-tailed p via composite Simpson integration of the density over [0, |t|].
inline double t_two_tailed(double t, double nu, int intervals = 20000) {
    const double a = 0.0;
    const double b = std::abs(t);
    const double h = (b - a) / intervals;
    double s = t_density(a, nu) + t_density(b, nu);
    for (int i = 1; i < intervals; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * t_density(a + i * h, nu);
    return 1.0 - 2.0 * (s * h / 3.0);
}

inline double t_cdf(double t, double nu) {
    const double half = 0.5 * (1.0 - t_two_tailed(t, nu));
    return t >= 0 ? 0.5 + half : 0.5 - half;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace oracle
