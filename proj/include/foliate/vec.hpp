#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliate {

// Coordinate vector in some chart; plain storage, helpers below.
using Vec = std::vector<double>;

using Predicate = std::function<bool(const Vec&)>;
using VecMap = std::function<Vec(const Vec&)>;

inline double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }

inline double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// splitmix64-based RNG. Deterministic across platforms, unlike the
// distributions in <random>, which matters for byte-identical reports.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    Vec uniform_vec(std::size_t dim, double lo, double hi) {
        Vec v(dim);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    // Child stream keyed by stage name; adding a stage never perturbs others.
    Rng child(const std::string& stage) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : stage) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return Rng(state_ ^ h);
    }

private:
    std::uint64_t state_;
};

}  // namespace foliate
