#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace gradnorm {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// a + t*b
inline Vec add_scaled(const Vec& a, double t, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

// a*x + b*y
inline Vec lincomb(double a, const Vec& x, double b, const Vec& y) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
    return r;
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

// Deterministic PRNG (splitmix64). The standard <random> distributions are
// implementation-defined, so everything seeded — rotations, start points,
// property-test draws — goes through this to keep reruns byte-identical.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-1, 1)
    double uniform_signed() { return 2.0 * uniform() - 1.0; }

    double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Vec vector_signed(int n) {
        Vec v(static_cast<std::size_t>(n));
        for (double& x : v) x = uniform_signed();
        return v;
    }

    // Euclidean-normalized direction; resamples the (measure-zero) degenerate draw.
    Vec unit_vector(int n) {
        for (;;) {
            Vec v = vector_signed(n);
            const double r = nrm2(v);
            if (r > 1e-6) {
                for (double& x : v) x /= r;
                return v;
            }
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace gradnorm
