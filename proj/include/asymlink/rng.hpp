#pragma once

#include <cstdint>
#include <random>

#include "asymlink/vec.hpp"

namespace asymlink {

/// Counter-keyed RNG stream: results depend only on (seed, stream), never on
/// how many other streams exist or in which order they are drawn from.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : eng_(mix(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream + 0x632be59bd9b4e019ull))) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0,1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        // Box-Muller, spare cached.
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    Vec uniform_box(const Vec& lo, const Vec& hi) {
        Vec x(lo.dim());
        for (int i = 0; i < lo.dim(); ++i) x[i] = uniform(lo[i], hi[i]);
        return x;
    }

    /// Uniform direction on S^{n-1}.
    Vec unit_vector(int n) {
        Vec u(n);
        double r2 = 0.0;
        do {
            for (int i = 0; i < n; ++i) u[i] = gaussian();
            r2 = u.norm2();
        } while (r2 == 0.0);
        return u * (1.0 / std::sqrt(r2));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace asymlink
