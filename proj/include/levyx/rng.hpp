#pragma once

#include <cmath>
#include <cstdint>

namespace levyx {

// Per-path stream: xoshiro256++ seeded through splitmix64 from (seed, path).
// Path draws are independent of thread layout, so seeded runs are
// bit-reproducible at any worker count.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (path + 1));
        for (auto& word : s_) word = splitmix64(sm);
        has_normal_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in (0,1)
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_normal_) {
            has_normal_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        has_normal_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform()); }

    // Knuth product method; fine for the small per-step means used here.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double L = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            p *= uniform();
            ++k;
        } while (p > L);
        return k - 1;
    }

    // Inverse Gaussian IG(mu, lambda) by the Michael-Schucany-Haas transform.
    double inverse_gaussian(double mu, double lambda) {
        double z = normal();
        double v = z * z;
        double w = mu + 0.5 * mu * mu * v / lambda -
                   0.5 * mu / lambda * std::sqrt(4.0 * mu * lambda * v + mu * mu * v * v);
        if (uniform() <= mu / (mu + w)) return w;
        return mu * mu / w;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_normal_ = false;
};

} // namespace levyx
