#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tailscan {

// splitmix64 step; also used as the seed mixer for derived streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over a tag, folded into a seed. Fixed scheme so every scenario and
// worker stream is reproducible from the root seed alone.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                																std::uint64_t stream = 0) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::uint64_t s = root ^ h;
    std::uint64_t mixed = splitmix64(s);
    s ^= stream + 0x9e3779b97f4a7c15ULL;
    return mixed ^ splitmix64(s);
}

// Deterministic draws on top of mt19937_64; distributions are hand-rolled so
// output is identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on the open interval (0,1).
    double uniform01() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double laplace(double scale) {
        const double u = uniform01() - 0.5;
        const double s = (u < 0.0) ? -1.0 : 1.0;
        return -scale * s * std::log1p(-2.0 * std::fabs(u));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Knuth's product method; fine for the moderate rates used here.
    int poisson(double lambda) {
        const double limit = std::exp(-lambda);
        int k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace tailscan
