#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace refrule {

// Counter-mixing from the splitmix64 reference implementation. Used to turn
// (root seed, stream index) pairs into well-separated mt19937_64 seeds so
// that per-replication streams are independent of scheduling order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // Stream `index` of the generator family rooted at `root_seed`. Distinct
    // indices give streams that behave as independent; the mapping is pure,
    // so results never depend on which thread runs which stream.
    static Rng stream(std::uint64_t root_seed, std::uint64_t index) {
        return Rng(splitmix64(root_seed) ^ splitmix64(index + 0x51ed2701a9e3c6dbULL));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0,1) with 53 random bits. Bypasses
    // std::uniform_real_distribution so sequences are identical across
    // standard library implementations.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double normal(double mean, double sd) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        // Box-Muller; u1 shifted into (0,1] so the log is finite.
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return mean + sd * r * std::cos(theta);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace refrule
