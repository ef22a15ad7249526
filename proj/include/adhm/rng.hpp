#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace adhm {

// Deterministic Gaussian stream.  std::normal_distribution is
// implementation-defined, so we roll Box-Muller on top of mt19937_64 to get
// the same bits on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // 53 random bits in [0,1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // Unit-variance complex Gaussian: E|z|^2 = 1.
    std::complex<double> cgaussian() {
        const double s = 0.7071067811865476;  // 1/sqrt(2)
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace adhm
