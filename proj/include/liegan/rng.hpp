#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace liegan {

/// Seeded random stream with self-contained draw algorithms.
///
/// The standard distributions are implementation-defined, so Gaussian and
/// bounded-integer draws are done here by hand (Box-Muller, Lemire rejection)
/// to keep seeded runs reproducible across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal draw (Box-Muller, cached spare).
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(eng_()); // full 64-bit range
        while (true) {
            const std::uint64_t x = eng_();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * span;
            const std::uint64_t low = static_cast<std::uint64_t>(m);
            if (low < span) {
                const std::uint64_t threshold = (0 - span) % span;
                if (low < threshold) continue;
            }
            return lo + static_cast<std::int64_t>(m >> 64);
        }
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(xs[i - 1], xs[j]);
        }
    }

    /// Derived independent stream, e.g. one per shard or per sample.
    RandomStream derive(std::uint64_t salt) {
        // splitmix64 of (next engine word ^ salt) seeds the child
        std::uint64_t z = eng_() ^ (salt + 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return RandomStream(z ^ (z >> 31));
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace liegan
