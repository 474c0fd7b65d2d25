#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams (Philox 4x32-10).  A stream is addressed by
// (seed, stream id); draws within a stream are a pure function of the draw
// counter, so any replicate can be generated independently of scheduling.

namespace rpp::rng {

namespace detail {

inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

struct Block {
    std::uint32_t v[4];
};

inline Block philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                        std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c0, hi0, lo0);
        mulhilo(kMul1, c2, hi1, lo1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        c0 = n0;
        c1 = lo1;
        c2 = n2;
        c3 = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return Block{{c0, c1, c2, c3}};
}

// 64 -> 64 bit finalizer, used to derive stream keys from tags.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

// FNV-1a, used to hash experiment names into stream tags and configs into ids.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xCBF29CE484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::uint64_t fnv1a_str(const char* s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (; *s; ++s) {
        h ^= static_cast<unsigned char>(*s);
        h *= 0x100000001B3ull;
    }
    return h;
}

class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : ctr_(0), have_(0), cached_normal_(false), normal_value_(0.0) {
        const std::uint64_t k = detail::mix64(seed ^ detail::mix64(stream_id));
        key0_ = static_cast<std::uint32_t>(k);
        key1_ = static_cast<std::uint32_t>(k >> 32);
        sid0_ = static_cast<std::uint32_t>(stream_id);
        sid1_ = static_cast<std::uint32_t>(stream_id >> 32);
    }

    std::uint32_t next_u32() {
        if (have_ == 0) {
            const auto b = detail::philox4x32(static_cast<std::uint32_t>(ctr_),
                                              static_cast<std::uint32_t>(ctr_ >> 32),
                                              sid0_, sid1_, key0_, key1_);
            ++ctr_;
            buf_[0] = b.v[0];
            buf_[1] = b.v[1];
            buf_[2] = b.v[2];
            buf_[3] = b.v[3];
            have_ = 4;
        }
        return buf_[--have_];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1], for safe logs.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; caches the second variate.
    double normal() {
        if (cached_normal_) {
            cached_normal_ = false;
            return normal_value_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        normal_value_ = r * std::sin(a);
        cached_normal_ = true;
        return r * std::cos(a);
    }

    // Exact Poisson sampling: multiplicative inversion for small mean,
    // transformed rejection (Hoermann's PTRS) for large mean.
    long poisson(double mu) {
        if (mu <= 0.0) return 0;
        if (mu < 10.0) {
            const double limit = std::exp(-mu);
            long k = 0;
            double prod = uniform_pos();
            while (prod > limit) {
                ++k;
                prod *= uniform_pos();
            }
            return k;
        }
        const double smu = std::sqrt(mu);
        const double b = 0.931 + 2.53 * smu;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mu = std::log(mu);
        for (;;) {
            const double u = uniform() - 0.5;
            const double v = uniform_pos();
            const double us = 0.5 - std::fabs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                kf * log_mu - mu - std::lgamma(kf + 1.0)) {
                return static_cast<long>(kf);
            }
        }
    }

  private:
    std::uint32_t key0_, key1_, sid0_, sid1_;
    std::uint64_t ctr_;
    std::uint32_t buf_[4];
    int have_;
    bool cached_normal_;
    double normal_value_;
};

} // namespace rpp::rng
