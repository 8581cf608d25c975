#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "pglayout/errors.hpp"

namespace pglayout {

// Worker-local xoshiro256+ state. Each parallel worker owns one of these;
// states are padded to a cache line so neighbouring workers never share one.
struct alignas(64) RngState {
    std::array<std::uint64_t, 4> s{};
    std::uint64_t worker_id = 0;

    static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t next() {
        const std::uint64_t result = s[0] + s[3];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 mantissa bits from the high end of the word
    // (the low bits of xoshiro256+ are its weakest).
    double next_uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Fair coin from the top bit.
    bool flip_coin() { return (next() >> 63) != 0; }

    // Uniform integer in [0, n). Multiply-shift reduction; the bias is
    // below n / 2^64, invisible at the sample sizes used anywhere here.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Derive an independent stream for (global_seed, worker_id): avalanche-mix the
// two words into a splitmix64 key, then iterate it to fill the 256-bit state.
inline RngState seed_worker(std::uint64_t global_seed, std::uint64_t worker_id) {
    RngState st;
    st.worker_id = worker_id;
    std::uint64_t key = global_seed ^ (0x9E3779B97F4A7C15ULL * (worker_id + 1));
    for (auto& word : st.s) word = detail::splitmix64(key);
    if ((st.s[0] | st.s[1] | st.s[2] | st.s[3]) == 0)
        st.s[0] = 0x9E3779B97F4A7C15ULL; // all-zero is a fixed point; never seed it
    return st;
}

// Stream-id domains. Different purposes draw from disjoint id ranges so that
// streams stay uncorrelated even when callers reuse one numeric seed.
namespace stream {
inline constexpr std::uint64_t init_layout = 1ULL << 62;
inline constexpr std::uint64_t sampled_stress = 1ULL << 61;
inline constexpr std::uint64_t synthetic = 1ULL << 60;
} // namespace stream

struct ZipfParams {
    std::uint64_t n = 1;  // support [1, n]
    double theta = 1.0;   // exponent > 0; pmf(k) proportional to k^-theta
};

// Zipf sampler over [1, n] by rejection inversion of the integral of the
// unnormalised density (Apache Commons Math approach). O(1) expected draws
// per sample, no O(n) tables, any theta > 0.
class ZipfSampler {
public:
    explicit ZipfSampler(ZipfParams p) : n_(p.n), theta_(p.theta) {
        if (p.n < 1) throw InvalidParameter("zipf support must be non-empty");
        if (!(p.theta > 0.0) || !std::isfinite(p.theta))
            throw InvalidParameter("zipf exponent must be positive and finite");
        h_integral_x1_ = h_integral(1.5) - 1.0;
        h_integral_n_ = h_integral(static_cast<double>(n_) + 0.5);
        s_ = 2.0 - h_integral_inverse(h_integral(2.5) - h(2.0));
    }

    std::uint64_t n() const { return n_; }
    double theta() const { return theta_; }

    std::uint64_t sample(RngState& rng) const {
        if (n_ == 1) return 1;
        for (;;) {
            const double u = h_integral_n_ +
                rng.next_uniform() * (h_integral_x1_ - h_integral_n_);
            const double x = h_integral_inverse(u);
            std::uint64_t k = static_cast<std::uint64_t>(x + 0.5);
            if (k < 1)
                k = 1;
            else if (k > n_)
                k = n_;
            const double kd = static_cast<double>(k);
            if (kd - x <= s_ || u >= h_integral(kd + 0.5) - h(kd)) return k;
        }
    }

private:
    // H(x) = integral of h(t) dt with h(t) = t^-theta, continued through the
    // theta = 1 singularity via the expm1/log1p helpers.
    double h_integral(double x) const {
        const double log_x = std::log(x);
        return helper2((1.0 - theta_) * log_x) * log_x;
    }

    double h(double x) const { return std::exp(-theta_ * std::log(x)); }

    double h_integral_inverse(double x) const {
        double t = x * (1.0 - theta_);
        if (t < -1.0) t = -1.0; // clamp rounding spill just left of the pole
        return std::exp(helper1(t) * x);
    }

    // log1p(x)/x and expm1(x)/x with series fallbacks at tiny |x|.
    static double helper1(double x) {
        if (std::abs(x) > 1e-8) return std::log1p(x) / x;
        return 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x));
    }

    static double helper2(double x) {
        if (std::abs(x) > 1e-8) return std::expm1(x) / x;
        return 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x));
    }

    std::uint64_t n_;
    double theta_;
    double h_integral_x1_ = 0.0;
    double h_integral_n_ = 0.0;
    double s_ = 0.0;
};

// One-shot convenience form; hot paths should construct the sampler once.
inline std::uint64_t zipf_sample(RngState& rng, ZipfParams params) {
    return ZipfSampler(params).sample(rng);
}

} // namespace pglayout
