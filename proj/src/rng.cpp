#include "nngof/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nngof {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id) {
    std::uint64_t x = seed ^ 0xA3EC4E9CD2C5E3B1ull;
    std::uint64_t a = splitmix64(x);
    x ^= id + 0x9E3779B97F4A7C15ull;
    std::uint64_t b = splitmix64(x);
    x = a ^ rotl(b, 23);
    return splitmix64(x);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
}

RngStream RngStream::substream(std::uint64_t id) const {
    return RngStream(derive_seed(seed_, id));
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256**
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_double() {
    // 53-bit mantissa, offset by half an ulp so the value is never 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double standard_normal(RngStream& rng) {
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

void fill_standard_normal(RngStream& rng, double* out, std::size_t n) {
    std::size_t i = 0;
    while (i + 1 < n) {
        const double u1 = rng.next_double();
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = r * std::cos(kTwoPi * u2);
        out[i + 1] = r * std::sin(kTwoPi * u2);
        i += 2;
    }
    if (i < n) out[i] = standard_normal(rng);
}

namespace {

// Marsaglia-Tsang squeeze/rejection, valid for shape >= 1.
double gamma_shape_ge1(double shape, RngStream& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_double();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double sample_gamma(double shape, RngStream& rng) {
    return std::exp(sample_log_gamma_variate(shape, rng));
}

double sample_log_gamma_variate(double shape, RngStream& rng) {
    if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
    if (shape >= 1.0) return std::log(gamma_shape_ge1(shape, rng));
    // Boost through Gamma(shape+1) with a uniform-power correction; combining
    // in log space keeps tiny shapes from underflowing to zero.
    const double g = gamma_shape_ge1(shape + 1.0, rng);
    const double u = rng.next_double();
    return std::log(g) + std::log(u) / shape;
}

double sample_chi_square(double dof, RngStream& rng) {
    return 2.0 * sample_gamma(0.5 * dof, rng);
}

}  // namespace nngof
