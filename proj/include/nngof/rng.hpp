#pragma once

#include <cstdint>

namespace nngof {

// Deterministic counter-seeded random stream (xoshiro256** core).
//
// Every sampling routine in the library takes an explicit stream; there is no
// global RNG state. Independent child streams are derived from the parent's
// seed material with substream(id), so a set of parallel jobs can each own a
// stream whose output does not depend on scheduling order.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    // Child stream keyed by (seed, id). Depends only on the construction
    // seed, never on how many draws were consumed.
    RngStream substream(std::uint64_t id) const;

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1).
    double next_double();

    // Uniform on [lo, hi].
    double next_uniform(double lo, double hi);

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

// Seed derivation helper used by substream(); exposed for tests.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id);

// Standard normal draw (Box-Muller).
double standard_normal(RngStream& rng);

// Fill a buffer with iid standard normals, consuming pairs of uniforms.
void fill_standard_normal(RngStream& rng, double* out, std::size_t n);

// Gamma(shape, scale 1) draw; valid for any shape > 0 including shape < 1.
double sample_gamma(double shape, RngStream& rng);

// log of a Gamma(shape, scale 1) draw. Returned in log space so small-shape
// draws that underflow double precision remain usable.
double sample_log_gamma_variate(double shape, RngStream& rng);

double sample_chi_square(double dof, RngStream& rng);

}  // namespace nngof
