#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mcalc {

std::uint64_t fnv1a64(std::string_view bytes);

// Deterministic random source for seeded suites.  Every draw reduces to the
// mt19937_64 bit stream through the fixed mappings below, so sequences are
// reproducible across platforms and standard libraries (std::*_distribution
// is implementation-defined and deliberately avoided).
class SeededRng {
 public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return gen_(); }

    // 53-bit mantissa mapping of one 64-bit draw onto [0,1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Integer in [lo,hi]; the 2^-53 scaling bias is irrelevant at suite scale.
    int uniform_int(int lo, int hi);

    // Box-Muller on two uniform01 draws.
    double gaussian();

    // Uniform on the unit sphere of R^dim via normalized gaussians.
    std::vector<double> unit_vector(int dim);

    // Independent child stream: the label is hashed into the seed, so adding
    // a suite never shifts the draws of another.
    SeededRng fork(std::string_view label) const { return SeededRng(seed_ ^ fnv1a64(label)); }

 private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace mcalc
