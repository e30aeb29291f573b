#pragma once

#include <cstdint>
#include <string_view>

namespace advscen {

/// Deterministic, splittable random stream (xoshiro256++ core).
///
/// Identical seed + identical split labels give identical draws on every
/// platform; nothing here depends on libstdc++ distribution internals.
/// Splitting derives a child seed from the parent's root seed and the label,
/// so split order does not matter and parents stay usable after splitting.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    RandomSource split(std::string_view label) const;
    RandomSource split(std::uint64_t label) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    int uniform_int(int lo, int hi);        // inclusive on both ends
    double normal();                        // standard normal, Box-Muller

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
    double spare_{0};
    bool has_spare_{false};
};

}  // namespace advscen
