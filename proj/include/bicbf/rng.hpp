#pragma once
// Seedable, platform-independent random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard library's distributions are not portable across
// implementations, so the uniform, normal and gamma variates are generated
// here.
//
// Substreams: derive_seed(seed, label, index) mixes the three inputs with
// SplitMix64,
//
//   s0 = splitmix64(seed)
//   s1 = splitmix64(s0 ^ fnv1a64(label))
//   s2 = splitmix64(s1 ^ index)
//
// and s2 seeds the engine. Labels name the purpose of a stream ("effects",
// "noise", "oracle/A", ...) so that adding a consumer never shifts the draws
// of another.

#include <cstdint>
#include <random>
#include <string_view>

namespace bicbf {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index)
        : engine_(derive_seed(seed, label, index)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal via the Marsaglia polar method.
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the
    /// U^(1/shape) boost.
    double gamma(double shape);

    /// Inverse-Gamma(shape, scale): density proportional to x^(-shape-1) exp(-scale/x).
    double inverse_gamma(double shape, double scale) { return scale / gamma(shape); }

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bicbf
