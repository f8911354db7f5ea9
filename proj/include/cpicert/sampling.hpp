#pragma once

#include <array>
#include <cstdint>

namespace cpicert {

// Deterministic low-discrepancy machinery used for multi-start searches and
// positivity sweeps: Halton points in [0,1)^5 with a seed-derived
// Cranley-Patterson rotation, pushed onto S^4 through the inverse normal CDF.

double halton(std::uint64_t index, std::uint32_t base);

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.2e-9 on (0,1).
double inverse_normal_cdf(double p);

std::uint64_t splitmix64(std::uint64_t& state);

// i-th point of the seeded low-discrepancy sphere sequence. Unit 5-vector.
std::array<double, 5> sphere_sample(std::uint64_t index, std::uint64_t seed);

}  // namespace cpicert
