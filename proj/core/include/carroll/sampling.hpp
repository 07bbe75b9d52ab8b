#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "carroll/chart.hpp"

namespace carroll {

// Radical-inverse of `index` in the given base, in (0,1) for index >= 1.
double halton(std::uint64_t index, int base);

// Deterministic quasi-random interior points: sample j uses Halton index
// seed + j + 1 with one prime base per axis. Reports quote (count, seed), so
// identical parameters reproduce identical samples.
std::vector<Eigen::VectorXd> halton_points(const Chart& chart, int count, std::uint64_t seed);

}  // namespace carroll
