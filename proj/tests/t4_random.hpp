#pragma once

#include <random>

#include "stratree/t4space.hpp"

// Random T4 points: origin, axis points and quadrant points in fixed proportions.
inline stratree::T4Point random_t4_point(std::mt19937_64& rng, double reach = 2.0) {
  using namespace stratree;
  static const auto quads = enumerate_quadrants();
  std::uniform_real_distribution<double> len(0.0, reach);
  const auto kind = rng() % 10;
  if (kind == 0) return T4Point{};
  if (kind <= 2) return T4Point::make({{Split::from_index(static_cast<int>(rng() % 10)), len(rng)}});
  const auto& q = quads[rng() % quads.size()];
  // Keep the point inside a disk of radius `reach`.
  const double r = reach * std::sqrt(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  const double phi = std::uniform_real_distribution<double>(0.0, 1.5707963267948966)(rng);
  return T4Point::make({{q.first, r * std::cos(phi)}, {q.second, r * std::sin(phi)}});
}
