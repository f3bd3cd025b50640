#include "poincare/quadrature.hpp"

namespace poincare {

double Quadrature::total_weight() const {
  CompensatedSum s;
  for (double w : weights) s += w;
  return s.value();
}

Quadrature PolarGrid::quadrature() const {
  Quadrature q;
  q.nodes.reserve(size());
  q.weights.reserve(size());
  for (std::size_t i = 0; i < radial; ++i)
    for (std::size_t j = 0; j < angular; ++j) {
      q.nodes.push_back(node(i, j));
      q.weights.push_back(radial_weight(i) * angular_weight());
    }
  return q;
}

}  // namespace poincare
