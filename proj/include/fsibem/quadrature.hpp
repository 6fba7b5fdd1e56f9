#pragma once

#include <vector>

#include "fsibem/types.hpp"

namespace fsibem {

// Nodes and weights on [0, 1].
struct Rule1D {
  std::vector<real> x, w;
  int size() const { return int(x.size()); }
};

Rule1D gauss_legendre(int q);

// Gauss rule for the weight ln(1/t) on [0, 1]; q in 4..16.
Rule1D gauss_log_rule(int q);

// Composite Gauss rule on [0, 1], cells geometrically graded towards 0.
Rule1D graded_rule(int q, int levels, real sigma);

struct QuadratureOptions {
  int order = 8;         // Gauss order for separated panel pairs
  int singular_order = 10;
  int levels = 30;       // geometric cells towards a singular point
  real grading = 0.35;   // cell ratio
};

// Panel-pair rules on [0,1]^2 in (s, t) = (test, trial) local coordinates.
// For singular kinds, a and b carry the same points measured from the singular set without
// cancellation: coincident a = s - t; adjacent a, b = distances to the shared node.
struct PairRule {
  std::vector<real> s, t, w;
  std::vector<real> a, b;
  int size() const { return int(s.size()); }
};

enum class PairKind { separated, coincident, adjacent_next, adjacent_prev };

// adjacent_next: trial panel follows the test panel (shared node at s = 1, t = 0);
// adjacent_prev: trial panel precedes it (shared node at s = 0, t = 1).
PairRule pair_rule(PairKind kind, const QuadratureOptions& opt);

}  // namespace fsibem
