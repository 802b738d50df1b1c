#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edgeplace/types.hpp"

namespace edgeplace {

// Two-player game in payoff (maximization) form. payoff_a is the row player's
// matrix, payoff_b the column player's; both finite, same shape.
struct BimatrixGame {
  Eigen::MatrixXd payoff_a;
  Eigen::MatrixXd payoff_b;
};

struct MixedEquilibrium {
  Eigen::VectorXd row_probs;
  Eigen::VectorXd col_probs;
  double row_payoff = 0.0;
  double col_payoff = 0.0;
  std::vector<int> row_support;
  std::vector<int> col_support;
};

struct SupportEnumerationResult {
  std::vector<MixedEquilibrium> equilibria;  // support-lexicographic order
  bool degenerate = false;
  // supports at which extra best responses / solution families were detected
  std::vector<std::pair<std::vector<int>, std::vector<int>>> degenerate_supports;
};

// Classical equal-size support enumeration: for every support pair solve the
// indifference systems, keep solutions with nonnegative probabilities where
// no pure strategy outside the support does better (tolerance 1e-9).
// Degeneracy (more best responses than the support size, or an indifference
// system with a solution family) is flagged, not thrown.
SupportEnumerationResult support_enumeration(const BimatrixGame& game);

// Extract one upstream/downstream pair as a bimatrix game, everything else
// ignored: payoffs are negated own energy; the downstream's includes the
// connecting dataflow priced against the row player's device. Strategies are
// each side's feasible (registry, device) pairs in the usual order; cache
// mode is the scenario default.
BimatrixGame pairwise_game(const Scenario& scenario, const std::string& up_id,
                           const std::string& down_id);

}  // namespace edgeplace
