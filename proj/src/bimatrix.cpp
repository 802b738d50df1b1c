#include "edgeplace/bimatrix.hpp"

#include <algorithm>
#include <vector>

#include "edgeplace/cost.hpp"
#include "edgeplace/error.hpp"
#include "edgeplace/validate.hpp"

namespace edgeplace {

namespace {

constexpr double kTol = 1e-9;

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> result;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    result.push_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return result;
}

struct IndifferenceSolution {
  bool solved = false;
  bool family = false;  // consistent but underdetermined system
  Eigen::VectorXd probs;
  double value = 0.0;
};

// Opponent mixture making every chosen-support payoff row equal: for the row
// player pass A restricted to (support, opp_support); probabilities come out
// over opp_support.
IndifferenceSolution solve_indifference(const Eigen::MatrixXd& payoff,
                                        const std::vector<int>& support,
                                        const std::vector<int>& opp_support) {
  const int k = static_cast<int>(support.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) m(r, c) = payoff(support[r], opp_support[c]);
    m(r, k) = -1.0;  // common value v
  }
  for (int c = 0; c < k; ++c) m(k, c) = 1.0;  // probabilities sum to one
  rhs(k) = 1.0;

  IndifferenceSolution out;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    // Underdetermined: a whole family of mixtures satisfies indifference.
    Eigen::MatrixXd augmented(k + 1, k + 2);
    augmented << m, rhs;
    out.family = lu.rank() == Eigen::FullPivLU<Eigen::MatrixXd>(augmented).rank();
    return out;
  }
  const Eigen::VectorXd solution = lu.solve(rhs);
  out.solved = true;
  out.probs = solution.head(k);
  out.value = solution(k);
  return out;
}

}  // namespace

SupportEnumerationResult support_enumeration(const BimatrixGame& game) {
  const Eigen::MatrixXd& a = game.payoff_a;
  const Eigen::MatrixXd& b = game.payoff_b;
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() == 0 ||
      a.cols() == 0) {
    throw Error(ErrorCode::InvalidValue,
                "bimatrix payoffs must be nonempty and share a shape");
  }
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  SupportEnumerationResult result;
  for (int k = 1; k <= std::min(m, n); ++k) {
    for (const auto& rows : subsets(m, k)) {
      for (const auto& cols : subsets(n, k)) {
        // Column mixture y makes the row player indifferent across `rows`;
        // row mixture x makes the column player indifferent across `cols`.
        const auto ysol = solve_indifference(a, rows, cols);
        const auto xsol = solve_indifference(b.transpose(), cols, rows);
        if (ysol.family || xsol.family) {
          result.degenerate = true;
          result.degenerate_supports.push_back({rows, cols});
          continue;
        }
        if (!ysol.solved || !xsol.solved) continue;

        // Strictly positive on the claimed support (smaller supports cover
        // the boundary cases).
        const bool positive =
            (ysol.probs.array() > kTol).all() && (xsol.probs.array() > kTol).all();
        if (!positive) continue;

        Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < k; ++i) x(rows[i]) = xsol.probs(i);
        for (int j = 0; j < k; ++j) y(cols[j]) = ysol.probs(j);
        x /= x.sum();
        y /= y.sum();

        // No pure strategy outside the support may beat the support value.
        const Eigen::VectorXd row_payoffs = a * y;
        const Eigen::VectorXd col_payoffs = b.transpose() * x;
        if ((row_payoffs.array() > ysol.value + kTol).any()) continue;
        if ((col_payoffs.array() > xsol.value + kTol).any()) continue;

        // More best responses than the support size means a degenerate game
        // (the equilibrium itself still counts).
        const auto count_ties = [](const Eigen::VectorXd& payoffs, double value) {
          return (payoffs.array() >= value - kTol).count();
        };
        if (count_ties(row_payoffs, ysol.value) > k ||
            count_ties(col_payoffs, xsol.value) > k) {
          result.degenerate = true;
          result.degenerate_supports.push_back({rows, cols});
        }

        MixedEquilibrium eq;
        eq.row_probs = x;
        eq.col_probs = y;
        eq.row_payoff = x.dot(a * y);
        eq.col_payoff = x.dot(b * y);
        eq.row_support = rows;
        eq.col_support = cols;
        result.equilibria.push_back(std::move(eq));
      }
    }
  }
  return result;
}

BimatrixGame pairwise_game(const Scenario& scenario, const std::string& up_id,
                           const std::string& down_id) {
  const Microservice* up = scenario.app.find(up_id);
  const Microservice* down = scenario.app.find(down_id);
  if (!up || !down) {
    throw Error(ErrorCode::InvalidValue,
                "pairwise_game: unknown microservice \"" +
                    (up ? down_id : up_id) + "\"");
  }
  const auto row_options =
      feasible_strategies(*up, scenario.devices, scenario.registries);
  const auto col_options =
      feasible_strategies(*down, scenario.devices, scenario.registries);
  const CacheMode mode = scenario.cache_mode;

  // Isolated own energy: deployment + processing only (the rest of the
  // application is out of frame).
  const auto solo_ec = [&](const Microservice& ms, const std::string& reg,
                           const std::string& dev_id) {
    const Device* dev = scenario.find_device(dev_id);
    CacheState cache(mode);
    const double ct = deployment_time(ms, reg, dev_id, scenario.links, cache) +
                      processing_time(ms, *dev);
    return dev->active_power_w * ct + dev->static_power_w * ct;
  };

  BimatrixGame game;
  game.payoff_a.resize(static_cast<int>(row_options.size()),
                       static_cast<int>(col_options.size()));
  game.payoff_b.resize(game.payoff_a.rows(), game.payoff_a.cols());

  for (int i = 0; i < game.payoff_a.rows(); ++i) {
    const double up_ec =
        solo_ec(*up, row_options[i].first, row_options[i].second);
    for (int j = 0; j < game.payoff_a.cols(); ++j) {
      const Device* down_dev = scenario.find_device(col_options[j].second);
      CacheState cache(mode);
      double ct = deployment_time(*down, col_options[j].first,
                                  col_options[j].second, scenario.links, cache);
      for (const auto& df : scenario.app.dataflows) {
        if (df.upstream == up_id && df.downstream == down_id) {
          ct += transfer_time(df, row_options[i].second, col_options[j].second,
                              scenario.links);
        }
      }
      ct += processing_time(*down, *down_dev);
      const double down_ec =
          down_dev->active_power_w * ct + down_dev->static_power_w * ct;
      game.payoff_a(i, j) = -up_ec;
      game.payoff_b(i, j) = -down_ec;
    }
  }
  return game;
}

}  // namespace edgeplace
