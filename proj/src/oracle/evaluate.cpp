#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <numeric>

#include "fogsched/error.hpp"
#include "fogsched/kernels.hpp"
#include "fogsched/oracle.hpp"
#include "linear.hpp"

namespace fogsched {

PolicyTable tabulate(const ExactModel& model, const DecisionRule& rule) {
  const std::size_t J = model.num_classes();
  PolicyTable table;
  table.num_classes = J;
  table.decisions.resize(model.size() * J);
  table.targets.resize(model.size() * J);
  for (std::size_t s = 0; s < model.size(); ++s) {
    const NetworkState st = model.state(s);
    for (std::size_t j = 0; j < J; ++j) {
      const Decision d = rule(st, j);
      const auto t = model.target(s, j, d);
      if (!t) throw Error(ErrorCode::InvariantViolation, "policy chose infeasible " + to_string(d));
      table.decisions[s * J + j] = d;
      table.targets[s * J + j] = static_cast<std::uint32_t>(*t);
    }
  }
  return table;
}

PolicyTable tabulate(const ExactModel& model, PolicyKind kind) {
  return tabulate(model, make_rule(kind, model.network()));
}

DecisionRule rule_from_table(const ExactModel& model, const PolicyTable& table) {
  return [&model, &table](const NetworkState& st, std::size_t j) { return table.decision(model.index_of(st), j); };
}

namespace detail {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

// Generator entries with the empty state's row and column dropped. When
// `transpose` is set the result is the transposed reduced generator.
SparseMatrix reduced_generator(const ExactModel& model, const PolicyTable& table, bool transpose,
                               Vector* column_of_empty) {
  const std::size_t n = model.size();
  std::vector<Eigen::Triplet<double, int>> entries;
  entries.reserve(n * 8);
  if (column_of_empty) column_of_empty->setZero(static_cast<Eigen::Index>(n - 1));
  auto put = [&](std::size_t from, std::size_t to, double rate) {
    if (from == 0 && to == 0) return;
    if (from == 0 || to == 0) {
      // Transitions out of the empty state feed the right-hand side of the
      // balance equations; transitions into it only touch the dropped row.
      if (transpose && from == 0 && column_of_empty) (*column_of_empty)[static_cast<Eigen::Index>(to - 1)] += rate;
      return;
    }
    const int r = static_cast<int>((transpose ? to : from) - 1);
    const int c = static_cast<int>((transpose ? from : to) - 1);
    entries.emplace_back(r, c, rate);
  };
  for (std::size_t s = 0; s < n; ++s) {
    double outflow = 0.0;
    model.for_each_departure(s, [&](std::size_t t, double rate) {
      put(s, t, rate);
      outflow += rate;
    });
    for (std::size_t j = 0; j < model.num_classes(); ++j) {
      const std::size_t t = table.target(s, j);
      if (t == s) continue;
      put(s, t, model.arrival_rate(j));
      outflow += model.arrival_rate(j);
    }
    put(s, s, -outflow);
  }
  const auto m = static_cast<Eigen::Index>(n - 1);
  SparseMatrix q(m, m);
  q.setFromTriplets(entries.begin(), entries.end());
  q.makeCompressed();
  return q;
}

Vector solve(const SparseMatrix& a, const Vector& b, std::size_t direct_limit) {
  if (static_cast<std::size_t>(a.rows()) <= direct_limit) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "LU factorisation failed: " + lu.lastErrorMessage());
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "LU solve failed");
    return x;
  }
  // Jacobi-preconditioned BiCGSTAB is usually enough; ILUT is the fallback.
  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> cheap;
  cheap.setTolerance(1e-13);
  cheap.setMaxIterations(5000);
  cheap.compute(a);
  Vector x = cheap.solve(b);
  if (cheap.info() == Eigen::Success || (x.allFinite() && cheap.error() <= 1e-11)) return x;
  Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double, int>> solver;
  solver.preconditioner().setDroptol(1e-6);
  solver.preconditioner().setFillfactor(4);
  solver.setTolerance(1e-13);
  solver.setMaxIterations(20000);
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "preconditioner setup failed");
  x = solver.solve(b);
  if (solver.info() != Eigen::Success && solver.error() > 1e-9)
    throw Error(ErrorCode::NonConvergence, "BiCGSTAB stopped at relative residual " + std::to_string(solver.error()));
  return x;
}

}  // namespace

std::vector<double> solve_stationary(const ExactModel& model, const PolicyTable& table, std::size_t direct_limit) {
  const std::size_t n = model.size();
  if (n == 1) return {1.0};
  Vector out_of_empty;
  const SparseMatrix a = reduced_generator(model, table, /*transpose=*/true, &out_of_empty);
  const Vector x = solve(a, -out_of_empty, direct_limit);
  std::vector<double> pi(n);
  pi[0] = 1.0;
  double negative = 0.0;
  for (std::size_t s = 1; s < n; ++s) {
    pi[s] = x[static_cast<Eigen::Index>(s - 1)];
    if (pi[s] < 0.0) {
      negative = std::min(negative, pi[s]);
      pi[s] = 0.0;
    }
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (!std::isfinite(total) || negative < -1e-9 * total)
    throw Error(ErrorCode::SingularSystem, "balance equations gave a non-probability solution");
  for (double& p : pi) p /= total;
  return pi;
}

std::vector<double> solve_bias(const ExactModel& model, const PolicyTable& table, double theta, double gain,
                               std::size_t direct_limit) {
  const std::size_t n = model.size();
  std::vector<double> h(n, 0.0);
  if (n == 1) return h;
  const SparseMatrix a = reduced_generator(model, table, /*transpose=*/false, nullptr);
  Vector b(static_cast<Eigen::Index>(n - 1));
  for (std::size_t s = 1; s < n; ++s)
    b[static_cast<Eigen::Index>(s - 1)] = gain - (model.cost_rate(s) - theta * model.reward_rate(s));
  const Vector x = solve(a, b, direct_limit);
  for (std::size_t s = 1; s < n; ++s) h[s] = x[static_cast<Eigen::Index>(s - 1)];
  return h;
}

double balance_residual(const ExactModel& model, const PolicyTable& table, const std::vector<double>& pi) {
  std::vector<double> flow(model.size(), 0.0);
  for (std::size_t s = 0; s < model.size(); ++s) {
    model.for_each_departure(s, [&](std::size_t t, double rate) {
      flow[t] += pi[s] * rate;
      flow[s] -= pi[s] * rate;
    });
    for (std::size_t j = 0; j < model.num_classes(); ++j) {
      const std::size_t t = table.target(s, j);
      if (t == s) continue;
      flow[t] += pi[s] * model.arrival_rate(j);
      flow[s] -= pi[s] * model.arrival_rate(j);
    }
  }
  double worst = 0.0;
  for (double f : flow) worst = std::max(worst, std::abs(f));
  return worst;
}

}  // namespace detail

PolicyEvaluation evaluate_policy_exact(const ExactModel& model, const PolicyTable& table, std::size_t direct_limit) {
  PolicyEvaluation e;
  e.stationary = detail::solve_stationary(model, table, direct_limit);
  for (std::size_t s = 0; s < model.size(); ++s) {
    e.mean_reward += e.stationary[s] * model.reward_rate(s);
    e.mean_cost += e.stationary[s] * model.cost_rate(s);
  }
  if (!(e.mean_reward > 0.0)) throw Error(ErrorCode::DegenerateRun, "policy has zero long-run throughput");
  e.ratio = e.mean_cost / e.mean_reward;
  e.residual = detail::balance_residual(model, table, e.stationary);
  return e;
}

double evaluate_policy_exact(const ExactModel& model, PolicyKind kind) {
  return evaluate_policy_exact(model, tabulate(model, kind)).ratio;
}

std::vector<double> stationary_by_iteration(const ExactModel& model, const PolicyTable& table, double tolerance,
                                            std::size_t max_sweeps, Execution execution) {
  std::vector<double> pi(model.size(), 0.0);
  std::vector<double> next(model.size(), 0.0);
  pi[0] = 1.0;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const double diff = kernels::stationary_sweep(model, table, pi, next, execution);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& p : next) p /= total;
    pi.swap(next);
    if (diff < tolerance) return pi;
  }
  throw Error(ErrorCode::NonConvergence, "power iteration did not settle");
}

}  // namespace fogsched
