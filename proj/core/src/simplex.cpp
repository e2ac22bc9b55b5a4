#include "badlab/simplex.hpp"

#include <cstddef>
#include <optional>

namespace badlab {

namespace {

// Slack-form tableau. Row i reads  sum_j rows[i][j] x_j = rhs[i]  with the
// basic variable basis[i] carrying coefficient 1. The objective reads
// z = value + sum_j reduced[j] x_j over nonbasic j.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows, std::vector<Rat>(cols)), rhs_(rows), basis_(rows), reduced_(cols), blocked_(cols, false) {}

  std::vector<std::vector<Rat>>& rows() { return rows_; }
  std::vector<Rat>& rhs() { return rhs_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<bool>& blocked() { return blocked_; }
  const Rat& value() const { return value_; }

  void pivot(std::size_t p, std::size_t q) {
    const Rat piv = rows_[p][q];
    for (auto& v : rows_[p]) v /= piv;
    rhs_[p] /= piv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == p || rows_[i][q] == 0) continue;
      const Rat f = rows_[i][q];
      for (std::size_t j = 0; j < rows_[i].size(); ++j)
        if (rows_[p][j] != 0) rows_[i][j] -= f * rows_[p][j];
      rhs_[i] -= f * rhs_[p];
    }
    if (reduced_[q] != 0) {
      const Rat f = reduced_[q];
      for (std::size_t j = 0; j < reduced_.size(); ++j)
        if (rows_[p][j] != 0) reduced_[j] -= f * rows_[p][j];
      value_ += f * rhs_[p];
    }
    basis_[p] = q;
  }

  // Installs objective sum_j cost[j] x_j expressed in the current basis.
  void set_objective(const std::vector<Rat>& cost) {
    reduced_ = cost;
    value_ = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < reduced_.size(); ++j) reduced_[j] -= cb * rows_[i][j];
      value_ += cb * rhs_[i];
    }
  }

  // Runs Bland's rule to optimality. Returns false when unbounded.
  bool optimize() {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < reduced_.size(); ++j) {
        if (!blocked_[j] && reduced_[j] > 0) {
          enter = j;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rat best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][*enter] <= 0) continue;
        Rat ratio = rhs_[i] / rows_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

 private:
  std::vector<std::vector<Rat>> rows_;
  std::vector<Rat> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rat> reduced_;
  std::vector<bool> blocked_;
  Rat value_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b, const std::vector<Rat>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw DomainError("solve_lp: row count mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw DomainError("solve_lp: column count mismatch");

  // Columns: x (n), slacks (m), auxiliary x0.
  const std::size_t aux = n + m;
  Tableau t(m, n + m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.rows()[i][j] = a[i][j];
    t.rows()[i][n + i] = 1;
    t.rows()[i][aux] = -1;
    t.rhs()[i] = b[i];
    t.basis()[i] = n + i;
  }

  std::size_t most_negative = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (b[i] < b[most_negative]) most_negative = i;

  if (m > 0 && b[most_negative] < 0) {
    // Phase 1: maximize -x0 starting from the feasible pivot on x0.
    std::vector<Rat> phase1(n + m + 1);
    phase1[aux] = -1;
    t.set_objective(phase1);
    t.pivot(most_negative, aux);
    t.optimize();
    if (t.value() < 0) return LpResult{LpStatus::Infeasible, Rat(0), {}};
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] != aux) continue;
      for (std::size_t j = 0; j < aux; ++j) {
        if (t.rows()[i][j] != 0) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }
  t.blocked()[aux] = true;
  for (std::size_t i = 0; i < m; ++i) t.rows()[i][aux] = 0;

  std::vector<Rat> cost(n + m + 1);
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  t.set_objective(cost);
  if (!t.optimize()) return LpResult{LpStatus::Unbounded, Rat(0), {}};

  LpResult out;
  out.status = LpStatus::Optimal;
  out.value = t.value();
  out.x.assign(n, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis()[i] < n) out.x[t.basis()[i]] = t.rhs()[i];
  return out;
}

}  // namespace badlab
