#pragma once

// Independent oracle machinery. The tableau simplex below (KACTL-style
// max c.x over Ax <= b, x >= 0, Dantzig pricing with index tie-breaks) shares
// no code or pivot logic with the library solver.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "bellfrac/types.hpp"

namespace reflp {

struct Simplex {
  using Vec = std::vector<double>;
  using Mat = std::vector<Vec>;
  static constexpr double kEps = 1e-9;

  int m, n;
  std::vector<int> nonbasic, basic;
  Mat tableau;

  Simplex(const Mat& a, const Vec& b, const Vec& c)
      : m(int(b.size())),
        n(int(c.size())),
        nonbasic(n + 1),
        basic(m),
        tableau(m + 2, Vec(n + 2)) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) tableau[i][j] = a[i][j];
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      tableau[i][n] = -1;
      tableau[i][n + 1] = b[i];
    }
    for (int j = 0; j < n; ++j) {
      nonbasic[j] = j;
      tableau[m][j] = -c[j];
    }
    nonbasic[n] = -1;
    tableau[m + 1][n] = 1;
  }

  void pivot(int r, int s) {
    double* a = tableau[r].data();
    const double inv = 1.0 / a[s];
    for (int i = 0; i < m + 2; ++i) {
      if (i != r && std::abs(tableau[i][s]) > kEps) {
        double* b = tableau[i].data();
        const double inv2 = b[s] * inv;
        for (int j = 0; j < n + 2; ++j) b[j] -= a[j] * inv2;
        b[s] = a[s] * inv2;
      }
    }
    for (int j = 0; j < n + 2; ++j)
      if (j != s) tableau[r][j] *= inv;
    for (int i = 0; i < m + 2; ++i)
      if (i != r) tableau[i][s] *= -inv;
    tableau[r][s] = inv;
    std::swap(basic[r], nonbasic[s]);
  }

  bool simplex(int phase) {
    const int x = m + phase - 1;
    while (true) {
      int s = -1;
      for (int j = 0; j < n + 1; ++j) {
        if (nonbasic[j] == -phase) continue;
        if (s == -1 || std::make_pair(tableau[x][j], nonbasic[j]) <
                           std::make_pair(tableau[x][s], nonbasic[s]))
          s = j;
      }
      if (tableau[x][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (tableau[i][s] <= kEps) continue;
        if (r == -1 ||
            std::make_pair(tableau[i][n + 1] / tableau[i][s], basic[i]) <
                std::make_pair(tableau[r][n + 1] / tableau[r][s], basic[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  /// Returns the optimum; -inf if infeasible, +inf if unbounded.
  double solve(Vec& x) {
    int r = 0;
    for (int i = 1; i < m; ++i)
      if (tableau[i][n + 1] < tableau[r][n + 1]) r = i;
    if (tableau[r][n + 1] < -kEps) {
      pivot(r, n);
      if (!simplex(2) || tableau[m + 1][n + 1] < -kEps)
        return -std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (basic[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n; ++j)
          if (std::make_pair(tableau[i][j], nonbasic[j]) <
              std::make_pair(tableau[i][s], nonbasic[s]))
            s = j;
        pivot(i, s);
      }
    }
    const bool ok = simplex(1);
    x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
      if (basic[i] < n) x[basic[i]] = tableau[i][n + 1];
    return ok ? tableau[m][n + 1] : std::numeric_limits<double>::infinity();
  }
};

/// Deterministic-pair column matrix for a behaviour's cell space, built
/// directly from first principles (no library code).
inline Simplex::Mat strategy_matrix(const bellfrac::Cardinalities& d) {
  using bellfrac::Behaviour;
  auto ipow = [](int base, int exp) {
    long v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
  };
  const long nf = ipow(d.nA, d.nX);
  const long ng = ipow(d.nB, d.nY);
  auto digit = [&](long code, int base, int length, int pos) {
    long div = 1;
    for (int i = 0; i < length - 1 - pos; ++i) div *= base;
    return int((code / div) % base);
  };
  Simplex::Mat rows(std::size_t(d.cells()),
                    Simplex::Vec(std::size_t(nf * ng), 0.0));
  for (long f = 0; f < nf; ++f)
    for (long g = 0; g < ng; ++g)
      for (int x = 0; x < d.nX; ++x)
        for (int y = 0; y < d.nY; ++y) {
          const int a = digit(f, d.nA, d.nX, x);
          const int b = digit(g, d.nB, d.nY, y);
          rows[std::size_t(Behaviour::index_of(d, a, b, x, y))]
              [std::size_t(f * ng + g)] = 1.0;
        }
  return rows;
}

/// Largest total strategy weight s with Lw <= p elementwise, w >= 0.
inline double max_local_mass(const bellfrac::Behaviour& behaviour) {
  const auto& d = behaviour.dims();
  Simplex::Mat a = strategy_matrix(d);
  Simplex::Vec b(std::size_t(d.cells()));
  for (Eigen::Index i = 0; i < d.cells(); ++i)
    b[std::size_t(i)] = std::max(behaviour.data()[i], 0.0);
  Simplex::Vec c(a[0].size(), 1.0);
  Simplex::Vec x;
  return Simplex(a, b, c).solve(x);
}

/// Grid search for the least q whose complement can be carried by local
/// strategies: at each grid point the membership program is re-solved with
/// the extra budget row sum(w) <= 1 - q.
inline double grid_fraction(const bellfrac::Behaviour& behaviour,
                            double step = 1e-4) {
  const auto& d = behaviour.dims();
  const Simplex::Mat base = strategy_matrix(d);
  for (double q = 0.0; q < 1.0 + step / 2; q += step) {
    const double budget = 1.0 - q;
    Simplex::Mat a = base;
    a.emplace_back(base[0].size(), 1.0);
    Simplex::Vec b(std::size_t(d.cells()) + 1);
    for (Eigen::Index i = 0; i < d.cells(); ++i)
      b[std::size_t(i)] = std::max(behaviour.data()[i], 0.0);
    b.back() = budget;
    Simplex::Vec c(base[0].size(), 1.0);
    Simplex::Vec x;
    const double mass = Simplex(a, b, c).solve(x);
    if (mass >= budget - 1e-9) return q;
  }
  return 1.0;
}

}  // namespace reflp
