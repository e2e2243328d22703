#include "bikecast/plsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bikecast/error.hpp"
#include "bikecast/rng.hpp"

namespace bikecast {

void PLSRModel::predict(const Matrix& X, Matrix& out) const {
  const size_t p = x_mean.size();
  const size_t q = y_mean.size();
  if (X.cols != p) {
    throw Error(errc::dimension_mismatch,
                "expected " + std::to_string(p) + " features, got " + std::to_string(X.cols));
  }
  out = Matrix(X.rows, q);
  for (size_t r = 0; r < X.rows; ++r) {
    for (size_t j = 0; j < q; ++j) {
      double acc = y_mean[j];
      for (size_t c = 0; c < p; ++c) {
        acc += (X.at(r, c) - x_mean[c]) * coef.at(c, j);
      }
      out.at(r, j) = acc;
    }
  }
}

namespace {

// Solves M * x = b in place (Gaussian elimination, partial pivoting).
// M is A x A with A at most a few dozen here.
void solve_small(Matrix& M, std::vector<double>& b) {
  const size_t n = M.rows;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::abs(M.at(r, col)) > std::abs(M.at(pivot, col))) pivot = r;
    }
    if (std::abs(M.at(pivot, col)) < 1e-300) {
      throw Error(errc::convergence_failure, "singular inner system in coefficient assembly");
    }
    if (pivot != col) {
      for (size_t c = 0; c < n; ++c) std::swap(M.at(pivot, c), M.at(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (size_t r = col + 1; r < n; ++r) {
      double factor = M.at(r, col) / M.at(col, col);
      if (factor == 0.0) continue;
      for (size_t c = col; c < n; ++c) M.at(r, c) -= factor * M.at(col, c);
      b[r] -= factor * b[col];
    }
  }
  for (size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (size_t c = r + 1; c < n; ++c) acc -= M.at(r, c) * b[c];
    b[r] = acc / M.at(r, r);
  }
}

struct PlsCore {
  std::vector<double> x_mean;
  std::vector<double> y_mean;
  Matrix weights;    // p x extracted
  Matrix x_loadings; // p x extracted
  Matrix y_loadings; // q x extracted
  size_t extracted = 0;
};

// NIPALS extraction with X-deflation. Y stays undeflated: scores are
// mutually orthogonal, so loadings against the original responses equal
// the deflated-Y formulation. Extraction stops early once the predictor
// block is numerically exhausted or the responses are fully explained.
PlsCore extract_components(const Matrix& X, const Matrix& Y, size_t A, double tol, int max_iter) {
  const size_t n = X.rows;
  const size_t p = X.cols;
  const size_t q = Y.cols;

  PlsCore core;
  core.x_mean.assign(p, 0.0);
  core.y_mean.assign(q, 0.0);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < p; ++c) core.x_mean[c] += X.at(r, c);
    for (size_t j = 0; j < q; ++j) core.y_mean[j] += Y.at(r, j);
  }
  for (double& v : core.x_mean) v /= static_cast<double>(n);
  for (double& v : core.y_mean) v /= static_cast<double>(n);

  Matrix E(n, p);
  Matrix F(n, q);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < p; ++c) E.at(r, c) = X.at(r, c) - core.x_mean[c];
    for (size_t j = 0; j < q; ++j) F.at(r, j) = Y.at(r, j) - core.y_mean[j];
  }

  double x_scale = 0.0;
  for (double v : E.data) x_scale += v * v;
  std::vector<double> f_ss(q, 0.0); // response column energies (fixed)
  for (size_t r = 0; r < n; ++r) {
    for (size_t j = 0; j < q; ++j) f_ss[j] += F.at(r, j) * F.at(r, j);
  }

  core.weights = Matrix(p, A);
  core.x_loadings = Matrix(p, A);
  core.y_loadings = Matrix(q, A);

  std::vector<double> u(n), w(p), w_prev(p), t(n), qv(q);
  for (size_t a = 0; a < A; ++a) {
    double e_norm = 0.0;
    for (double v : E.data) e_norm += v * v;
    if (e_norm <= x_scale * 1e-28) break; // predictor block exhausted

    // Start u from the response column with the largest energy.
    size_t start_col =
        static_cast<size_t>(std::max_element(f_ss.begin(), f_ss.end()) - f_ss.begin());
    if (f_ss[start_col] <= 0.0) break; // constant responses
    for (size_t r = 0; r < n; ++r) u[r] = F.at(r, start_col);

    std::fill(w_prev.begin(), w_prev.end(), 0.0);
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
      double w_norm = 0.0;
      for (size_t c = 0; c < p; ++c) {
        double acc = 0.0;
        for (size_t r = 0; r < n; ++r) acc += E.at(r, c) * u[r];
        w[c] = acc;
        w_norm += acc * acc;
      }
      w_norm = std::sqrt(w_norm);
      if (w_norm < 1e-300) throw Error(errc::convergence_failure, "degenerate weight vector");
      for (double& v : w) v /= w_norm;

      for (size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (size_t c = 0; c < p; ++c) acc += E.at(r, c) * w[c];
        t[r] = acc;
      }
      double tt = std::inner_product(t.begin(), t.end(), t.begin(), 0.0);
      if (tt < 1e-300) throw Error(errc::convergence_failure, "zero-variance score");

      for (size_t j = 0; j < q; ++j) {
        double acc = 0.0;
        for (size_t r = 0; r < n; ++r) acc += F.at(r, j) * t[r];
        qv[j] = acc / tt;
      }

      double delta = 0.0;
      for (size_t c = 0; c < p; ++c) delta = std::max(delta, std::abs(w[c] - w_prev[c]));
      if (delta < tol || q == 1) {
        converged = true;
        break;
      }
      w_prev = w;

      double qq = std::inner_product(qv.begin(), qv.end(), qv.begin(), 0.0);
      if (qq < 1e-300) {
        converged = true; // responses fully explained; keep this direction
        break;
      }
      for (size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (size_t j = 0; j < q; ++j) acc += F.at(r, j) * qv[j];
        u[r] = acc / qq;
      }
    }
    if (!converged) {
      throw Error(errc::convergence_failure,
                  "component " + std::to_string(a + 1) + " exceeded max iterations");
    }

    double tt = std::inner_product(t.begin(), t.end(), t.begin(), 0.0);
    for (size_t c = 0; c < p; ++c) {
      double acc = 0.0;
      for (size_t r = 0; r < n; ++r) acc += E.at(r, c) * t[r];
      core.x_loadings.at(c, a) = acc / tt;
      core.weights.at(c, a) = w[c];
    }
    for (size_t j = 0; j < q; ++j) core.y_loadings.at(j, a) = qv[j];

    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < p; ++c) E.at(r, c) -= t[r] * core.x_loadings.at(c, a);
    }
    ++core.extracted;
  }

  auto trim = [&](Matrix& m) {
    if (m.cols == core.extracted) return;
    Matrix out(m.rows, core.extracted);
    for (size_t r = 0; r < m.rows; ++r) {
      for (size_t c = 0; c < core.extracted; ++c) out.at(r, c) = m.at(r, c);
    }
    m = std::move(out);
  };
  trim(core.weights);
  trim(core.x_loadings);
  trim(core.y_loadings);
  return core;
}

// B = W_a (P_a' W_a)^-1 Q_a' using the first `a` components.
Matrix assemble_coef(const PlsCore& core, size_t a) {
  const size_t p = core.x_mean.size();
  const size_t q = core.y_mean.size();
  if (a == 0) return Matrix(p, q, 0.0);

  Matrix ptw(a, a);
  for (size_t i = 0; i < a; ++i) {
    for (size_t j = 0; j < a; ++j) {
      double acc = 0.0;
      for (size_t c = 0; c < p; ++c) acc += core.x_loadings.at(c, i) * core.weights.at(c, j);
      ptw.at(i, j) = acc;
    }
  }
  Matrix inner(a, q);
  std::vector<double> rhs(a);
  for (size_t j = 0; j < q; ++j) {
    Matrix m = ptw;
    for (size_t i = 0; i < a; ++i) rhs[i] = core.y_loadings.at(j, i);
    solve_small(m, rhs);
    for (size_t i = 0; i < a; ++i) inner.at(i, j) = rhs[i];
  }
  Matrix coef(p, q, 0.0);
  for (size_t c = 0; c < p; ++c) {
    for (size_t j = 0; j < q; ++j) {
      double acc = 0.0;
      for (size_t i = 0; i < a; ++i) acc += core.weights.at(c, i) * inner.at(i, j);
      coef.at(c, j) = acc;
    }
  }
  return coef;
}

void validate_plsr_inputs(const Matrix& X, const Matrix& Y, int n_components) {
  if (X.rows == 0 || X.cols == 0) throw Error(errc::empty_dataset, "empty predictor block");
  if (Y.rows != X.rows) {
    throw Error(errc::dimension_mismatch, "X has " + std::to_string(X.rows) + " rows, Y has " +
                                              std::to_string(Y.rows));
  }
  if (n_components < 1 ||
      static_cast<size_t>(n_components) > std::min(X.rows - 1, X.cols)) {
    throw Error(errc::dimension_mismatch, "n_components must be within 1..min(rows-1, features)");
  }
}

} // namespace

PLSRModel fit_plsr(const Matrix& X, const Matrix& Y, int n_components, double tol, int max_iter) {
  validate_plsr_inputs(X, Y, n_components);
  PlsCore core = extract_components(X, Y, static_cast<size_t>(n_components), tol, max_iter);

  PLSRModel model;
  model.coef = assemble_coef(core, core.extracted);
  model.x_mean = std::move(core.x_mean);
  model.y_mean = std::move(core.y_mean);
  model.weights = std::move(core.weights);
  model.x_loadings = std::move(core.x_loadings);
  model.y_loadings = std::move(core.y_loadings);
  model.n_components = static_cast<int>(core.extracted);
  return model;
}

int select_plsr_components(const Matrix& X, const Matrix& Y, int max_components, int k_folds,
                           std::uint64_t seed) {
  if (k_folds < 2 || X.rows < static_cast<size_t>(k_folds)) {
    throw Error(errc::too_few_rows, "need at least k rows for k-fold selection");
  }
  const size_t n = X.rows;
  const size_t max_fold = n / static_cast<size_t>(k_folds) + (n % static_cast<size_t>(k_folds) ? 1 : 0);
  const size_t min_train = n - max_fold;
  size_t a_cap = std::min(min_train > 0 ? min_train - 1 : 0, X.cols);
  size_t a_max = std::min(static_cast<size_t>(std::max(1, max_components)), a_cap);
  if (a_max < 1) throw Error(errc::too_few_rows, "not enough rows for even one component");

  std::vector<int> fold_of(n);
  {
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (size_t i = n; i > 1; --i) {
      size_t j = static_cast<size_t>(rng.next_below(i));
      std::swap(perm[i - 1], perm[j]);
    }
    for (size_t i = 0; i < n; ++i) {
      fold_of[perm[i]] = static_cast<int>(i % static_cast<size_t>(k_folds));
    }
  }

  std::vector<double> sse(a_max + 1, 0.0);
  for (int fold = 0; fold < k_folds; ++fold) {
    size_t n_train = 0;
    for (size_t r = 0; r < n; ++r) n_train += fold_of[r] != fold;
    Matrix x_train(n_train, X.cols), y_train(n_train, Y.cols);
    Matrix x_test(n - n_train, X.cols), y_test(n - n_train, Y.cols);
    size_t wt = 0, we = 0;
    for (size_t r = 0; r < n; ++r) {
      if (fold_of[r] != fold) {
        std::copy(X.row(r).begin(), X.row(r).end(), x_train.row(wt).begin());
        std::copy(Y.row(r).begin(), Y.row(r).end(), y_train.row(wt).begin());
        ++wt;
      } else {
        std::copy(X.row(r).begin(), X.row(r).end(), x_test.row(we).begin());
        std::copy(Y.row(r).begin(), Y.row(r).end(), y_test.row(we).begin());
        ++we;
      }
    }

    // One extraction serves every candidate count: sub-models are
    // prefixes of the component sequence.
    PlsCore core = extract_components(x_train, y_train, a_max, 1e-10, 500);
    PLSRModel probe;
    probe.x_mean = core.x_mean;
    probe.y_mean = core.y_mean;
    Matrix pred;
    std::vector<double> fold_sse(a_max + 1, 0.0);
    for (size_t a = 1; a <= std::min(a_max, core.extracted); ++a) {
      probe.coef = assemble_coef(core, a);
      probe.predict(x_test, pred);
      double acc = 0.0;
      for (size_t i = 0; i < pred.data.size(); ++i) {
        double d = pred.data[i] - y_test.data[i];
        acc += d * d;
      }
      fold_sse[a] = acc;
    }
    for (size_t a = core.extracted + 1; a <= a_max; ++a) {
      fold_sse[a] = fold_sse[core.extracted]; // unreachable counts inherit the cap
    }
    for (size_t a = 1; a <= a_max; ++a) sse[a] += fold_sse[a];
  }

  size_t best = 1;
  for (size_t a = 2; a <= a_max; ++a) {
    if (sse[a] < sse[best]) best = a;
  }
  return static_cast<int>(best);
}

} // namespace bikecast
