#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "domainscope/errors.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

/// Rectangular indicator table: rows are hosts, columns are indicators,
/// cells real-or-missing.
struct IndicatorMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> values;  // rows x cols

  size_t rows() const { return row_ids.size(); }
  size_t cols() const { return columns.size(); }
};

/// Full-precision CSV image of the matrix; missing cells are empty.
inline std::string indicator_matrix_to_csv(const IndicatorMatrix& m) {
  std::string out = "host";
  for (const auto& col : m.columns) out += "," + csv_field(col);
  out += "\n";
  char buf[64];
  for (size_t r = 0; r < m.rows(); ++r) {
    out += csv_field(m.row_ids[r]);
    for (size_t c = 0; c < m.cols(); ++c) {
      out += ",";
      if (m.values[r][c]) {
        std::snprintf(buf, sizeof(buf), "%.17g", *m.values[r][c]);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

/// Reads the CSV image back; empty cells and the missing mark both parse as
/// missing. Quoted fields are not supported here (ids never need them).
inline IndicatorMatrix indicator_matrix_from_csv(std::string_view text) {
  IndicatorMatrix m;
  bool header = true;
  for (const auto& raw_line : split(text, '\n')) {
    std::string_view line = trim(raw_line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (header) {
      for (size_t i = 1; i < fields.size(); ++i) m.columns.push_back(fields[i]);
      header = false;
      continue;
    }
    if (fields.size() != m.columns.size() + 1)
      throw ParseError("indicator CSV row width mismatch: " +
                       std::string(line));
    m.row_ids.push_back(fields[0]);
    std::vector<std::optional<double>> row;
    for (size_t i = 1; i < fields.size(); ++i) {
      std::string cell{trim(fields[i])};
      if (cell.empty() || cell == kMissingMark) {
        row.push_back(std::nullopt);
      } else {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw ParseError("bad numeric cell '" + cell + "'");
        }
      }
    }
    m.values.push_back(std::move(row));
  }
  return m;
}

struct CorrelationResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rho;  // symmetric
  std::vector<std::vector<bool>> significant;
  std::vector<std::vector<int>> n_used;  // pairwise-complete sample size
  double alpha = 0.01;
};

struct PcaResult {
  std::vector<std::string> columns;
  int components = 0;
  int rows_used = 0;  // listwise-complete observations
  std::vector<std::vector<double>> loadings;          // cols x k
  std::vector<double> explained;                      // fractions, k
  std::vector<std::vector<double>> rotated_loadings;  // cols x k
  std::vector<std::vector<double>> rotation;          // k x k, orthogonal
};

namespace stats_detail {

/// Average ranks (1-based); ties share the mean of their rank span.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

inline std::optional<double> pearson(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;  // constant column
  return sxy / std::sqrt(sxx * syy);
}

// --- regularized incomplete beta, for the t-distribution tail --------------

inline double log_gamma(double x) {
  static const double c[6] = {76.18009172947146,     -86.50532032941677,
                              24.01409824083091,     -1.231739572450155,
                              0.1208650973866179e-2, -0.5395239384953e-5};
  double y = x;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (double ci : c) ser += ci / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

inline double betacf(double a, double b, double x) {
  const int max_iter = 200;
  const double eps = 3e-14, fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

inline double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double bt = std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

/// Two-tailed p for Spearman's rho via the t approximation with n-2 df.
inline double t_approx_p(double rho, int n) {
  if (n < 3) return 1.0;
  double r2 = rho * rho;
  if (r2 >= 1.0) return 0.0;
  double t2 = r2 * (n - 2) / (1.0 - r2);
  double df = n - 2;
  return ibeta(df / 2.0, 0.5, df / (df + t2));
}

/// Exact two-tailed permutation p-value; feasible up to n = 10. Means and
/// variances of the rank vectors are permutation-invariant, so only the
/// cross sum varies.
inline double permutation_p(const std::vector<double>& rx,
                            const std::vector<double>& ry, double observed) {
  const size_t n = rx.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  std::vector<double> cx(n), cy(n);
  double sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    cx[i] = rx[i] - mx;
    cy[i] = ry[i] - my;
    sxx += cx[i] * cx[i];
    syy += cy[i] * cy[i];
  }
  double denom = std::sqrt(sxx * syy);
  if (denom == 0.0) return 1.0;
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  long long at_least = 0, total = 0;
  const double tol = 1e-12;
  do {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += cx[i] * cy[perm[i]];
    if (std::abs(s / denom) >= std::abs(observed) - tol) ++at_least;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace stats_detail

/// One pairwise Spearman coefficient: average-rank ties, Pearson on the
/// rank vectors. nullopt when a side is constant.
inline std::optional<double> spearman_pair(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  return stats_detail::pearson(stats_detail::average_ranks(x),
                               stats_detail::average_ranks(y));
}

/// Full correlation matrix over pairwise-complete observations. Significance
/// is two-tailed: exact permutation for n <= 10, t approximation above, and
/// perfect monotone pairs (|rho| = 1) always flagged. Constant columns yield
/// missing cells (the diagonal stays 1).
inline CorrelationResult spearman(const IndicatorMatrix& m,
                                  double alpha = 0.01) {
  const size_t p = m.cols();
  CorrelationResult res;
  res.columns = m.columns;
  res.alpha = alpha;
  res.rho.assign(p, std::vector<std::optional<double>>(p));
  res.significant.assign(p, std::vector<bool>(p, false));
  res.n_used.assign(p, std::vector<int>(p, 0));
  for (size_t i = 0; i < p; ++i) {
    res.rho[i][i] = 1.0;
    int n_col = 0;
    for (size_t r = 0; r < m.rows(); ++r)
      if (m.values[r][i]) ++n_col;
    res.n_used[i][i] = n_col;
  }
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = i + 1; j < p; ++j) {
      std::vector<double> x, y;
      for (size_t r = 0; r < m.rows(); ++r) {
        if (m.values[r][i] && m.values[r][j]) {
          x.push_back(*m.values[r][i]);
          y.push_back(*m.values[r][j]);
        }
      }
      res.n_used[i][j] = res.n_used[j][i] = static_cast<int>(x.size());
      if (x.size() < 3) continue;  // insufficient pairwise sample
      auto rho = spearman_pair(x, y);
      if (!rho) continue;  // DegenerateColumn: constant -> missing
      res.rho[i][j] = res.rho[j][i] = *rho;
      const int n = static_cast<int>(x.size());
      double pval;
      if (n <= 10) {
        auto rx = stats_detail::average_ranks(x);
        auto ry = stats_detail::average_ranks(y);
        pval = stats_detail::permutation_p(rx, ry, *rho);
      } else {
        pval = stats_detail::t_approx_p(*rho, n);
      }
      bool sig = pval < alpha || std::abs(*rho) == 1.0;
      res.significant[i][j] = res.significant[j][i] = sig;
    }
  }
  return res;
}

// --- PCA with varimax rotation ---------------------------------------------

namespace stats_detail {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues descending with matching eigenvector columns.
inline void jacobi_eigen(std::vector<std::vector<double>> a,
                         std::vector<double>& values,
                         std::vector<std::vector<double>>& vectors) {
  const size_t n = a.size();
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-24) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-18) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          double vkp = vectors[k][p], vkq = vectors[k][q];
          vectors[k][p] = c * vkp - s * vkq;
          vectors[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  values.resize(n);
  for (size_t i = 0; i < n; ++i) values[i] = a[i][i];
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return values[x] > values[y]; });
  std::vector<double> sorted_values(n);
  std::vector<std::vector<double>> sorted_vectors(n,
                                                  std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    sorted_values[i] = values[order[i]];
    for (size_t k = 0; k < n; ++k) sorted_vectors[k][i] = vectors[k][order[i]];
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

/// Raw varimax criterion: mean over components of the variance of squared
/// loadings.
inline double varimax_criterion(const std::vector<std::vector<double>>& L) {
  const size_t m = L.size();
  if (m == 0) return 0.0;
  const size_t k = L[0].size();
  double total = 0.0;
  for (size_t j = 0; j < k; ++j) {
    double sum2 = 0.0, sum4 = 0.0;
    for (size_t i = 0; i < m; ++i) {
      double sq = L[i][j] * L[i][j];
      sum2 += sq;
      sum4 += sq * sq;
    }
    total += sum4 / m - (sum2 / m) * (sum2 / m);
  }
  return total;
}

}  // namespace stats_detail

/// Correlation-matrix PCA (columns standardized internally) with varimax
/// rotation by pairwise planar rotations. Loadings are eigenvectors scaled
/// by sqrt(eigenvalue); sign convention: each component's largest-magnitude
/// loading is positive.
inline PcaResult pca_varimax(const IndicatorMatrix& m, int k) {
  const size_t p = m.cols();
  if (k < 1 || static_cast<size_t>(k) > p)
    throw UsageError("component count out of range");

  // listwise-complete rows
  std::vector<std::vector<double>> data;
  for (size_t r = 0; r < m.rows(); ++r) {
    bool complete = true;
    for (size_t c = 0; c < p; ++c)
      if (!m.values[r][c]) complete = false;
    if (!complete) continue;
    std::vector<double> row(p);
    for (size_t c = 0; c < p; ++c) row[c] = *m.values[r][c];
    data.push_back(std::move(row));
  }
  const size_t n = data.size();
  if (n < 3) throw SingularMatrix("fewer than 3 complete rows");

  // Pearson correlation matrix
  std::vector<double> mean(p, 0.0), sd(p, 0.0);
  for (size_t c = 0; c < p; ++c) {
    for (size_t r = 0; r < n; ++r) mean[c] += data[r][c];
    mean[c] /= n;
    for (size_t r = 0; r < n; ++r) {
      double d = data[r][c] - mean[c];
      sd[c] += d * d;
    }
    sd[c] = std::sqrt(sd[c] / (n - 1));
    if (sd[c] == 0.0)
      throw SingularMatrix("constant column '" + m.columns[c] + "'");
  }
  std::vector<std::vector<double>> corr(p, std::vector<double>(p, 1.0));
  for (size_t a = 0; a < p; ++a) {
    for (size_t b = a + 1; b < p; ++b) {
      double s = 0.0;
      for (size_t r = 0; r < n; ++r)
        s += (data[r][a] - mean[a]) * (data[r][b] - mean[b]);
      corr[a][b] = corr[b][a] = s / ((n - 1) * sd[a] * sd[b]);
    }
  }

  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  stats_detail::jacobi_eigen(corr, eigenvalues, eigenvectors);

  PcaResult res;
  res.columns = m.columns;
  res.components = k;
  res.rows_used = static_cast<int>(n);
  res.loadings.assign(p, std::vector<double>(k, 0.0));
  res.explained.resize(k);
  for (int j = 0; j < k; ++j) {
    double lambda = std::max(0.0, eigenvalues[j]);
    res.explained[j] = lambda / static_cast<double>(p);
    double scale = std::sqrt(lambda);
    for (size_t i = 0; i < p; ++i)
      res.loadings[i][j] = eigenvectors[i][j] * scale;
  }
  // deterministic sign: largest |loading| per component is positive
  for (int j = 0; j < k; ++j) {
    size_t arg = 0;
    for (size_t i = 1; i < p; ++i)
      if (std::abs(res.loadings[i][j]) > std::abs(res.loadings[arg][j]))
        arg = i;
    if (res.loadings[arg][j] < 0)
      for (size_t i = 0; i < p; ++i) res.loadings[i][j] = -res.loadings[i][j];
  }

  // varimax by pairwise planar rotations until the criterion stalls
  res.rotated_loadings = res.loadings;
  res.rotation.assign(k, std::vector<double>(k, 0.0));
  for (int j = 0; j < k; ++j) res.rotation[j][j] = 1.0;
  if (k >= 2) {
    double last = stats_detail::varimax_criterion(res.rotated_loadings);
    for (int sweep = 0; sweep < 200; ++sweep) {
      for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
          double A = 0, B = 0, C = 0, D = 0;
          for (size_t i = 0; i < p; ++i) {
            double x = res.rotated_loadings[i][a];
            double y = res.rotated_loadings[i][b];
            double u = x * x - y * y;
            double v = 2.0 * x * y;
            A += u;
            B += v;
            C += u * u - v * v;
            D += 2.0 * u * v;
          }
          double num = D - 2.0 * A * B / static_cast<double>(p);
          double den = C - (A * A - B * B) / static_cast<double>(p);
          double phi = 0.25 * std::atan2(num, den);
          if (std::abs(phi) < 1e-15) continue;
          double c = std::cos(phi), s = std::sin(phi);
          for (size_t i = 0; i < p; ++i) {
            double x = res.rotated_loadings[i][a];
            double y = res.rotated_loadings[i][b];
            res.rotated_loadings[i][a] = c * x + s * y;
            res.rotated_loadings[i][b] = -s * x + c * y;
          }
          for (int r = 0; r < k; ++r) {
            double x = res.rotation[r][a];
            double y = res.rotation[r][b];
            res.rotation[r][a] = c * x + s * y;
            res.rotation[r][b] = -s * x + c * y;
          }
        }
      }
      double now = stats_detail::varimax_criterion(res.rotated_loadings);
      if (now - last < 1e-10) break;
      last = now;
    }
    // re-apply the sign convention, folding the flips into the rotation so
    // rotated = loadings * rotation stays exact
    for (int j = 0; j < k; ++j) {
      size_t arg = 0;
      for (size_t i = 1; i < p; ++i)
        if (std::abs(res.rotated_loadings[i][j]) >
            std::abs(res.rotated_loadings[arg][j]))
          arg = i;
      if (res.rotated_loadings[arg][j] < 0) {
        for (size_t i = 0; i < p; ++i)
          res.rotated_loadings[i][j] = -res.rotated_loadings[i][j];
        for (int r = 0; r < k; ++r) res.rotation[r][j] = -res.rotation[r][j];
      }
    }
  }
  return res;
}

}  // namespace domainscope
