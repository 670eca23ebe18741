#include "freezelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace freezelab {

nlohmann::ordered_json TestReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["statistic"] = statistic;
  j["threshold"] = threshold;
  if (p_value >= 0.0) j["p_value"] = p_value;
  j["n1"] = n1;
  if (n2 > 0) j["n2"] = n2;
  j["pass"] = pass;
  if (!metadata.is_null()) j["metadata"] = metadata;
  return j;
}

TestReport ks_one_sample(const std::string& name, std::vector<double> samples,
                         const std::function<double(double)>& cdf, double alpha) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("ks_one_sample: empty sample");
  double c;
  if (std::abs(alpha - 0.10) < 1e-12)
    c = 1.224;
  else if (std::abs(alpha - 0.05) < 1e-12)
    c = 1.358;
  else if (std::abs(alpha - 0.01) < 1e-12)
    c = 1.628;
  else
    throw std::invalid_argument("ks_one_sample: alpha must be 0.10, 0.05 or 0.01");

  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, (i + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }

  TestReport r;
  r.name = name;
  r.statistic = d;
  r.threshold = c / std::sqrt(static_cast<double>(n));
  r.n1 = n;
  r.pass = d <= r.threshold;

  const double lambda = std::sqrt(static_cast<double>(n)) * d;
  double q = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    q += term;
    if (std::abs(term) < 1e-12) break;
  }
  r.p_value = std::clamp(q, 0.0, 1.0);
  r.metadata["alpha"] = alpha;
  r.metadata["c_alpha"] = c;
  return r;
}

namespace {

std::size_t draw_index(RngStream& rng, std::size_t bound) {
  const std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = top - top % bound;
  std::uint64_t x;
  do {
    x = rng.next_u64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

// Sum of Euclidean distances over unordered pairs of rows, float coordinates
// in column-major buffers. Fixed-dimension bodies keep the inner loop
// vectorizable.
template <int D>
double pair_sum_fixed(const float* const* cols, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const float x0 = cols[0][i];
    float x1 = 0.0f, x2 = 0.0f;
    if constexpr (D >= 2) x1 = cols[1][i];
    if constexpr (D >= 3) x2 = cols[2][i];
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const float d0 = x0 - cols[0][j];
      float acc = d0 * d0;
      if constexpr (D >= 2) {
        const float d1 = x1 - cols[1][j];
        acc += d1 * d1;
      }
      if constexpr (D >= 3) {
        const float d2 = x2 - cols[2][j];
        acc += d2 * d2;
      }
      row += std::sqrt(acc);
    }
    total += row;
  }
  return total;
}

double pair_sum_generic(const float* const* cols, int dim, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      float acc = 0.0f;
      for (int c = 0; c < dim; ++c) {
        const float d = cols[c][i] - cols[c][j];
        acc += d * d;
      }
      row += std::sqrt(acc);
    }
    total += row;
  }
  return total;
}

double pair_sum(const std::vector<const float*>& cols, int dim, std::size_t n) {
  switch (dim) {
    case 1:
      return pair_sum_fixed<1>(cols.data(), n);
    case 2:
      return pair_sum_fixed<2>(cols.data(), n);
    case 3:
      return pair_sum_fixed<3>(cols.data(), n);
    default:
      return pair_sum_generic(cols.data(), dim, n);
  }
}

}  // namespace

TestReport energy_two_sample(const std::string& name, const std::vector<double>& x,
                             const std::vector<double>& y, int dim, int permutations,
                             double alpha, RngStream& rng) {
  if (dim <= 0) throw std::invalid_argument("energy_two_sample: dim must be positive");
  if (x.size() % dim != 0 || y.size() % dim != 0)
    throw std::invalid_argument("energy_two_sample: data size not a multiple of dim");
  const std::size_t n = x.size() / dim;
  const std::size_t m = y.size() / dim;
  if (n < 2 || m < 2) throw std::invalid_argument("energy_two_sample: need two rows per sample");
  if (permutations < 1)
    throw std::invalid_argument("energy_two_sample: need at least one permutation");
  const std::size_t total = n + m;

  std::vector<std::vector<float>> pooled(dim, std::vector<float>(total));
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < dim; ++c) pooled[c][i] = static_cast<float>(x[i * dim + c]);
  for (std::size_t i = 0; i < m; ++i)
    for (int c = 0; c < dim; ++c) pooled[c][n + i] = static_cast<float>(y[i * dim + c]);

  std::vector<const float*> pooled_ptrs(dim);
  for (int c = 0; c < dim; ++c) pooled_ptrs[c] = pooled[c].data();
  // Pooled pair total is permutation invariant, so the cross-group sum of any
  // assignment is pooled_total minus the two within-group sums.
  const double pooled_total = pair_sum(pooled_ptrs, dim, total);

  std::vector<std::vector<float>> bufx(dim, std::vector<float>(n));
  std::vector<std::vector<float>> bufy(dim, std::vector<float>(m));
  std::vector<const float*> px(dim), py(dim);
  for (int c = 0; c < dim; ++c) {
    px[c] = bufx[c].data();
    py[c] = bufy[c].data();
  }

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;

  const auto energy_of = [&](const std::vector<std::size_t>& ord) {
    for (int c = 0; c < dim; ++c) {
      float* bx = bufx[c].data();
      float* by = bufy[c].data();
      const float* src = pooled[c].data();
      for (std::size_t i = 0; i < n; ++i) bx[i] = src[ord[i]];
      for (std::size_t i = 0; i < m; ++i) by[i] = src[ord[n + i]];
    }
    const double wx = pair_sum(px, dim, n);
    const double wy = pair_sum(py, dim, m);
    const double sxy = pooled_total - wx - wy;
    const double nd = static_cast<double>(n), md = static_cast<double>(m);
    return 2.0 * sxy / (nd * md) - 2.0 * wx / (nd * nd) - 2.0 * wy / (md * md);
  };

  const double observed = energy_of(order);

  int exceed = 0;
  for (int p = 0; p < permutations; ++p) {
    for (std::size_t i = total - 1; i > 0; --i) {
      const std::size_t j = draw_index(rng, i + 1);
      std::swap(order[i], order[j]);
    }
    if (energy_of(order) >= observed) ++exceed;
  }
  const double p_value = (1.0 + exceed) / (permutations + 1.0);

  TestReport r;
  r.name = name;
  r.statistic = observed;
  r.threshold = alpha;
  r.p_value = p_value;
  r.n1 = n;
  r.n2 = m;
  r.pass = p_value > alpha;
  r.metadata["permutations"] = permutations;
  r.metadata["dim"] = dim;
  return r;
}

McNormalization mc_normalize(const std::function<double(const std::vector<double>&)>& log_target,
                             const Proposal& proposal, std::size_t count, RngStream& rng) {
  if (count < 2) throw std::invalid_argument("mc_normalize: need at least two draws");
  McNormalization out;
  out.count = count;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::vector<double> y = proposal.draw(rng);
    const double lq = proposal.log_density(y);
    if (!std::isfinite(lq)) {
      out.invalid_proposal = true;
      return out;
    }
    const double lt = log_target(y);
    double w = 0.0;
    if (lt != -std::numeric_limits<double>::infinity()) {
      if (!std::isfinite(lt)) {
        out.invalid_proposal = true;
        return out;
      }
      w = std::exp(lt - lq);
      if (!std::isfinite(w)) {
        out.invalid_proposal = true;
        return out;
      }
    }
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / static_cast<double>(count);
  const double var =
      std::max(0.0, (sum_sq - static_cast<double>(count) * mean * mean) / (count - 1.0));
  out.estimate = mean;
  out.std_error = std::sqrt(var / static_cast<double>(count));
  out.pass = std::abs(mean - 1.0) <= std::max(3.0 * out.std_error, 0.01);
  return out;
}

TestReport mc_normalization_report(const std::string& name, const McNormalization& mc) {
  TestReport r;
  r.name = name;
  r.statistic = mc.estimate;
  r.threshold = std::max(3.0 * mc.std_error, 0.01);
  r.n1 = mc.count;
  r.pass = mc.pass;
  r.metadata["std_error"] = mc.std_error;
  r.metadata["invalid_proposal"] = mc.invalid_proposal;
  return r;
}

std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: h must be positive");
  std::vector<double> g(x.size());
  std::vector<double> p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double fp = f(p);
    p[i] = x[i] - h;
    const double fm = f(p);
    p[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Moments empirical_moments(const std::vector<double>& data, int dim) {
  if (dim <= 0) throw std::invalid_argument("empirical_moments: dim must be positive");
  if (data.size() % dim != 0)
    throw std::invalid_argument("empirical_moments: data size not a multiple of dim");
  const std::size_t n = data.size() / dim;
  if (n < 2) throw std::invalid_argument("empirical_moments: need at least two rows");

  Moments mo;
  mo.count = n;
  mo.mean.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < dim; ++c) mo.mean[c] += data[i * dim + c];
  for (auto& v : mo.mean) v /= static_cast<double>(n);

  SymMatrix cov(dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += (data[i * dim + a] - mo.mean[a]) * (data[i * dim + b] - mo.mean[b]);
      cov.set(a, b, s / (n - 1.0));
    }
  }
  mo.covariance = cov;
  return mo;
}

}  // namespace freezelab
