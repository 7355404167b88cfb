#include "fsens/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsens/parallel.hpp"

namespace fsens {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

double interpolated_quantile(std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

double bandwidth_rule(const Eigen::VectorXd& samples, int joint_dim) {
  const auto L = samples.size();
  if (L < 10) throw std::invalid_argument("bandwidth_rule: need at least 10 samples");
  if (joint_dim < 1) throw std::invalid_argument("bandwidth_rule: dim must be >= 1");
  const double mean = samples.mean();
  const double var = (samples.array() - mean).square().sum() /
                     static_cast<double>(L - 1);
  const double sd = std::sqrt(var);
  std::vector<double> sorted(samples.data(), samples.data() + L);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = interpolated_quantile(sorted, 0.75) -
                     interpolated_quantile(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.349);
  if (!(spread > 0.0))
    throw std::invalid_argument("bandwidth_rule: degenerate sample (zero spread)");
  const double d = static_cast<double>(joint_dim);
  return spread * std::pow(4.0 / (d + 2.0), 1.0 / (d + 4.0)) *
         std::pow(static_cast<double>(L), -1.0 / (d + 4.0));
}

double lscv_scale(const Eigen::MatrixXd& points, const Eigen::VectorXd& reference,
                  double s_min, double s_max) {
  const auto d = points.cols();
  if (reference.size() != d)
    throw std::invalid_argument("lscv_scale: reference bandwidth count mismatch");
  if (!(s_min > 0.0 && s_max > s_min))
    throw std::invalid_argument("lscv_scale: need 0 < s_min < s_max");

  // Deterministic stride subsample; pair statistics need no randomness.
  const std::size_t total = static_cast<std::size_t>(points.rows());
  const std::size_t cap = 8000;
  const std::size_t stride = total > cap ? (total + cap - 1) / cap : 1;
  const std::size_t n = (total + stride - 1) / stride;
  if (n < 50) throw std::invalid_argument("lscv_scale: too few points");
  std::vector<double> scaled(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      scaled[i * d + j] =
          points(static_cast<Eigen::Index>(i * stride), j) / reference(j);

  // Histogram of pair distances out to the widest kernel's support.
  const double r_max = 6.0 * 1.4142135623730951 * s_max;
  const int nbins = 16384;
  const double inv_dr = nbins / r_max;
  std::vector<double> count(nbins, 0.0);
  // cell grid of width r_max over the first axis only: with d <= 3 and the
  // subsample size capped, a single-axis sort window is enough
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scaled[a * d] < scaled[b * d];
  });
  std::vector<double> pts(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) pts[i * d + j] = scaled[order[i] * d + j];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double dx = pts[k * d] - pts[i * d];
      if (dx > r_max) break;  // sorted on the first axis
      double r2 = dx * dx;
      for (Eigen::Index j = 1; j < d; ++j) {
        const double dj = pts[k * d + j] - pts[i * d + j];
        r2 += dj * dj;
      }
      if (r2 >= r_max * r_max) continue;
      ++count[static_cast<int>(std::sqrt(r2) * inv_dr)];
    }
  }

  double best_s = s_max, best_r = std::numeric_limits<double>::infinity();
  const double href_prod = reference.prod();
  const double dn = static_cast<double>(n);
  for (double s = s_min; s <= s_max * 1.0000001; s *= 1.12) {
    double sum_wide = 0.0, sum_kernel = 0.0;  // sqrt(2)s- and s-kernels
    for (int b = 0; b < nbins; ++b) {
      if (count[b] == 0.0) continue;
      const double r = (b + 0.5) / inv_dr;
      sum_wide += count[b] * std::exp(-r * r / (4.0 * s * s));
      sum_kernel += count[b] * std::exp(-r * r / (2.0 * s * s));
    }
    const double sd = std::pow(s, static_cast<double>(d));
    const double norm_wide =
        std::pow(12.566370614359172, -0.5 * static_cast<double>(d));  // (4pi)^-d/2
    const double norm_kernel = std::pow(kTwoPi, -0.5 * static_cast<double>(d));
    const double risk =
        norm_wide * (dn + 2.0 * sum_wide) / (dn * dn * sd * href_prod) -
        4.0 * norm_kernel * sum_kernel / (dn * (dn - 1.0) * sd * href_prod);
    if (risk < best_r) {
      best_r = risk;
      best_s = s;
    }
  }
  return best_s;
}

KdeModel KdeModel::fit(const Eigen::MatrixXd& points,
                       const Eigen::VectorXd& bandwidths, double cutoff) {
  const auto L = points.rows();
  const auto d = points.cols();
  if (L < 2) throw std::invalid_argument("kde fit: need at least 2 points");
  if (d < 1 || d > 3)
    throw std::invalid_argument("kde fit: dimension must be 1, 2 or 3");
  if (bandwidths.size() != d)
    throw std::invalid_argument("kde fit: bandwidth count must match dimension");
  if ((bandwidths.array() <= 0.0).any())
    throw std::invalid_argument("kde fit: bandwidths must be positive");
  if (!points.allFinite())
    throw std::invalid_argument("kde fit: points must be finite");
  if (!(cutoff > 0.0)) throw std::invalid_argument("kde fit: cutoff must be > 0");

  KdeModel m;
  m.dim_ = static_cast<int>(d);
  m.count_ = static_cast<std::size_t>(L);
  m.points_ = points;
  m.bandwidths_ = bandwidths;
  m.cutoff_ = cutoff;
  m.norm_ = 1.0 / (static_cast<double>(L) *
                   std::pow(kTwoPi, 0.5 * static_cast<double>(d)) *
                   bandwidths.prod());

  // Cell index in bandwidth-scaled coordinates, cell edge = cutoff / 4.
  m.cell_width_ = cutoff / 4.0;
  std::vector<double> scaled(static_cast<std::size_t>(L) * d);
  for (Eigen::Index l = 0; l < L; ++l)
    for (Eigen::Index j = 0; j < d; ++j)
      scaled[static_cast<std::size_t>(l) * d + j] = points(l, j) / bandwidths(j);
  std::int64_t total_cells = 1;
  for (Eigen::Index j = 0; j < d; ++j) {
    double lo = scaled[j], hi = scaled[j];
    for (Eigen::Index l = 1; l < L; ++l) {
      lo = std::min(lo, scaled[static_cast<std::size_t>(l) * d + j]);
      hi = std::max(hi, scaled[static_cast<std::size_t>(l) * d + j]);
    }
    m.lo_[j] = lo;
    m.ncells_[j] =
        static_cast<std::int64_t>((hi - lo) / m.cell_width_) + 1;
    total_cells *= m.ncells_[j];
  }
  if (total_cells > static_cast<std::int64_t>(16) * L + 1024) {
    // Outliers can blow up the grid; fall back to a single cell rather
    // than allocate a mostly-empty index.
    m.ncells_[0] = m.ncells_[1] = m.ncells_[2] = 1;
    total_cells = 1;
  }
  auto cell_of = [&](const double* p) {
    std::int64_t id = 0;
    for (int j = 0; j < m.dim_; ++j) {
      std::int64_t c = static_cast<std::int64_t>((p[j] - m.lo_[j]) / m.cell_width_);
      c = std::clamp<std::int64_t>(c, 0, m.ncells_[j] - 1);
      id = id * m.ncells_[j] + c;
    }
    return id;
  };
  std::vector<std::size_t> counts(static_cast<std::size_t>(total_cells) + 1, 0);
  std::vector<std::int64_t> cell_id(m.count_);
  for (std::size_t l = 0; l < m.count_; ++l) {
    cell_id[l] = cell_of(&scaled[l * d]);
    ++counts[static_cast<std::size_t>(cell_id[l]) + 1];
  }
  for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
  m.cell_start_ = counts;
  m.scaled_.resize(scaled.size());
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t l = 0; l < m.count_; ++l) {
    const std::size_t slot = cursor[static_cast<std::size_t>(cell_id[l])]++;
    for (Eigen::Index j = 0; j < d; ++j)
      m.scaled_[slot * d + j] = scaled[l * d + j];
  }
  return m;
}

double KdeModel::eval_exact_one(const double* q) const {
  const int d = dim_;
  double acc = 0.0;
  const double* p = scaled_.data();
  const std::size_t L = count_;
  switch (d) {
    case 1:
      for (std::size_t l = 0; l < L; ++l) {
        const double dx = q[0] - p[l];
        acc += std::exp(-0.5 * dx * dx);
      }
      break;
    case 2:
      for (std::size_t l = 0; l < L; ++l) {
        const double dx = q[0] - p[2 * l];
        const double dy = q[1] - p[2 * l + 1];
        acc += std::exp(-0.5 * (dx * dx + dy * dy));
      }
      break;
    default:
      for (std::size_t l = 0; l < L; ++l) {
        const double dx = q[0] - p[3 * l];
        const double dy = q[1] - p[3 * l + 1];
        const double dz = q[2] - p[3 * l + 2];
        acc += std::exp(-0.5 * (dx * dx + dy * dy + dz * dz));
      }
      break;
  }
  return acc * norm_;
}

double KdeModel::eval_truncated_one(const double* q) const {
  const int d = dim_;
  const double r = cutoff_;
  std::int64_t c0[3] = {0, 0, 0}, c1[3] = {0, 0, 0};
  for (int j = 0; j < d; ++j) {
    const std::int64_t lo =
        static_cast<std::int64_t>(std::floor((q[j] - r - lo_[j]) / cell_width_));
    const std::int64_t hi =
        static_cast<std::int64_t>(std::floor((q[j] + r - lo_[j]) / cell_width_));
    c0[j] = std::max<std::int64_t>(lo, 0);
    c1[j] = std::min<std::int64_t>(hi, ncells_[j] - 1);
    if (c0[j] > c1[j]) return 0.0;
  }
  double acc = 0.0;
  auto scan_cell = [&](std::int64_t cell) {
    const double* p = scaled_.data();
    const std::size_t begin = cell_start_[static_cast<std::size_t>(cell)];
    const std::size_t end = cell_start_[static_cast<std::size_t>(cell) + 1];
    switch (d) {
      case 1:
        for (std::size_t l = begin; l < end; ++l) {
          const double dx = q[0] - p[l];
          if (dx > r || dx < -r) continue;
          acc += std::exp(-0.5 * dx * dx);
        }
        break;
      case 2:
        for (std::size_t l = begin; l < end; ++l) {
          const double dx = q[0] - p[2 * l];
          if (dx > r || dx < -r) continue;
          const double dy = q[1] - p[2 * l + 1];
          if (dy > r || dy < -r) continue;
          acc += std::exp(-0.5 * (dx * dx + dy * dy));
        }
        break;
      default:
        for (std::size_t l = begin; l < end; ++l) {
          const double dx = q[0] - p[3 * l];
          if (dx > r || dx < -r) continue;
          const double dy = q[1] - p[3 * l + 1];
          if (dy > r || dy < -r) continue;
          const double dz = q[2] - p[3 * l + 2];
          if (dz > r || dz < -r) continue;
          acc += std::exp(-0.5 * (dx * dx + dy * dy + dz * dz));
        }
        break;
    }
  };
  switch (d) {
    case 1:
      for (std::int64_t a = c0[0]; a <= c1[0]; ++a) scan_cell(a);
      break;
    case 2:
      for (std::int64_t a = c0[0]; a <= c1[0]; ++a)
        for (std::int64_t b = c0[1]; b <= c1[1]; ++b)
          scan_cell(a * ncells_[1] + b);
      break;
    default:
      for (std::int64_t a = c0[0]; a <= c1[0]; ++a)
        for (std::int64_t b = c0[1]; b <= c1[1]; ++b)
          for (std::int64_t c = c0[2]; c <= c1[2]; ++c)
            scan_cell((a * ncells_[1] + b) * ncells_[2] + c);
      break;
  }
  return acc * norm_;
}

Eigen::VectorXd KdeModel::eval(const Eigen::MatrixXd& queries,
                               KdeEvalMode mode) const {
  if (queries.cols() != dim_)
    throw std::invalid_argument("kde eval: query dimension mismatch");
  if (!queries.allFinite())
    throw std::invalid_argument("kde eval: queries must be finite");
  const std::size_t M = static_cast<std::size_t>(queries.rows());
  Eigen::VectorXd out(M);
  for_each_chunk(M, 1024, [&](std::size_t, std::size_t lo, std::size_t hi) {
    double q[3] = {0, 0, 0};
    for (std::size_t i = lo; i < hi; ++i) {
      for (int j = 0; j < dim_; ++j)
        q[j] = queries(static_cast<Eigen::Index>(i), j) / bandwidths_(j);
      out(static_cast<Eigen::Index>(i)) = mode == KdeEvalMode::kExact
                                              ? eval_exact_one(q)
                                              : eval_truncated_one(q);
    }
  });
  return out;
}

}  // namespace fsens
