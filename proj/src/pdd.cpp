#include "fsens/pdd.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "fsens/parallel.hpp"
#include "fsens/serialization.hpp"

namespace fsens {

namespace {

long long binomial(int a, int k) {
  if (k == 0) return 1;
  if (a < k) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (a - k + i) / i;
  return r;
}

std::vector<std::vector<int>> subsets_of_size(int N, int s) {
  std::vector<std::vector<int>> out;
  if (s == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> pick(s);
  for (int i = 0; i < s; ++i) pick[i] = i + 1;
  for (;;) {
    out.push_back(pick);
    int i = s - 1;
    while (i >= 0 && pick[i] == N - (s - 1 - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

struct VectorKey {
  std::vector<double> v;
  bool operator==(const VectorKey& o) const { return v == o.v; }
};

struct VectorKeyHash {
  std::size_t operator()(const VectorKey& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (double d : k.v) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof(bits));
      h ^= bits;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

}  // namespace

std::vector<MultiIndex> enumerate_terms(int N, int S, int m) {
  if (S < 1 || S > N) throw std::invalid_argument("enumerate_terms: need 1 <= S <= N");
  if (m < 1) throw std::invalid_argument("enumerate_terms: need m >= 1");
  std::vector<MultiIndex> terms;
  for (int s = 1; s <= S; ++s) {
    for (const auto& u : subsets_of_size(N, s)) {
      std::vector<int> deg(s, 1);
      for (;;) {
        terms.push_back({VariableSubset(u), deg});
        int i = s - 1;
        while (i >= 0 && deg[i] == m) deg[i--] = 1;
        if (i < 0) break;
        ++deg[i];
      }
    }
  }
  return terms;
}

PddSurrogate::PddSurrogate(double y_mean, std::vector<MultiIndex> terms,
                           Eigen::VectorXd coefficients,
                           std::vector<BasisFamily> bases, InputModel input,
                           int S, int m, int n)
    : y_mean_(y_mean),
      terms_(std::move(terms)),
      coefficients_(std::move(coefficients)),
      bases_(std::move(bases)),
      input_(std::move(input)),
      S_(S),
      m_(m),
      n_(n) {
  if (static_cast<Eigen::Index>(terms_.size()) != coefficients_.size())
    throw std::invalid_argument("surrogate: term/coefficient size mismatch");
}

double PddSurrogate::eval(const Eigen::VectorXd& x) const {
  const int N = dimension();
  if (x.size() != N) throw std::invalid_argument("surrogate eval: wrong length");
  const Eigen::VectorXd z = to_standard_space(input_, x);
  // One table of psi values per coordinate, reused by every term.
  Eigen::MatrixXd psi(N, m_ + 1);
  for (int i = 0; i < N; ++i)
    psi.row(i) = ortho_poly_values(bases_[i], m_, z(i)).transpose();
  double acc = y_mean_;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& idx = terms_[t].u.indices();
    double prod = coefficients_(static_cast<Eigen::Index>(t));
    for (std::size_t k = 0; k < idx.size(); ++k)
      prod *= psi(idx[k] - 1, terms_[t].degrees[k]);
    acc += prod;
  }
  return acc;
}

Eigen::VectorXd PddSurrogate::eval_batch(const Eigen::MatrixXd& rows) const {
  Eigen::VectorXd out(rows.rows());
  const std::size_t L = static_cast<std::size_t>(rows.rows());
  for_each_chunk(L, 8192, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t l = lo; l < hi; ++l) out(l) = eval(rows.row(l).transpose());
  });
  return out;
}

double eval_surrogate(const PddSurrogate& pdd, const Eigen::VectorXd& x) {
  return pdd.eval(x);
}

PddSurrogate compute_coefficients(const ModelFunction& y, const InputModel& model,
                                  int S, int m, int n) {
  if (!model.independent_law())
    throw std::invalid_argument(
        "compute_coefficients: dependent input is unsupported; only the "
        "exact-density path handles correlated laws");
  if (S < 1 || S > 2)
    throw std::invalid_argument("compute_coefficients: S must be 1 or 2");
  const int N = model.dimension();
  if (S > N) throw std::invalid_argument("compute_coefficients: S exceeds dimension");
  if (y.dimension() != N)
    throw std::invalid_argument("compute_coefficients: model dimension mismatch");
  if (m < 1 || n < 1) throw std::invalid_argument("compute_coefficients: m, n >= 1");

  std::vector<BasisFamily> bases;
  bases.reserve(N);
  for (const auto& marg : model.marginals()) bases.push_back(marg.basis());

  std::map<BasisFamily, GaussRule> rules;
  for (auto b : bases)
    if (!rules.count(b)) rules[b] = gauss_rule(b, n);

  // Per-axis nodes, weights and psi value tables (node r, degree d).
  std::vector<Eigen::VectorXd> axis_nodes(N), axis_weights(N);
  std::vector<Eigen::MatrixXd> psi_axis(N);
  for (int i = 0; i < N; ++i) {
    const auto& rule = rules[bases[i]];
    axis_nodes[i] = rule.nodes;
    axis_weights[i] = rule.weights;
    psi_axis[i].resize(n, m + 1);
    for (int r = 0; r < n; ++r)
      psi_axis[i].row(r) = ortho_poly_values(bases[i], m, rule.nodes(r)).transpose();
  }

  auto terms = enumerate_terms(N, S, m);
  // Terms grouped by subset label for the u-inside-v scans below.
  std::map<std::vector<int>, std::vector<std::size_t>> terms_by_subset;
  for (std::size_t t = 0; t < terms.size(); ++t)
    terms_by_subset[terms[t].u.indices()].push_back(t);

  std::unordered_map<VectorKey, double, VectorKeyHash> cache;
  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(N);
  auto evaluate = [&](const Eigen::VectorXd& z) {
    VectorKey key{{z.data(), z.data() + z.size()}};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double val = y(from_standard_space(model, z));
    cache.emplace(std::move(key), val);
    return val;
  };

  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(terms.size());
  double y_mean = 0.0;

  for (int size_v = 0; size_v <= S; ++size_v) {
    const double sign = ((S - size_v) % 2 == 0 ? 1.0 : -1.0) *
                        static_cast<double>(binomial(N - size_v - 1, S - size_v));
    if (sign == 0.0) continue;
    for (const auto& v : subsets_of_size(N, size_v)) {
      // Nonempty subsets u of v index the coefficient accumulators fed by
      // this anchored grid.
      std::vector<std::pair<std::vector<int>, const std::vector<std::size_t>*>> targets;
      for (int mask = 1; mask < (1 << size_v); ++mask) {
        std::vector<int> u;
        for (int b = 0; b < size_v; ++b)
          if (mask & (1 << b)) u.push_back(v[b]);
        auto it = terms_by_subset.find(u);
        if (it != terms_by_subset.end()) targets.emplace_back(u, &it->second);
      }
      // Tensor loop over the anchored grid.
      std::vector<int> node(size_v, 0);
      Eigen::VectorXd z = z0;
      for (;;) {
        double w = 1.0;
        for (int k = 0; k < size_v; ++k) {
          const int axis = v[k] - 1;
          z(axis) = axis_nodes[axis](node[k]);
          w *= axis_weights[axis](node[k]);
        }
        const double val = evaluate(z);
        y_mean += sign * w * val;
        for (const auto& [u, term_ids] : targets) {
          (void)u;
          for (std::size_t t : *term_ids) {
            double psi_prod = 1.0;
            const auto& idx = terms[t].u.indices();
            for (std::size_t k = 0; k < idx.size(); ++k) {
              int pos = 0;  // position of idx[k] within v
              while (v[pos] != idx[k]) ++pos;
              psi_prod *= psi_axis[idx[k] - 1](node[pos], terms[t].degrees[k]);
            }
            coeff(static_cast<Eigen::Index>(t)) += sign * w * val * psi_prod;
          }
        }
        int k = size_v - 1;
        while (k >= 0 && node[k] == n - 1) node[k--] = 0;
        if (k < 0) break;
        ++node[k];
      }
    }
  }

  return PddSurrogate(y_mean, std::move(terms), std::move(coeff),
                      std::move(bases), model, S, m, n);
}

SobolReport sobol_from_pdd(const PddSurrogate& pdd) {
  const int N = pdd.dimension();
  std::map<std::vector<int>, double> partial;
  double sigma2 = 0.0;
  const auto& terms = pdd.terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double c = pdd.coefficients()(static_cast<Eigen::Index>(t));
    partial[terms[t].u.indices()] += c * c;
    sigma2 += c * c;
  }
  // Degenerate response: only quadrature roundoff left in the coefficients.
  const double floor = 1e-14 * (1.0 + std::abs(pdd.y_mean()));
  if (!(sigma2 > floor * floor))
    throw std::runtime_error("sobol_from_pdd: surrogate variance is zero");
  SobolReport report;
  report.total_variance = sigma2;
  report.univariate = Eigen::VectorXd::Zero(N);
  report.total = Eigen::VectorXd::Zero(N);
  for (const auto& [u, var] : partial) {
    report.partial_variances.emplace_back(VariableSubset(u), var);
    if (u.size() == 1) report.univariate(u[0] - 1) = var / sigma2;
    for (int i : u) report.total(i - 1) += var / sigma2;
  }
  return report;
}

std::string PddSurrogate::to_json() const {
  nlohmann::json j;
  j["y_mean"] = y_mean_;
  j["S"] = S_;
  j["m"] = m_;
  j["n"] = n_;
  nlohmann::json jt = nlohmann::json::array();
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    jt.push_back({{"u", terms_[t].u.indices()},
                  {"j", terms_[t].degrees},
                  {"c", coefficients_(static_cast<Eigen::Index>(t))}});
  }
  j["terms"] = jt;
  j["input"] = input_model_to_json(input_);
  return j.dump(2);
}

PddSurrogate PddSurrogate::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  InputModel model = input_model_from_json(j.at("input"));
  std::vector<BasisFamily> bases;
  for (const auto& marg : model.marginals()) bases.push_back(marg.basis());
  std::vector<MultiIndex> terms;
  std::vector<double> coeff;
  for (const auto& jt : j.at("terms")) {
    terms.push_back({VariableSubset(jt.at("u").get<std::vector<int>>()),
                     jt.at("j").get<std::vector<int>>()});
    coeff.push_back(jt.at("c").get<double>());
  }
  Eigen::VectorXd c = Eigen::Map<Eigen::VectorXd>(coeff.data(), coeff.size());
  return PddSurrogate(j.at("y_mean").get<double>(), std::move(terms), std::move(c),
                      std::move(bases), std::move(model), j.at("S").get<int>(),
                      j.at("m").get<int>(), j.at("n").get<int>());
}

}  // namespace fsens
