#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

#include "fsens/divergence.hpp"
#include "fsens/rng.hpp"

using namespace fsens;

namespace {

// Discrete f-divergence between strictly positive probability vectors.
double discrete_divergence(const GeneratingFunction& f, const std::vector<double>& p,
                           const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += q[i] * f(p[i] / q[i]);
  return acc;
}

std::vector<double> random_simplex(std::uint64_t seed, std::size_t k) {
  std::vector<double> v(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = 0.05 + rng_uniform(seed, i);
    total += v[i];
  }
  for (auto& x : v) x /= total;
  return v;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("closed forms match the catalog at a few points") {
  auto tv = GeneratingFunction::parse("tv");
  CHECK(eval_f(tv, 1.0) == 0.0);
  CHECK(eval_f(tv, 2.0) == 1.0);
  CHECK(eval_f(tv, 0.5) == 0.5);

  auto kl = GeneratingFunction::parse("kl");
  const double e = std::exp(1.0);
  CHECK(eval_f(kl, e) == doctest::Approx(e).epsilon(1e-15));
  CHECK(eval_f(kl, 0.5) == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-15));

  auto rkl = GeneratingFunction::parse("rkl");
  CHECK(eval_f(rkl, 0.0) == kInf);
  CHECK(eval_f(rkl, 2.0) == doctest::Approx(-std::log(2.0)));

  // Table-entry spot checks at t in {0.5, 1, 2}.
  struct Row {
    const char* name;
    double at_half, at_two;
  };
  const Row rows[] = {
      {"hellinger", (std::sqrt(0.5) - 1) * (std::sqrt(0.5) - 1),
       (std::sqrt(2.0) - 1) * (std::sqrt(2.0) - 1)},
      {"pearson", 0.25 - 1.0, 3.0},
      {"neyman", (1.0 - 0.25) / 0.5, (1.0 - 4.0) / 2.0},
      {"alpha:0.5", 4.0 * (1.0 - std::pow(0.5, 0.25)) / 0.75,
       4.0 * (1.0 - std::pow(2.0, 0.25)) / 0.75},
      {"vajda:2", 0.25, 1.0},
      {"jeffreys", -0.5 * std::log(0.5), std::log(2.0)},
      {"triangular", 0.25 / 1.5, 1.0 / 3.0},
  };
  for (const auto& row : rows) {
    auto f = GeneratingFunction::parse(row.name);
    CAPTURE(row.name);
    CHECK(eval_f(f, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eval_f(f, 0.5) == doctest::Approx(row.at_half).epsilon(1e-12));
    CHECK(eval_f(f, 2.0) == doctest::Approx(row.at_two).epsilon(1e-12));
  }
}

TEST_CASE("normalisation holds across the catalog") {
  for (const auto& f : divergence_catalog()) {
    CAPTURE(f.name());
    CHECK(eval_f(f, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("negative arguments are a domain error") {
  auto tv = GeneratingFunction::parse("tv");
  CHECK_THROWS_AS(eval_f(tv, -0.1), std::domain_error);
  CHECK_THROWS_AS(eval_f(tv, std::nan("")), std::domain_error);
}

TEST_CASE("limit values f0 and fstar0 match numeric limits when finite") {
  for (const auto& f : divergence_catalog()) {
    CAPTURE(f.name());
    // The alpha entry approaches f(0) only like t^{(1-a)/2}, so its probe
    // sits deeper in the tail than the 1e-12 that suffices elsewhere.
    const double t0 = f.kind() == DivergenceKind::kAlpha ? 1e-30 : 1e-12;
    if (std::isfinite(f.f0()))
      CHECK(eval_f(f, t0) == doctest::Approx(f.f0()).epsilon(1e-6));
    if (std::isfinite(f.fstar0()))
      CHECK(eval_f(f, 1e12) / 1e12 == doctest::Approx(f.fstar0()).epsilon(1e-6));
  }
}

TEST_CASE("convexity on sampled chords") {
  const double lambdas[] = {0.25, 0.5, 0.75};
  for (const auto& f : divergence_catalog()) {
    CAPTURE(f.name());
    for (int i = 0; i < 50; ++i) {
      const double t1 = 100.0 * rng_uniform(7771, 2 * i) + 1e-6;
      const double t2 = 100.0 * rng_uniform(7771, 2 * i + 1) + 1e-6;
      for (double lam : lambdas) {
        const double lhs = eval_f(f, lam * t1 + (1.0 - lam) * t2);
        const double rhs = lam * eval_f(f, t1) + (1.0 - lam) * eval_f(f, t2);
        CHECK(lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("conjugation swaps the known pairs pointwise") {
  auto kl = GeneratingFunction::parse("kl");
  auto rkl = GeneratingFunction::parse("rkl");
  auto tv = GeneratingFunction::parse("tv");
  auto pearson = GeneratingFunction::parse("pearson");
  auto neyman = GeneratingFunction::parse("neyman");
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(eval_f(conjugate(kl), t) == doctest::Approx(eval_f(rkl, t)).epsilon(1e-14));
    CHECK(eval_f(conjugate(tv), t) == doctest::Approx(eval_f(tv, t)).epsilon(1e-14));
  }
  for (double t : {0.5, 2.0})
    CHECK(eval_f(conjugate(pearson), t) ==
          doctest::Approx(eval_f(neyman, t)).epsilon(1e-14));
  // double conjugation restores the function
  for (const auto& f : divergence_catalog()) {
    auto ff = conjugate(conjugate(f));
    for (double t : {0.3, 1.0, 5.0})
      CHECK(eval_f(ff, t) == doctest::Approx(eval_f(f, t)).epsilon(1e-14));
  }
}

TEST_CASE("range upper bounds") {
  CHECK(range_upper_bound(GeneratingFunction::parse("tv")) == 2.0);
  CHECK(range_upper_bound(GeneratingFunction::parse("hellinger")) == 2.0);
  CHECK(range_upper_bound(GeneratingFunction::parse("triangular")) == 2.0);
  CHECK(range_upper_bound(GeneratingFunction::parse("kl")) == kInf);
  CHECK(range_upper_bound(GeneratingFunction::parse("rkl")) == kInf);
  CHECK(range_upper_bound(GeneratingFunction::parse("pearson")) == kInf);
  CHECK(range_upper_bound(GeneratingFunction::parse("neyman")) == kInf);
  CHECK(range_upper_bound(GeneratingFunction::parse("jeffreys")) == kInf);
  CHECK(range_upper_bound(GeneratingFunction::parse("alpha:0.5")) ==
        doctest::Approx(16.0 / 3.0));
}

TEST_CASE("duality identity on discrete measures") {
  for (const auto& f : divergence_catalog()) {
    CAPTURE(f.name());
    const auto fstar = conjugate(f);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      const std::size_t k = 2 + trial % 15;
      const auto p = random_simplex(1000 + trial, k);
      const auto q = random_simplex(2000 + trial, k);
      std::vector<double> qp(k), pq(k);
      double lhs = 0.0, rhs = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        lhs += q[i] * f(p[i] / q[i]);
        rhs += p[i] * fstar(q[i] / p[i]);
      }
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("non-negativity of the discrete divergence") {
  for (const auto& f : divergence_catalog()) {
    CAPTURE(f.name());
    for (std::uint64_t trial = 0; trial < 30; ++trial) {
      const std::size_t k = 2 + trial % 16;
      const auto p = random_simplex(31 * trial + 5, k);
      const auto q = random_simplex(57 * trial + 9, k);
      CHECK(discrete_divergence(f, p, q) >= -1e-12);
    }
  }
}

TEST_CASE("symmetric entries are order-independent") {
  for (const char* name : {"tv", "hellinger", "jeffreys", "triangular"}) {
    auto f = GeneratingFunction::parse(name);
    CAPTURE(name);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      const std::size_t k = 2 + trial % 10;
      const auto p = random_simplex(811 + trial, k);
      const auto q = random_simplex(977 + trial, k);
      CHECK(discrete_divergence(f, p, q) ==
            doctest::Approx(discrete_divergence(f, q, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("selector parsing") {
  CHECK(GeneratingFunction::parse("alpha:0.25").param() == doctest::Approx(0.25));
  CHECK(GeneratingFunction::parse("vajda:3").param() == doctest::Approx(3.0));
  CHECK_THROWS(GeneratingFunction::parse("nonsense"));
  CHECK_THROWS(GeneratingFunction::parse("tv:2"));
  CHECK_THROWS(GeneratingFunction::parse("alpha:1"));
  CHECK_THROWS(GeneratingFunction::parse("vajda:0.5"));
  CHECK(GeneratingFunction::parse("tv").is_metric());
  CHECK(GeneratingFunction::parse("hellinger").is_metric());
  CHECK_FALSE(GeneratingFunction::parse("kl").is_metric());
}
