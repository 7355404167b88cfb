#include <doctest.h>

#include <cmath>
#include <cstring>
#include <cstdlib>
#include <fstream>

#include "fsens/test_functions.hpp"

using namespace fsens;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

// Writes a small shell script and returns its path.
std::string write_script(const char* name, const char* body) {
  std::string path = std::string("/tmp/") + name;
  std::ofstream out(path);
  out << "#!/bin/sh\n" << body;
  out.close();
  std::system(("chmod +x " + path).c_str());
  return path;
}

}  // namespace

TEST_CASE("linear6 values") {
  CHECK(linear6(Eigen::VectorXd::Zero(6)) == 0.0);
  CHECK(linear6(Eigen::VectorXd::Ones(6)) == doctest::Approx(7.5).epsilon(1e-15));
  CHECK(linear6(vec({1, 0, 0, 0, 0, 0})) == 1.0);
  CHECK_THROWS(linear6(Eigen::VectorXd::Zero(5)));
}

TEST_CASE("iman values") {
  CHECK(iman_risk(Eigen::VectorXd::Ones(7)) == doctest::Approx(10.0));
  CHECK(iman_risk(vec({1, 0, 1, 1, 1, 1, 1})) == doctest::Approx(4.0));
  CHECK(iman_risk(Eigen::VectorXd::Zero(7)) == 0.0);
  CHECK_THROWS(iman_risk(Eigen::VectorXd::Zero(6)));
}

TEST_CASE("ishigami values") {
  CHECK(ishigami(Eigen::VectorXd::Zero(3)) == 0.0);
  CHECK(ishigami(vec({M_PI / 2, 0, 0})) == doctest::Approx(1.0).epsilon(1e-15));
  const double expected = 1.0 + 7.0 + 0.1 * std::pow(M_PI, 4);
  CHECK(ishigami(vec({M_PI / 2, M_PI / 2, M_PI})) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("evaluation counting and determinism") {
  auto model = builtin_model("ishigami");
  CHECK(model.eval_count() == 0);
  const auto x = vec({0.3, -1.2, 2.2});
  const double y1 = model(x);
  const double y2 = model(x);
  CHECK(std::memcmp(&y1, &y2, sizeof(double)) == 0);
  CHECK(model.eval_count() == 2);
  Eigen::MatrixXd batch(5, 3);
  batch.setConstant(0.25);
  model.evaluate_batch(batch);
  CHECK(model.eval_count() == 7);
  auto copy = model;  // copies share the counter
  copy(x);
  CHECK(model.eval_count() == 8);
  model.reset_eval_count();
  CHECK(copy.eval_count() == 0);
}

TEST_CASE("ishigami has no main effect of the third input") {
  // mean over (x1, x2) at fixed x3, by midpoint quadrature on [-pi, pi]^2
  auto conditional_mean = [](double x3) {
    const int n = 400;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Eigen::VectorXd x(3);
        x << -M_PI + (i + 0.5) * 2.0 * M_PI / n, -M_PI + (j + 0.5) * 2.0 * M_PI / n,
            x3;
        acc += ishigami(x);
      }
    return acc / (n * n);
  };
  const double at0 = conditional_mean(0.0);
  CHECK(conditional_mean(-2.0) == doctest::Approx(at0).epsilon(1e-10));
  CHECK(conditional_mean(2.0) == doctest::Approx(at0).epsilon(1e-10));
}

TEST_CASE("external adapter round-trips a sum script") {
  const auto script = write_script("fsens_sum.sh",
                                   "awk -F, 'NR>1 { s=0; for (i=1;i<=NF;i++) "
                                   "s+=$i; print s }'\n");
  auto model = external_model(script, 2);
  Eigen::MatrixXd batch(3, 2);
  batch.setOnes();
  const auto out = model.evaluate_batch(batch);
  CHECK(out.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(out(i) == doctest::Approx(2.0));
  CHECK(model.eval_count() == 3);
}

TEST_CASE("external adapter file transport") {
  const auto script = write_script(
      "fsens_sum_file.sh",
      "awk -F, 'NR>1 { s=0; for (i=1;i<=NF;i++) s+=$i; print s }' \"$1\"\n");
  ExternalModelOptions opt;
  opt.transport = "file";
  auto model = external_model(script, 3, opt);
  Eigen::MatrixXd batch(2, 3);
  batch << 1, 2, 3, 4, 5, 6;
  const auto out = model.evaluate_batch(batch);
  CHECK(out(0) == doctest::Approx(6.0));
  CHECK(out(1) == doctest::Approx(15.0));
}

TEST_CASE("external adapter protocol violations abort with the row") {
  const auto short_script =
      write_script("fsens_short.sh", "printf '1\\n2\\n'\n");
  auto short_model = external_model(short_script, 2);
  Eigen::MatrixXd batch(3, 2);
  batch.setOnes();
  CHECK_THROWS_WITH_AS(short_model.evaluate_batch(batch),
                       doctest::Contains("row 3"), std::runtime_error);

  const auto nan_script =
      write_script("fsens_nan.sh", "printf '1\\nnan\\n3\\n'\n");
  auto nan_model = external_model(nan_script, 2);
  CHECK_THROWS_WITH_AS(nan_model.evaluate_batch(batch),
                       doctest::Contains("row 2"), std::runtime_error);

  const auto fail_script = write_script("fsens_fail.sh", "exit 3\n");
  auto fail_model = external_model(fail_script, 2);
  CHECK_THROWS_AS(fail_model.evaluate_batch(batch), std::runtime_error);
}

TEST_CASE("csv serialisation keeps 17 significant digits") {
  const auto script = write_script("fsens_echo1.sh",
                                   "awk -F, 'NR>1 { print $1 }'\n");
  auto model = external_model(script, 1);
  Eigen::MatrixXd batch(1, 1);
  batch(0, 0) = 0.1234567890123456789;  // rounds to nearest double
  const auto out = model.evaluate_batch(batch);
  CHECK(out(0) == batch(0, 0));  // lossless round-trip through the CSV
}
