#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace fsens {

// Built-in benchmark responses.
double linear6(const Eigen::VectorXd& x);    // length 6
double iman_risk(const Eigen::VectorXd& x);  // length 7
double ishigami(const Eigen::VectorXd& x);   // length 3

/// A deterministic response with an evaluation counter shared by all
/// copies. The counter advances by exactly one per evaluated point, so
/// cost accounting (quadrature budgets, single-loop contracts) can be
/// asserted against it.
class ModelFunction {
 public:
  using PointFn = std::function<double(const Eigen::VectorXd&)>;
  using BatchFn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

  ModelFunction(std::string id, int dimension, PointFn evaluator);
  ModelFunction(std::string id, int dimension, BatchFn batch_evaluator);

  const std::string& id() const { return id_; }
  int dimension() const { return dimension_; }

  double operator()(const Eigen::VectorXd& x) const;
  Eigen::VectorXd evaluate_batch(const Eigen::MatrixXd& rows) const;

  long long eval_count() const { return counter_->load(); }
  void reset_eval_count() const { counter_->store(0); }

 private:
  std::string id_;
  int dimension_;
  PointFn point_;
  BatchFn batch_;
  std::shared_ptr<std::atomic<long long>> counter_;
};

/// linear6 / iman / ishigami by name.
ModelFunction builtin_model(const std::string& name);

struct ExternalModelOptions {
  std::size_t batch_size = 10000;
  // "stdin": the batch CSV is fed to the command's standard input;
  // "file": the CSV path is appended as the last argument.
  std::string transport = "stdin";
};

/// Adapter for an external simulator: inputs go out as CSV (header
/// x1..xN, 17 significant digits), one output value per row comes back on
/// standard output in row order. Nonzero exit, short/long output or
/// non-finite values abort the run with a diagnostic naming the row.
ModelFunction external_model(const std::string& command, int dimension,
                             const ExternalModelOptions& options = {});

}  // namespace fsens
