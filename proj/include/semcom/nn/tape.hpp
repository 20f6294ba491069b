/**
 * @file tape.hpp
 * @brief Reverse-mode autodiff on dense double matrices.
 *
 * A Tape records an eager forward computation as a sequence of nodes and
 * backward closures. backward() seeds the (scalar) root with gradient 1 and
 * replays the closures in reverse; gradients of parameter leaves are then
 * accumulated into their Parameter::grad buffers (skipped for frozen
 * parameters, which still pass gradient through to their inputs upstream).
 *
 * The op set is exactly what the encoder/channel/decoder/MINE stacks need;
 * everything is shape-checked at record time and throws std::invalid_argument
 * on mismatch.
 */
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "semcom/nn/mat.hpp"

namespace semcom::nn {

struct Parameter {
  std::string name;
  Mat value;
  Mat grad;
  Mat adam_m;
  Mat adam_v;
  bool trainable = true;

  Parameter() = default;
  Parameter(std::string n, int rows, int cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols),
        adam_m(rows, cols), adam_v(rows, cols) {}
};

class Tape {
 public:
  using Id = int;

  // --- leaves ---
  Id constant(Mat v);
  Id param(Parameter& p);

  // --- elementwise / linear algebra ---
  Id matmul(Id a, Id b);                 // [m x k] * [k x n]
  Id add(Id a, Id b);                    // same shape
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);                    // elementwise
  Id add_rowvec(Id a, Id bias);          // bias [1 x n] broadcast over rows
  Id mul_colvec(Id a, Id c);             // c [n x 1] broadcast over cols
  Id scale(Id a, double s);
  Id scale_node(Id a, Id s);             // s [1 x 1] node, broadcast multiply
  Id relu(Id a);
  Id exp_(Id a);

  // --- shape ops ---
  Id concat_cols(Id a, Id b);
  Id slice_cols(Id a, int c0, int c1);   // half-open [c0, c1)
  Id gather_rows(Id a, std::vector<int> idx);
  Id scatter_sum_rows(Id a, std::vector<int> dst, int out_rows);

  // --- row-wise nonlinearities ---
  Id rowwise_dot(Id a, Id b);            // -> [n x 1]
  Id softmax_rows(Id a);
  Id layer_norm(Id a, Id gamma, Id beta, double eps = 1e-5);
  // Scales each row so the mean squared magnitude of its k complex symbols
  // (2k reals) is one.
  Id power_normalize_rows(Id a, int symbols_per_row);

  // --- reductions ---
  Id mean_all(Id a);                     // -> [1 x 1]
  Id sum_all(Id a);                      // -> [1 x 1]
  Id log_mean_exp(Id a);                 // a [n x 1] -> [1 x 1], stable
  // Weighted mean cross-entropy over rows of logits; empty weights = all-ones.
  Id cross_entropy(Id logits, const std::vector<int>& targets,
                   const std::vector<double>& weights = {});

  // --- access ---
  const Mat& value(Id id) const { return nodes_[id]->val; }
  const Mat& grad(Id id) const { return nodes_[id]->grad; }
  double scalar(Id id) const;

  // Runs reverse-mode accumulation from a [1 x 1] root.
  void backward(Id root);

  std::size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Mat val;
    Mat grad;
  };

  Id push(Mat val);
  Mat& val(Id id) { return nodes_[id]->val; }
  Mat& g(Id id) { return nodes_[id]->grad; }

  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<std::function<void()>> back_ops_;
  std::vector<std::pair<Id, Parameter*>> param_leaves_;
};

}  // namespace semcom::nn
