/**
 * @file modules.hpp
 * @brief Parameter registry, Adam optimizer, and the small layer types shared
 *        by the encoder/channel/decoder networks.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "semcom/nn/mat.hpp"
#include "semcom/nn/tape.hpp"

namespace semcom::nn {

// Owns named parameters. Modules register their tensors here so the optimizer,
// checkpoint writer and freeze logic all see one flat list.
class ParamSet {
 public:
  Parameter& add(const std::string& name, int rows, int cols);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool has(const std::string& name) const;

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;

  void zero_grad();
  void set_trainable(bool trainable);
  std::size_t count_values() const;

 private:
  std::map<std::string, Parameter> params_;
  std::vector<std::string> order_;
};

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  explicit Adam(AdamConfig cfg) : cfg_(cfg) {}
  // Applies one update to every trainable parameter with its accumulated grad.
  void step(std::vector<Parameter*> params);
  std::int64_t steps_taken() const { return t_; }

 private:
  AdamConfig cfg_;
  std::int64_t t_ = 0;
};

// Weight init: uniform(-limit, limit) with limit = sqrt(6 / (fan_in + fan_out)),
// biases zero. `gain` rescales for layers that should start near-identity.
void glorot_init(Parameter& w, Rng& rng, double gain = 1.0);

struct Linear {
  Parameter* w = nullptr;  // [in x out]
  Parameter* b = nullptr;  // [1 x out]

  void init(ParamSet& ps, const std::string& name, int in, int out, Rng& rng,
            double gain = 1.0);
  Tape::Id forward(Tape& t, Tape::Id x) const;
  int in_dim() const { return w->value.rows; }
  int out_dim() const { return w->value.cols; }
};

struct LayerNorm {
  Parameter* gamma = nullptr;
  Parameter* beta = nullptr;

  void init(ParamSet& ps, const std::string& name, int dim);
  Tape::Id forward(Tape& t, Tape::Id x) const;
};

}  // namespace semcom::nn
