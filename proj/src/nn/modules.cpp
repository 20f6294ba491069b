/**
 * @file modules.cpp
 */
#include "semcom/nn/modules.hpp"

#include <cmath>
#include <stdexcept>

namespace semcom::nn {

Parameter& ParamSet::add(const std::string& name, int rows, int cols) {
  auto [it, inserted] = params_.try_emplace(name, name, rows, cols);
  if (!inserted) throw std::invalid_argument("ParamSet: duplicate parameter " + name);
  order_.push_back(name);
  return it->second;
}

Parameter& ParamSet::get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::invalid_argument("ParamSet: unknown parameter " + name);
  return it->second;
}

const Parameter& ParamSet::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::invalid_argument("ParamSet: unknown parameter " + name);
  return it->second;
}

bool ParamSet::has(const std::string& name) const { return params_.count(name) > 0; }

std::vector<Parameter*> ParamSet::all() {
  std::vector<Parameter*> out;
  out.reserve(order_.size());
  for (const auto& n : order_) out.push_back(&params_.at(n));
  return out;
}

std::vector<const Parameter*> ParamSet::all() const {
  std::vector<const Parameter*> out;
  out.reserve(order_.size());
  for (const auto& n : order_) out.push_back(&params_.at(n));
  return out;
}

void ParamSet::zero_grad() {
  for (auto& [_, p] : params_) p.grad.zero();
}

void ParamSet::set_trainable(bool trainable) {
  for (auto& [_, p] : params_) p.trainable = trainable;
}

std::size_t ParamSet::count_values() const {
  std::size_t n = 0;
  for (const auto& [_, p] : params_) n += p.value.size();
  return n;
}

void Adam::step(std::vector<Parameter*> params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (Parameter* p : params) {
    if (!p->trainable) continue;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double gr = p->grad.a[i];
      p->adam_m.a[i] = cfg_.beta1 * p->adam_m.a[i] + (1.0 - cfg_.beta1) * gr;
      p->adam_v.a[i] = cfg_.beta2 * p->adam_v.a[i] + (1.0 - cfg_.beta2) * gr * gr;
      const double mhat = p->adam_m.a[i] / bc1;
      const double vhat = p->adam_v.a[i] / bc2;
      p->value.a[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

void glorot_init(Parameter& w, Rng& rng, double gain) {
  const double limit = gain * std::sqrt(6.0 / (w.value.rows + w.value.cols));
  for (auto& x : w.value.a) x = rng.uniform(-limit, limit);
}

void Linear::init(ParamSet& ps, const std::string& name, int in, int out, Rng& rng,
                  double gain) {
  w = &ps.add(name + ".w", in, out);
  b = &ps.add(name + ".b", 1, out);
  glorot_init(*w, rng, gain);
}

Tape::Id Linear::forward(Tape& t, Tape::Id x) const {
  return t.add_rowvec(t.matmul(x, t.param(*w)), t.param(*b));
}

void LayerNorm::init(ParamSet& ps, const std::string& name, int dim) {
  gamma = &ps.add(name + ".gamma", 1, dim);
  beta = &ps.add(name + ".beta", 1, dim);
  for (auto& x : gamma->value.a) x = 1.0;
}

Tape::Id LayerNorm::forward(Tape& t, Tape::Id x) const {
  return t.layer_norm(x, t.param(*gamma), t.param(*beta));
}

}  // namespace semcom::nn
