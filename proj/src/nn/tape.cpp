/**
 * @file tape.cpp
 */
#include "semcom/nn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "semcom/kernels/kernels.hpp"

namespace semcom::nn {

namespace k = semcom::kernels;

namespace {
[[noreturn]] void shape_error(const char* op, const Mat& a, const Mat& b) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " +
                              std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                              " vs " + std::to_string(b.rows) + "x" +
                              std::to_string(b.cols));
}
}  // namespace

Tape::Id Tape::push(Mat val) {
  auto node = std::make_unique<Node>();
  node->val = std::move(val);
  node->grad = Mat(node->val.rows, node->val.cols);
  nodes_.push_back(std::move(node));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::constant(Mat v) { return push(std::move(v)); }

Tape::Id Tape::param(Parameter& p) {
  Id id = push(p.value);
  param_leaves_.emplace_back(id, &p);
  return id;
}

double Tape::scalar(Id id) const {
  const Mat& m = nodes_[id]->val;
  if (m.rows != 1 || m.cols != 1) throw std::invalid_argument("scalar: node is not 1x1");
  return m.a[0];
}

Tape::Id Tape::matmul(Id a, Id b) {
  const Mat& A = val(a);
  const Mat& B = val(b);
  if (A.cols != B.rows) shape_error("matmul", A, B);
  Mat out(A.rows, B.cols);
  k::gemm_nn(A.rows, B.cols, A.cols, A.data(), B.data(), out.data(), 0.0);
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, b, id] {
    const Mat& A2 = val(a);
    const Mat& B2 = val(b);
    const Mat& dC = g(id);
    // dA += dC * B^T ; dB += A^T * dC
    k::gemm_nt(A2.rows, A2.cols, B2.cols, dC.data(), B2.data(), g(a).data(), 1.0);
    k::gemm_tn(B2.rows, B2.cols, A2.rows, A2.data(), dC.data(), g(b).data(), 1.0);
  });
  return id;
}

Tape::Id Tape::add(Id a, Id b) {
  const Mat& A = val(a);
  const Mat& B = val(b);
  if (!A.same_shape(B)) shape_error("add", A, B);
  Mat out(A.rows, A.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] = A.a[i] + B.a[i];
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, b, id] {
    k::axpy(g(id).size(), 1.0, g(id).data(), g(a).data());
    k::axpy(g(id).size(), 1.0, g(id).data(), g(b).data());
  });
  return id;
}

Tape::Id Tape::sub(Id a, Id b) {
  const Mat& A = val(a);
  const Mat& B = val(b);
  if (!A.same_shape(B)) shape_error("sub", A, B);
  Mat out(A.rows, A.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] = A.a[i] - B.a[i];
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, b, id] {
    k::axpy(g(id).size(), 1.0, g(id).data(), g(a).data());
    k::axpy(g(id).size(), -1.0, g(id).data(), g(b).data());
  });
  return id;
}

Tape::Id Tape::mul(Id a, Id b) {
  const Mat& A = val(a);
  const Mat& B = val(b);
  if (!A.same_shape(B)) shape_error("mul", A, B);
  Mat out(A.rows, A.cols);
  k::mul(out.size(), A.data(), B.data(), out.data());
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, b, id] {
    const Mat& dC = g(id);
    const Mat& A2 = val(a);
    const Mat& B2 = val(b);
    Mat& dA = g(a);
    Mat& dB = g(b);
    for (std::size_t i = 0; i < dC.size(); ++i) {
      dA.a[i] += dC.a[i] * B2.a[i];
      dB.a[i] += dC.a[i] * A2.a[i];
    }
  });
  return id;
}

Tape::Id Tape::add_rowvec(Id a, Id bias) {
  const Mat& A = val(a);
  const Mat& B = val(bias);
  if (B.rows != 1 || B.cols != A.cols) shape_error("add_rowvec", A, B);
  Mat out(A.rows, A.cols);
  for (int r = 0; r < A.rows; ++r)
    for (int c = 0; c < A.cols; ++c) out.at(r, c) = A.at(r, c) + B.at(0, c);
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, bias, id] {
    const Mat& dC = g(id);
    k::axpy(dC.size(), 1.0, dC.data(), g(a).data());
    Mat& dB = g(bias);
    for (int r = 0; r < dC.rows; ++r)
      k::axpy(dC.cols, 1.0, dC.row(r), dB.data());
  });
  return id;
}

Tape::Id Tape::mul_colvec(Id a, Id c) {
  const Mat& A = val(a);
  const Mat& C = val(c);
  if (C.cols != 1 || C.rows != A.rows) shape_error("mul_colvec", A, C);
  Mat out(A.rows, A.cols);
  for (int r = 0; r < A.rows; ++r) {
    const double s = C.at(r, 0);
    for (int cc = 0; cc < A.cols; ++cc) out.at(r, cc) = A.at(r, cc) * s;
  }
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, c, id] {
    const Mat& dC = g(id);
    const Mat& A2 = val(a);
    const Mat& C2 = val(c);
    Mat& dA = g(a);
    Mat& dc = g(c);
    for (int r = 0; r < dC.rows; ++r) {
      const double s = C2.at(r, 0);
      dc.at(r, 0) += k::dot(dC.cols, dC.row(r), A2.row(r));
      k::axpy(dC.cols, s, dC.row(r), dA.row(r));
    }
  });
  return id;
}

Tape::Id Tape::scale(Id a, double s) {
  const Mat& A = val(a);
  Mat out(A.rows, A.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] = A.a[i] * s;
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, s, id] {
    k::axpy(g(id).size(), s, g(id).data(), g(a).data());
  });
  return id;
}

Tape::Id Tape::scale_node(Id a, Id s) {
  const Mat& A = val(a);
  const Mat& S = val(s);
  if (S.rows != 1 || S.cols != 1) throw std::invalid_argument("scale_node: s must be 1x1");
  const double sv = S.a[0];
  Mat out(A.rows, A.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] = A.a[i] * sv;
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, s, id] {
    const Mat& dC = g(id);
    const Mat& A2 = val(a);
    const double sv2 = val(s).a[0];
    k::axpy(dC.size(), sv2, dC.data(), g(a).data());
    g(s).a[0] += k::dot(dC.size(), dC.data(), A2.data());
  });
  return id;
}

Tape::Id Tape::relu(Id a) {
  const Mat& A = val(a);
  Mat out(A.rows, A.cols);
  k::relu(A.size(), A.data(), out.data());
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id] {
    k::relu_bwd(g(id).size(), val(a).data(), g(id).data(), g(a).data());
  });
  return id;
}

Tape::Id Tape::exp_(Id a) {
  const Mat& A = val(a);
  Mat out(A.rows, A.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] = std::exp(A.a[i]);
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id] {
    const Mat& dC = g(id);
    const Mat& Y = val(id);
    Mat& dA = g(a);
    for (std::size_t i = 0; i < dC.size(); ++i) dA.a[i] += dC.a[i] * Y.a[i];
  });
  return id;
}

Tape::Id Tape::concat_cols(Id a, Id b) {
  const Mat& A = val(a);
  const Mat& B = val(b);
  if (A.rows != B.rows) shape_error("concat_cols", A, B);
  Mat out(A.rows, A.cols + B.cols);
  for (int r = 0; r < A.rows; ++r) {
    std::copy(A.row(r), A.row(r) + A.cols, out.row(r));
    std::copy(B.row(r), B.row(r) + B.cols, out.row(r) + A.cols);
  }
  Id id = push(std::move(out));
  const int ac = A.cols;
  back_ops_.push_back([this, a, b, id, ac] {
    const Mat& dC = g(id);
    Mat& dA = g(a);
    Mat& dB = g(b);
    for (int r = 0; r < dC.rows; ++r) {
      k::axpy(ac, 1.0, dC.row(r), dA.row(r));
      k::axpy(dC.cols - ac, 1.0, dC.row(r) + ac, dB.row(r));
    }
  });
  return id;
}

Tape::Id Tape::slice_cols(Id a, int c0, int c1) {
  const Mat& A = val(a);
  if (c0 < 0 || c1 > A.cols || c0 >= c1)
    throw std::invalid_argument("slice_cols: bad range");
  Mat out(A.rows, c1 - c0);
  for (int r = 0; r < A.rows; ++r)
    std::copy(A.row(r) + c0, A.row(r) + c1, out.row(r));
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, c0, id] {
    const Mat& dC = g(id);
    Mat& dA = g(a);
    for (int r = 0; r < dC.rows; ++r)
      k::axpy(dC.cols, 1.0, dC.row(r), dA.row(r) + c0);
  });
  return id;
}

Tape::Id Tape::gather_rows(Id a, std::vector<int> idx) {
  const Mat& A = val(a);
  Mat out(static_cast<int>(idx.size()), A.cols);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] < 0 || idx[r] >= A.rows)
      throw std::invalid_argument("gather_rows: index out of range");
    std::copy(A.row(idx[r]), A.row(idx[r]) + A.cols, out.row(static_cast<int>(r)));
  }
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id, idx = std::move(idx)] {
    const Mat& dC = g(id);
    Mat& dA = g(a);
    for (std::size_t r = 0; r < idx.size(); ++r)
      k::axpy(dC.cols, 1.0, dC.row(static_cast<int>(r)), dA.row(idx[r]));
  });
  return id;
}

Tape::Id Tape::scatter_sum_rows(Id a, std::vector<int> dst, int out_rows) {
  const Mat& A = val(a);
  if (static_cast<int>(dst.size()) != A.rows)
    throw std::invalid_argument("scatter_sum_rows: index count != rows");
  Mat out(out_rows, A.cols);
  for (std::size_t r = 0; r < dst.size(); ++r) {
    if (dst[r] < 0 || dst[r] >= out_rows)
      throw std::invalid_argument("scatter_sum_rows: index out of range");
    k::axpy(A.cols, 1.0, A.row(static_cast<int>(r)), out.row(dst[r]));
  }
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id, dst = std::move(dst)] {
    const Mat& dC = g(id);
    Mat& dA = g(a);
    for (std::size_t r = 0; r < dst.size(); ++r)
      k::axpy(dC.cols, 1.0, dC.row(dst[r]), dA.row(static_cast<int>(r)));
  });
  return id;
}

Tape::Id Tape::rowwise_dot(Id a, Id b) {
  const Mat& A = val(a);
  const Mat& B = val(b);
  if (!A.same_shape(B)) shape_error("rowwise_dot", A, B);
  Mat out(A.rows, 1);
  for (int r = 0; r < A.rows; ++r) out.at(r, 0) = k::dot(A.cols, A.row(r), B.row(r));
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, b, id] {
    const Mat& dC = g(id);
    const Mat& A2 = val(a);
    const Mat& B2 = val(b);
    Mat& dA = g(a);
    Mat& dB = g(b);
    for (int r = 0; r < dC.rows; ++r) {
      const double s = dC.at(r, 0);
      k::axpy(A2.cols, s, B2.row(r), dA.row(r));
      k::axpy(A2.cols, s, A2.row(r), dB.row(r));
    }
  });
  return id;
}

Tape::Id Tape::softmax_rows(Id a) {
  const Mat& A = val(a);
  Mat out(A.rows, A.cols);
  for (int r = 0; r < A.rows; ++r) {
    const double* x = A.row(r);
    double mx = x[0];
    for (int c = 1; c < A.cols; ++c) mx = std::max(mx, x[c]);
    double z = 0.0;
    for (int c = 0; c < A.cols; ++c) {
      out.at(r, c) = std::exp(x[c] - mx);
      z += out.at(r, c);
    }
    for (int c = 0; c < A.cols; ++c) out.at(r, c) /= z;
  }
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id] {
    const Mat& S = val(id);
    const Mat& dC = g(id);
    Mat& dA = g(a);
    for (int r = 0; r < S.rows; ++r) {
      const double dots = k::dot(S.cols, dC.row(r), S.row(r));
      for (int c = 0; c < S.cols; ++c)
        dA.at(r, c) += S.at(r, c) * (dC.at(r, c) - dots);
    }
  });
  return id;
}

Tape::Id Tape::layer_norm(Id a, Id gamma, Id beta, double eps) {
  const Mat& A = val(a);
  const Mat& G = val(gamma);
  const Mat& B = val(beta);
  if (G.rows != 1 || G.cols != A.cols) shape_error("layer_norm gamma", A, G);
  if (B.rows != 1 || B.cols != A.cols) shape_error("layer_norm beta", A, B);
  const int d = A.cols;
  Mat out(A.rows, d);
  Mat xhat(A.rows, d);
  std::vector<double> inv_std(A.rows);
  for (int r = 0; r < A.rows; ++r) {
    const double* x = A.row(r);
    double mu = k::sum(d, x) / d;
    double var = 0.0;
    for (int c = 0; c < d; ++c) var += (x[c] - mu) * (x[c] - mu);
    var /= d;
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[r] = is;
    for (int c = 0; c < d; ++c) {
      xhat.at(r, c) = (x[c] - mu) * is;
      out.at(r, c) = xhat.at(r, c) * G.at(0, c) + B.at(0, c);
    }
  }
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, gamma, beta, id, xhat = std::move(xhat),
                       inv_std = std::move(inv_std)] {
    const Mat& dC = g(id);
    const Mat& G2 = val(gamma);
    Mat& dA = g(a);
    Mat& dG = g(gamma);
    Mat& dB = g(beta);
    const int d = dC.cols;
    for (int r = 0; r < dC.rows; ++r) {
      double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
      for (int c = 0; c < d; ++c) {
        const double dxh = dC.at(r, c) * G2.at(0, c);
        mean_dxhat += dxh;
        mean_dxhat_xhat += dxh * xhat.at(r, c);
        dG.at(0, c) += dC.at(r, c) * xhat.at(r, c);
        dB.at(0, c) += dC.at(r, c);
      }
      mean_dxhat /= d;
      mean_dxhat_xhat /= d;
      for (int c = 0; c < d; ++c) {
        const double dxh = dC.at(r, c) * G2.at(0, c);
        dA.at(r, c) += inv_std[r] * (dxh - mean_dxhat - xhat.at(r, c) * mean_dxhat_xhat);
      }
    }
  });
  return id;
}

Tape::Id Tape::power_normalize_rows(Id a, int symbols_per_row) {
  const Mat& A = val(a);
  if (A.cols != 2 * symbols_per_row)
    throw std::invalid_argument("power_normalize_rows: cols != 2k");
  Mat out(A.rows, A.cols);
  std::vector<double> ssq(A.rows);
  for (int r = 0; r < A.rows; ++r) {
    double s = k::dot(A.cols, A.row(r), A.row(r));
    if (s <= 0.0)
      throw std::domain_error("power_normalize_rows: zero-power block cannot be normalized");
    ssq[r] = s;
    const double c = std::sqrt(static_cast<double>(symbols_per_row) / s);
    for (int cc = 0; cc < A.cols; ++cc) out.at(r, cc) = A.at(r, cc) * c;
  }
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id, symbols_per_row, ssq = std::move(ssq)] {
    const Mat& dC = g(id);
    const Mat& A2 = val(a);
    Mat& dA = g(a);
    for (int r = 0; r < dC.rows; ++r) {
      const double c = std::sqrt(static_cast<double>(symbols_per_row) / ssq[r]);
      const double proj = k::dot(dC.cols, dC.row(r), A2.row(r)) / ssq[r];
      for (int cc = 0; cc < dC.cols; ++cc)
        dA.at(r, cc) += c * (dC.at(r, cc) - A2.at(r, cc) * proj);
    }
  });
  return id;
}

Tape::Id Tape::mean_all(Id a) {
  const Mat& A = val(a);
  Mat out(1, 1);
  out.a[0] = k::sum(A.size(), A.data()) / static_cast<double>(A.size());
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id] {
    const double s = g(id).a[0] / static_cast<double>(g(a).size());
    Mat& dA = g(a);
    for (std::size_t i = 0; i < dA.size(); ++i) dA.a[i] += s;
  });
  return id;
}

Tape::Id Tape::sum_all(Id a) {
  const Mat& A = val(a);
  Mat out(1, 1);
  out.a[0] = k::sum(A.size(), A.data());
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id] {
    const double s = g(id).a[0];
    Mat& dA = g(a);
    for (std::size_t i = 0; i < dA.size(); ++i) dA.a[i] += s;
  });
  return id;
}

Tape::Id Tape::log_mean_exp(Id a) {
  const Mat& A = val(a);
  if (A.cols != 1) throw std::invalid_argument("log_mean_exp: expects [n x 1]");
  double mx = A.a[0];
  for (std::size_t i = 1; i < A.size(); ++i) mx = std::max(mx, A.a[i]);
  double acc = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) acc += std::exp(A.a[i] - mx);
  Mat out(1, 1);
  out.a[0] = mx + std::log(acc / static_cast<double>(A.size()));
  Id id = push(std::move(out));
  back_ops_.push_back([this, a, id] {
    const Mat& A2 = val(a);
    const double v = val(id).a[0];
    const double s = g(id).a[0] / static_cast<double>(A2.size());
    Mat& dA = g(a);
    for (std::size_t i = 0; i < A2.size(); ++i)
      dA.a[i] += s * std::exp(A2.a[i] - v);
  });
  return id;
}

Tape::Id Tape::cross_entropy(Id logits, const std::vector<int>& targets,
                             const std::vector<double>& weights) {
  const Mat& L = val(logits);
  if (static_cast<int>(targets.size()) != L.rows)
    throw std::invalid_argument("cross_entropy: target count != rows");
  if (!weights.empty() && weights.size() != targets.size())
    throw std::invalid_argument("cross_entropy: weight count != rows");
  Mat probs(L.rows, L.cols);
  double wsum = 0.0;
  double loss = 0.0;
  for (int r = 0; r < L.rows; ++r) {
    const int t = targets[r];
    if (t < 0 || t >= L.cols) throw std::invalid_argument("cross_entropy: bad target");
    const double w = weights.empty() ? 1.0 : weights[r];
    const double* x = L.row(r);
    double mx = x[0];
    for (int c = 1; c < L.cols; ++c) mx = std::max(mx, x[c]);
    double z = 0.0;
    for (int c = 0; c < L.cols; ++c) {
      probs.at(r, c) = std::exp(x[c] - mx);
      z += probs.at(r, c);
    }
    for (int c = 0; c < L.cols; ++c) probs.at(r, c) /= z;
    loss += w * (std::log(z) + mx - x[t]);
    wsum += w;
  }
  if (wsum <= 0.0) throw std::invalid_argument("cross_entropy: non-positive weight sum");
  Mat out(1, 1);
  out.a[0] = loss / wsum;
  Id id = push(std::move(out));
  back_ops_.push_back([this, logits, id, targets, weights, wsum,
                       probs = std::move(probs)] {
    const double s = g(id).a[0] / wsum;
    Mat& dL = g(logits);
    for (int r = 0; r < probs.rows; ++r) {
      const double w = weights.empty() ? 1.0 : weights[r];
      for (int c = 0; c < probs.cols; ++c) {
        double p = probs.at(r, c);
        if (c == targets[r]) p -= 1.0;
        dL.at(r, c) += s * w * p;
      }
    }
  });
  return id;
}

void Tape::backward(Id root) {
  const Mat& r = val(root);
  if (r.rows != 1 || r.cols != 1)
    throw std::invalid_argument("backward: root must be scalar");
  for (auto& node : nodes_) node->grad.zero();
  g(root).a[0] = 1.0;
  for (auto it = back_ops_.rbegin(); it != back_ops_.rend(); ++it) (*it)();
  for (auto& [id, p] : param_leaves_) {
    if (!p->trainable) continue;
    k::axpy(p->grad.size(), 1.0, g(id).data(), p->grad.data());
  }
}

}  // namespace semcom::nn
