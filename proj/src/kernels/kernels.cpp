/**
 * @file kernels.cpp
 * @brief Backend selection for the kernel dispatch table.
 */
#include "semcom/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace semcom::kernels {

namespace {

Dispatch make_scalar() {
  return Dispatch{ref::gemm_nn, ref::gemm_nt, ref::gemm_tn, ref::axpy,
                  ref::dot,     ref::relu,    ref::relu_bwd, ref::sum,
                  ref::mul,     "scalar"};
}

Dispatch make_avx2() {
  return Dispatch{avx2::gemm_nn, avx2::gemm_nt, avx2::gemm_tn, avx2::axpy,
                  avx2::dot,     avx2::relu,    avx2::relu_bwd, avx2::sum,
                  avx2::mul,     "avx2"};
}

Dispatch select() {
  const char* force = std::getenv("SEMCOM_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return make_scalar();
    if (std::strcmp(force, "avx2") == 0 && avx2::available()) return make_avx2();
  }
  return avx2::available() ? make_avx2() : make_scalar();
}

}  // namespace

const Dispatch& active() {
  static const Dispatch table = select();
  return table;
}

std::string backend_name() { return active().backend; }

}  // namespace semcom::kernels
