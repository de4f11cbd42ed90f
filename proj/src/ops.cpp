// Copyright 2026 The avparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avparse/ops.hpp"

#include <algorithm>
#include <cmath>

#include "avparse/common.hpp"
#include "avparse/kernels.hpp"

namespace avparse {

double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

void matmul_into(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + shape_string(a) +
                     " x " + shape_string(b));
  }
  out.resize(a.rows(), b.cols());
  kern::active_kernels().matmul(a.data(), b.data(), out.data(), a.rows(),
                                a.cols(), b.cols());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out;
  matmul_into(a, b, out);
  return out;
}

void softmax_rows_into(const Matrix& m, double scale, Matrix& out) {
  if (scale <= 0.0) {
    throw NumericError("softmax_rows: scale must be > 0, got " +
                       std::to_string(scale));
  }
  if (!m.all_finite()) {
    throw NumericError("softmax_rows: non-finite input");
  }
  out.resize(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* in = m.row(r);
    double* o = out.row(r);
    double mx = in[0] / scale;
    for (std::size_t c = 1; c < m.cols(); ++c) mx = std::max(mx, in[c] / scale);
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      o[c] = std::exp(in[c] / scale - mx);
      sum += o[c];
    }
    kern::active_kernels().scale(1.0 / sum, o, m.cols());
  }
}

Matrix softmax_rows(const Matrix& m, double scale) {
  Matrix out;
  softmax_rows_into(m, scale, out);
  return out;
}

Matrix sigmoid(const Matrix& m) {
  if (!m.all_finite()) {
    throw NumericError("sigmoid: non-finite input");
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.data()[i] = 1.0 / (1.0 + std::exp(-m.data()[i]));
  }
  return out;
}

double bce_scalar(double p, double y) {
  const double pc = clamp_prob(p);
  return -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
}

double bce_grad_scalar(double p, double y) {
  const double pc = clamp_prob(p);
  return -y / pc + (1.0 - y) / (1.0 - pc);
}

Matrix bce_elementwise(const Matrix& p, const Matrix& y) {
  require_same_shape(p, y, "bce_elementwise");
  Matrix out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.data()[i] = bce_scalar(p.data()[i], y.data()[i]);
  }
  return out;
}

double finite_diff_check(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x,
                         const std::vector<double>& analytic_grad) {
  if (x.size() != analytic_grad.size()) {
    throw ShapeError("finite_diff_check: gradient length " +
                     std::to_string(analytic_grad.size()) +
                     " vs parameter length " + std::to_string(x.size()));
  }
  const double h = 1e-4;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double fp = f(x);
    x[i] = saved - h;
    const double fm = f(x);
    x[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("finite_diff_check: non-finite evaluation at coordinate " +
                         std::to_string(i));
    }
    const double g_fd = (fp - fm) / (2.0 * h);
    const double g_an = analytic_grad[i];
    const double denom = std::max({1.0, std::abs(g_fd), std::abs(g_an)});
    worst = std::max(worst, std::abs(g_fd - g_an) / denom);
  }
  return worst;
}

}  // namespace avparse
