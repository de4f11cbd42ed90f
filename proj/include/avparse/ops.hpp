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

#pragma once

#include <functional>
#include <vector>

#include "avparse/matrix.hpp"

namespace avparse {

// Probabilities are clamped to [kProbEps, 1 - kProbEps] before any log so
// BCE stays finite.
inline constexpr double kProbEps = 1e-7;

double clamp_prob(double p);

// Standard product; throws ShapeError naming both shapes on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// In-place variant writing into `out` (resized as needed).
void matmul_into(const Matrix& a, const Matrix& b, Matrix& out);

// Each row is divided by `scale` (the attention divisor d), then
// softmax-normalized with max-subtraction. scale must be > 0.
Matrix softmax_rows(const Matrix& m, double scale);
void softmax_rows_into(const Matrix& m, double scale, Matrix& out);

// Elementwise 1 / (1 + exp(-x)); outputs in (0, 1).
Matrix sigmoid(const Matrix& m);

// Elementwise -(y log p + (1-y) log(1-p)) with p clamped.
Matrix bce_elementwise(const Matrix& p, const Matrix& y);

double bce_scalar(double p, double y);
// d BCE / d p at clamped p (clamp treated as identity for the gradient).
double bce_grad_scalar(double p, double y);

// Central-difference gradient check, h = 1e-4. Returns
// max_i |g_fd - g_an| / max(1, |g_fd|, |g_an|).
double finite_diff_check(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x,
                         const std::vector<double>& analytic_grad);

}  // namespace avparse
