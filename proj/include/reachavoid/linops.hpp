// Copyright 2026 The reachavoid Authors
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

#include <string>
#include <vector>

#include <Eigen/Core>

namespace reachavoid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Checked dense product. Throws std::invalid_argument on a shape mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Checked matrix-vector product.
Vector matvec(const Matrix& a, const Vector& x);

/// Builds a matrix from nested rows; every row must have the same length.
Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows);

std::vector<std::vector<double>> matrix_to_rows(const Matrix& m);

Vector vector_from(const std::vector<double>& values);

std::vector<double> vector_to(const Vector& v);

bool all_finite(const Matrix& m);

/// Throws std::invalid_argument with `what` when the matrix holds a NaN or
/// infinity.
void require_finite(const Matrix& m, const std::string& what);

}  // namespace reachavoid
