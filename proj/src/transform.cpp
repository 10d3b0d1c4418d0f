// Copyright 2026 The opvc Authors
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

#include "opvc/transform.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "opvc/error.hpp"

namespace opvc
{
Plane dct_basis(Eigen::Index n)
{
  Plane c(n, n);
  const double dc = std::sqrt(1.0 / static_cast<double>(n));
  const double ac = std::sqrt(2.0 / static_cast<double>(n));
  for (Eigen::Index q = 0; q < n; ++q) {
    const double alpha = q == 0 ? dc : ac;
    for (Eigen::Index i = 0; i < n; ++i) {
      c(q, i) = alpha * std::cos(std::numbers::pi * static_cast<double>((2 * i + 1) * q) /
                                 (2.0 * static_cast<double>(n)));
    }
  }
  return c;
}

Frame dct2(const Frame & frame)
{
  const Plane cm = dct_basis(frame.rows());
  const Plane cn = dct_basis(frame.cols());
  Plane out = cm * frame.data() * cn.transpose();
  return Frame(std::move(out), Domain::coefficient);
}

Plane idct2(const Frame & coefficients)
{
  if (coefficients.domain() != Domain::coefficient) {
    throw DomainError("idct2 expects a coefficient frame");
  }
  const Plane cm = dct_basis(coefficients.rows());
  const Plane cn = dct_basis(coefficients.cols());
  return cm.transpose() * coefficients.data() * cn;
}

ShiftConstant compute_shift(std::span<const Frame> coefficient_frames, double floor)
{
  if (coefficient_frames.empty()) {
    throw DimensionError("cannot compute a shift for an empty video");
  }
  double lo = std::numeric_limits<double>::infinity();
  for (const auto & f : coefficient_frames) {
    if (f.domain() != Domain::coefficient) {
      throw DomainError("compute_shift expects coefficient frames");
    }
    lo = std::min(lo, f.data().minCoeff());
  }
  return ShiftConstant{std::max(0.0, floor - lo)};
}

Frame shift(const Frame & coefficients, ShiftConstant c)
{
  if (coefficients.domain() != Domain::coefficient) {
    throw DomainError("shift expects a coefficient frame");
  }
  Plane out = (coefficients.data().array() + c.value).matrix();
  return Frame(std::move(out), Domain::shifted_coefficient);
}

Frame unshift(const Frame & shifted, ShiftConstant c)
{
  if (shifted.domain() != Domain::shifted_coefficient && shifted.domain() != Domain::coefficient) {
    throw DomainError("unshift expects a decoded coefficient frame");
  }
  Plane out = (shifted.data().array() - c.value).matrix();
  return Frame(std::move(out), Domain::coefficient);
}

}  // namespace opvc
