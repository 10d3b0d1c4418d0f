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

#ifndef OPVC_TRANSFORM_HPP
#define OPVC_TRANSFORM_HPP

#include <span>

#include "opvc/frame.hpp"

namespace opvc
{
/// Orthonormal DCT-II basis of size n: row q holds
/// alpha_q * cos(pi * (2i + 1) * q / (2n)) for i = 0..n-1.
Plane dct_basis(Eigen::Index n);

/// Separable orthonormal 2D DCT-II. The result is tagged `coefficient`.
Frame dct2(const Frame & frame);
/// Inverse of dct2 (DCT-III with the same normalization). Returns the raw
/// spatial plane, which may dip below zero after lossy coding.
Plane idct2(const Frame & coefficients);

/// Constant added to every coefficient of a video so that it can be sensed
/// as a positive intensity. Plays the role of the reference plane wave used
/// for binary phase recovery.
struct ShiftConstant
{
  double value = 0.0;
  friend bool operator==(const ShiftConstant &, const ShiftConstant &) = default;
};

/// max(0, floor - min coefficient) over all frames, so the smallest shifted
/// coefficient equals `floor` (or more, when no shift was needed).
ShiftConstant compute_shift(std::span<const Frame> coefficient_frames, double floor = 1.0);

Frame shift(const Frame & coefficients, ShiftConstant c);
Frame unshift(const Frame & shifted, ShiftConstant c);

}  // namespace opvc

#endif  // OPVC_TRANSFORM_HPP
