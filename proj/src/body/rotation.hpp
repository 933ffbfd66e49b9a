// Copyright 2026 The scanrig Authors
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

#include "common/types.hpp"

namespace scanrig {

// Continuous 6D rotation representation: the first two columns of a
// rotation matrix, stacked. Any pair of non-parallel 3-vectors maps to a
// rotation through Gram-Schmidt; the third column is their cross product.
Mat3 rot6dToMatrix(const Rot6& r);

// First two columns of R.
Rot6 matrixToRot6d(const Mat3& rotation);

// The 6D encoding of the identity, (1,0,0, 0,1,0).
Rot6 identityRot6d();

// Vector-Jacobian product: given dL/dR for R = rot6dToMatrix(r), returns
// dL/dr.
Rot6 rot6dBackward(const Rot6& r, const Mat3& grad_rotation);

}  // namespace scanrig
