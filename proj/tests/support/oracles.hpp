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

#include <functional>
#include <random>

#include "body/body_model.hpp"
#include "common/types.hpp"
#include "fit/triangulate.hpp"
#include "place/cameras.hpp"

namespace scanrig::testing {

// |g - g_fd| / max(|g_fd|, 1e-12) with the central difference of step h.
double gradientRelativeError(const std::function<double(const VecX&)>& f, const VecX& x, const VecX& analytic,
                             double h);

// Identity pose plus N(0, sigma^2) on every 6D entry and the translation.
PoseParams perturbedPose(int num_joints, std::mt19937_64& rng, double sigma);

struct GradientReport {
  double joint = 0.0;  // worst relative error over the draws
  double prior = 0.0;
  double mesh = 0.0;
};

// Analytic versus central-difference gradients (h = 1e-5) of the joint,
// prior and frozen-correspondence scan terms on `draws` random parameter
// vectors around a synthetic demo-body subject.
GradientReport checkFitGradients(int draws, uint64_t seed);

struct TriangulationReport {
  double median_error = 0.0;          // meters
  double median_worst_ray = 0.0;      // meters, distance of the truth to the farthest noisy ray
  double max_noiseless_error = 0.0;   // meters
};

// Monte-Carlo harness on the 4-camera ring rig 3 m from the subject.
TriangulationReport checkTriangulation(int trials, double pixel_noise, uint64_t seed);

}  // namespace scanrig::testing
