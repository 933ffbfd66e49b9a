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

#include <cstdint>
#include <random>

#include "geom/mesh.hpp"

namespace scanrig::testing {

Mesh cubeMesh(double half = 1.0, const Vec3& center = Vec3::Zero());
Mesh icosphere(int subdivisions, double radius = 1.0);
Mesh torusMesh(double major, double minor, int nu, int nv);
// Closed surface of an L-shaped block built from unit cells.
Mesh lShapeMesh();
// Icosphere with random radial bumps; closed and star-shaped.
Mesh bumpySphere(uint64_t seed, int subdivisions);
// Unconnected random triangles inside the unit cube.
Mesh triangleSoup(uint64_t seed, int num_faces);

// Inside test by ray parity, voting over three fixed ray directions.
bool rayParityInside(const Mesh& mesh, const Vec3& p);
// Random queries in the slightly enlarged bounding box whose distance to the
// surface exceeds `margin`.
Points sampleQueries(const Mesh& mesh, int count, double margin, std::mt19937_64& rng);

Vec3 randomUnit(std::mt19937_64& rng);
// Uniform random rotation.
Mat3 randomRotation(std::mt19937_64& rng);

}  // namespace scanrig::testing
