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

#include "body/demo_body.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "common/error.hpp"

namespace scanrig {
namespace {

enum Joint {
  kPelvis, kLHip, kRHip, kSpine1, kLKnee, kRKnee, kSpine2, kLAnkle, kRAnkle, kSpine3, kLFoot, kRFoot,
  kNeck, kLCollar, kRCollar, kHead, kLShoulder, kRShoulder, kLElbow, kRElbow, kLWrist, kRWrist, kLHand,
  kRHand, kNumJoints
};

const char* const kJointNames[kNumJoints] = {
    "pelvis",     "left_hip",       "right_hip",      "spine1",      "left_knee",   "right_knee",
    "spine2",     "left_ankle",     "right_ankle",    "spine3",      "left_foot",   "right_foot",
    "neck",       "left_collar",    "right_collar",   "head",        "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow",    "left_wrist",     "right_wrist", "left_hand",   "right_hand"};

const int kParents[kNumJoints] = {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};

Vec3 jointPosition(int j) {
  static const double p[kNumJoints][3] = {
      {0.0, 0.0, 0.95},   {0.09, 0.0, 0.88},  {-0.09, 0.0, 0.88}, {0.0, 0.0, 1.06},   {0.10, 0.0, 0.50},
      {-0.10, 0.0, 0.50}, {0.0, 0.0, 1.19},   {0.10, 0.0, 0.10},  {-0.10, 0.0, 0.10}, {0.0, 0.0, 1.33},
      {0.10, 0.12, 0.04}, {-0.10, 0.12, 0.04}, {0.0, 0.0, 1.49},  {0.07, 0.0, 1.44},  {-0.07, 0.0, 1.44},
      {0.0, 0.0, 1.62},   {0.19, 0.0, 1.43},  {-0.19, 0.0, 1.43}, {0.46, 0.0, 1.43},  {-0.46, 0.0, 1.43},
      {0.71, 0.0, 1.43},  {-0.71, 0.0, 1.43}, {0.80, 0.0, 1.43},  {-0.80, 0.0, 1.43}};
  return {p[j][0], p[j][1], p[j][2]};
}

using Blend = std::map<int, double>;

struct Knot {
  Vec3 at;  // projected onto the capsule axis
  Blend weights;
};

enum class Region { kTorso, kLeg, kArm, kHead };

struct CapsuleSpec {
  Vec3 a, b;           // axis endpoints before the tip overhang
  double r_major, r_minor;
  Vec3 major_hint;     // direction of the major cross-section axis
  std::vector<Knot> knots;
  std::vector<int> regress;  // joints whose centers lie on this axis
  Region region;
  double side = 0.0;   // +1 left, -1 right, 0 centre
};

Blend one(int j) { return {{j, 1.0}}; }
Blend half(int a, int b) { return {{a, 0.5}, {b, 0.5}}; }
Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + t * (b - a); }

std::vector<CapsuleSpec> capsuleLayout() {
  std::vector<CapsuleSpec> caps;
  const Vec3 x = Vec3::UnitX();
  const Vec3 y = Vec3::UnitY();
  const Vec3 z = Vec3::UnitZ();

  caps.push_back({Vec3(0, 0, 0.86), Vec3(0, 0, 1.47), 0.16, 0.11, x,
                  {{jointPosition(kPelvis), one(kPelvis)},
                   {jointPosition(kSpine1), one(kSpine1)},
                   {jointPosition(kSpine2), one(kSpine2)},
                   {jointPosition(kSpine3), one(kSpine3)}},
                  {kPelvis, kSpine1, kSpine2, kSpine3}, Region::kTorso});
  caps.push_back({jointPosition(kRHip), jointPosition(kLHip), 0.10, 0.09, z,
                  {{jointPosition(kRHip), one(kPelvis)}},
                  {kLHip, kRHip}, Region::kTorso});
  caps.push_back({Vec3(0, 0, 1.47), Vec3(0, 0, 1.72), 0.085, 0.095, y,
                  {{jointPosition(kNeck), half(kSpine3, kNeck)},
                   {lerp(jointPosition(kNeck), jointPosition(kHead), 0.6), one(kNeck)},
                   {jointPosition(kHead), one(kHead)}},
                  {kNeck, kHead}, Region::kHead});

  for (double side : {1.0, -1.0}) {
    const bool left = side > 0;
    const int hip = left ? kLHip : kRHip;
    const int knee = left ? kLKnee : kRKnee;
    const int ankle = left ? kLAnkle : kRAnkle;
    const int foot = left ? kLFoot : kRFoot;
    const int collar = left ? kLCollar : kRCollar;
    const int shoulder = left ? kLShoulder : kRShoulder;
    const int elbow = left ? kLElbow : kRElbow;
    const int wrist = left ? kLWrist : kRWrist;
    const int hand = left ? kLHand : kRHand;
    const Vec3 ph = jointPosition(hip), pk = jointPosition(knee), pa = jointPosition(ankle);
    const Vec3 pf = jointPosition(foot);
    const Vec3 toe = pf + Vec3(0, 0.07, -0.005);
    const Vec3 pc = jointPosition(collar), ps = jointPosition(shoulder), pe = jointPosition(elbow);
    const Vec3 pw = jointPosition(wrist), pn = jointPosition(hand);
    const Vec3 tip = pn + Vec3(side * 0.08, 0, 0);

    caps.push_back({ph, pk, 0.08, 0.06, x,
                    {{ph, half(kPelvis, hip)}, {lerp(ph, pk, 0.2), one(hip)}, {lerp(ph, pk, 0.8), one(hip)},
                     {pk, half(hip, knee)}},
                    {knee}, Region::kLeg, side});
    caps.push_back({pk, pa, 0.058, 0.044, x,
                    {{pk, half(hip, knee)}, {lerp(pk, pa, 0.2), one(knee)}, {lerp(pk, pa, 0.8), one(knee)},
                     {pa, half(knee, ankle)}},
                    {ankle}, Region::kLeg, side});
    caps.push_back({pa, toe, 0.048, 0.032, x,
                    {{pa, half(knee, ankle)}, {lerp(pa, pf, 0.4), one(ankle)}, {pf, one(ankle)},
                     {toe, one(foot)}},
                    {foot}, Region::kLeg, side});
    caps.push_back({pc, ps, 0.06, 0.055, z,
                    {{pc, one(kSpine3)}, {lerp(pc, ps, 0.5), one(collar)}, {ps, half(collar, shoulder)}},
                    {collar}, Region::kTorso, side});
    caps.push_back({ps, pe, 0.052, 0.04, z,
                    {{ps, half(collar, shoulder)}, {lerp(ps, pe, 0.2), one(shoulder)},
                     {lerp(ps, pe, 0.8), one(shoulder)}, {pe, half(shoulder, elbow)}},
                    {shoulder}, Region::kArm, side});
    caps.push_back({pe, pw, 0.044, 0.033, z,
                    {{pe, half(shoulder, elbow)}, {lerp(pe, pw, 0.2), one(elbow)},
                     {lerp(pe, pw, 0.8), one(elbow)}, {pw, half(elbow, wrist)}},
                    {elbow}, Region::kArm, side});
    caps.push_back({pw, tip, 0.045, 0.018, y,
                    {{pw, half(elbow, wrist)}, {lerp(pw, pn, 0.4), one(wrist)}, {pn, one(wrist)}, {tip, one(hand)}},
                    {wrist, hand}, Region::kArm, side});
  }
  return caps;
}

// Piecewise-linear blend of knot weights at axial parameter s.
Blend weightsAt(const std::vector<std::pair<double, Blend>>& knots, double s) {
  if (s <= knots.front().first) {
    return knots.front().second;
  }
  if (s >= knots.back().first) {
    return knots.back().second;
  }
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double s0 = knots[k].first;
    const double s1 = knots[k + 1].first;
    if (s >= s0 && s <= s1) {
      const double t = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
      Blend out;
      for (const auto& [j, w] : knots[k].second) {
        out[j] += (1 - t) * w;
      }
      for (const auto& [j, w] : knots[k + 1].second) {
        out[j] += t * w;
      }
      return out;
    }
  }
  return knots.back().second;
}

struct VertexInfo {
  Vec3 radial;  // offset from the axis
  int capsule;
};

}  // namespace

ParametricBody makeDemoBody(const DemoBodyOptions& options) {
  const int rings = options.rings;
  const int segs = options.segments;
  if (rings < 3 || segs < 3) {
    throwInvalid("demo body needs at least 3 rings and 3 segments");
  }
  const auto caps = capsuleLayout();

  ParametricBody body;
  body.parents.assign(std::begin(kParents), std::end(kParents));
  body.joint_names.assign(std::begin(kJointNames), std::end(kJointNames));

  std::vector<VertexInfo> info;
  std::vector<Blend> skin;
  std::vector<std::vector<SparseRows::Entry>> regress(kNumJoints);

  for (size_t c = 0; c < caps.size(); ++c) {
    const CapsuleSpec& cap = caps[c];
    const Vec3 dir = (cap.b - cap.a).normalized();
    const double overhang = 0.6 * cap.r_major;
    const Vec3 tip_a = cap.a - overhang * dir;
    const Vec3 tip_b = cap.b + overhang * dir;
    const double length = (tip_b - tip_a).norm();
    const Vec3 e1 = (cap.major_hint - cap.major_hint.dot(dir) * dir).normalized();
    const Vec3 e2 = dir.cross(e1);
    auto axial = [&](const Vec3& p) { return (p - tip_a).dot(dir) / length; };

    std::vector<std::pair<double, Blend>> knots;
    for (const auto& k : cap.knots) {
      knots.emplace_back(axial(k.at), k.weights);
    }

    const int base = body.numVertices();
    auto addVertex = [&](const Vec3& p, const Vec2& uv, double s, const Vec3& radial) {
      body.rest_vertices.push_back(p);
      body.uvs.push_back(uv);
      skin.push_back(weightsAt(knots, s));
      info.push_back({radial, static_cast<int>(c)});
    };

    std::vector<double> ring_s(rings);
    for (int k = 0; k < rings; ++k) {
      const double alpha = std::numbers::pi * (k + 1) / (rings + 1);
      ring_s[k] = 0.5 * (1.0 - std::cos(alpha));
      const double rho = std::pow(std::sin(alpha), 0.35);
      const Vec3 centre = tip_a + ring_s[k] * length * dir;
      for (int m = 0; m <= segs; ++m) {
        const double phi = 2.0 * std::numbers::pi * (m % segs) / segs;
        const Vec3 radial = rho * (cap.r_major * std::cos(phi) * e1 + cap.r_minor * std::sin(phi) * e2);
        addVertex(centre + radial, Vec2(ring_s[k], static_cast<double>(m) / segs), ring_s[k], radial);
      }
    }
    const int tip_base = body.numVertices();
    for (int m = 0; m < segs; ++m) {
      addVertex(tip_a, Vec2(0.0, (m + 0.5) / segs), 0.0, Vec3::Zero());
    }
    for (int m = 0; m < segs; ++m) {
      addVertex(tip_b, Vec2(1.0, (m + 0.5) / segs), 1.0, Vec3::Zero());
    }

    auto ringVertex = [&](int k, int m) { return base + k * (segs + 1) + m; };
    std::vector<Face> faces;
    for (int k = 0; k + 1 < rings; ++k) {
      for (int m = 0; m < segs; ++m) {
        faces.push_back({ringVertex(k, m), ringVertex(k + 1, m), ringVertex(k + 1, m + 1)});
        faces.push_back({ringVertex(k, m), ringVertex(k + 1, m + 1), ringVertex(k, m + 1)});
      }
    }
    for (int m = 0; m < segs; ++m) {
      faces.push_back({tip_base + m, ringVertex(0, m), ringVertex(0, m + 1)});
      faces.push_back({tip_base + segs + m, ringVertex(rings - 1, m + 1), ringVertex(rings - 1, m)});
    }
    // Orient outward: flip if the signed volume is negative.
    double volume = 0.0;
    for (const Face& f : faces) {
      volume += body.rest_vertices[f[0]].dot(body.rest_vertices[f[1]].cross(body.rest_vertices[f[2]]));
    }
    for (Face& f : faces) {
      if (volume < 0.0) {
        std::swap(f[1], f[2]);
      }
      body.faces.push_back(f);
    }

    // Joint centres as interpolated ring centroids (seam duplicates excluded).
    for (int j : cap.regress) {
      const double s = axial(jointPosition(j));
      int k = 0;
      while (k + 1 < rings && ring_s[k + 1] < s) {
        ++k;
      }
      if (s < ring_s[0] || k + 1 >= rings) {
        throw Error(ErrorCode::kInternal, std::string("demo body: joint ") + kJointNames[j] +
                                              " is not bracketed by capsule rings");
      }
      const double t = (s - ring_s[k]) / (ring_s[k + 1] - ring_s[k]);
      for (int m = 0; m < segs; ++m) {
        regress[j].push_back({ringVertex(k, m), (1.0 - t) / segs});
        regress[j].push_back({ringVertex(k + 1, m), t / segs});
      }
    }
  }

  const int n = body.numVertices();
  body.joint_regressor = SparseRows(n);
  for (int j = 0; j < kNumJoints; ++j) {
    if (regress[j].empty()) {
      throw Error(ErrorCode::kInternal, std::string("demo body: no regressor for ") + kJointNames[j]);
    }
    body.joint_regressor.appendRow(regress[j]);
  }
  body.skin_weights = SparseRows(kNumJoints);
  for (const auto& blend : skin) {
    std::vector<SparseRows::Entry> row;
    for (const auto& [j, w] : blend) {
      row.push_back({j, w});
    }
    body.skin_weights.appendRow(row);
  }

  // Blendshapes, meters per unit coefficient.
  Points height(n), girth(n), arms(n), width(n);
  const double shoulder_x = jointPosition(kLShoulder).x();
  const double hip_x = jointPosition(kLHip).x();
  for (int i = 0; i < n; ++i) {
    const Vec3& p = body.rest_vertices[i];
    const CapsuleSpec& cap = caps[info[i].capsule];
    height[i] = Vec3(0, 0, 0.06 * p.z());
    girth[i] = 0.2 * info[i].radial;
    arms[i] = cap.region == Region::kArm ? Vec3(0.08 * (p.x() - cap.side * shoulder_x), 0, 0) : Vec3::Zero();
    switch (cap.region) {
      case Region::kTorso:
        width[i] = Vec3(0.1 * p.x(), 0.05 * p.y(), 0);
        break;
      case Region::kArm:
        width[i] = Vec3(0.1 * cap.side * shoulder_x, 0, 0);
        break;
      case Region::kLeg:
        width[i] = Vec3(0.1 * cap.side * hip_x, 0, 0);
        break;
      case Region::kHead:
        width[i] = Vec3::Zero();
        break;
    }
  }
  body.blendshapes = {height, girth, arms, width};
  validateBody(body);
  return body;
}

}  // namespace scanrig
