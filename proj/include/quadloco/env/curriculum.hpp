// Copyright 2026 The Quadloco Authors.
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

#ifndef QUADLOCO_ENV_CURRICULUM_HPP_
#define QUADLOCO_ENV_CURRICULUM_HPP_

#include "quadloco/sim/terrain.hpp"

namespace quadloco::env {

struct CurriculumConfig {
  bool enabled = true;
  double alpha = 0.05;       // EMA weight of the newest epoch
  double threshold = 0.825;  // 0.55 x the maximum aim reward 1.5
  int patience = 20;         // consecutive epochs above threshold
};

struct CurriculumState {
  int terrain_index = 0;  // 0 flat, 1 slopes, 2 steps
  double reward_ema = 0.0;
  bool ema_initialized = false;
  int epochs_above = 0;
};

inline constexpr int kLastTerrainIndex = 2;

inline sim::TerrainKind curriculum_terrain(int index) {
  return static_cast<sim::TerrainKind>(index);
}

// Folds one epoch's mean per-step reward into the EMA and promotes to the
// next terrain after `patience` consecutive epochs above threshold. Never
// demotes; the counter restarts after a promotion.
CurriculumState advance_curriculum(const CurriculumState& state,
                                   double epoch_reward,
                                   const CurriculumConfig& config = {});

}  // namespace quadloco::env

#endif  // QUADLOCO_ENV_CURRICULUM_HPP_
