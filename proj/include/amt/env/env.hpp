#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

namespace amt::env {

inline constexpr int kBoard = 8;

// 8x8 grayscale observation in [0,1], row-major.
using Observation = std::array<float, kBoard * kBoard>;

struct StepOutcome {
  Observation observation;
  double reward = 0.0;
  bool terminal = false;
};

// Rendering intensities. Appearance class decides the pixel, never the
// reward sign, so reward-inverted tasks look identical to their templates.
inline constexpr float kEmptyIntensity = 0.0f;
inline constexpr float kWallIntensity = 0.2f;
inline constexpr float kPenaltyLookIntensity = 0.4f;
inline constexpr float kBonusLookIntensity = 0.6f;
inline constexpr float kTargetIntensity = 0.8f;
inline constexpr float kPlayerIntensity = 1.0f;
inline constexpr float kOpponentIntensity = 0.5f;
inline constexpr float kAgentTokenIntensity = 1.0f;

class Env {
 public:
  virtual ~Env() = default;
  virtual int action_count() const = 0;
  virtual Observation reset() = 0;
  virtual StepOutcome step(int action) = 0;
  virtual bool terminal() const = 0;
};

// Grid actions.
enum GridAction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

}  // namespace amt::env
