#pragma once

#include <array>
#include <cstdint>

#include "refcast/project_data.h"

namespace refcast {

struct ClassTarget {
  ProjectType type;
  bool traffic;  // false: cost inaccuracy
  std::size_t n;
  double mean;
  double sd;
};

// Historical class sizes and moments the bundled dataset is built to match.
inline constexpr std::array<ClassTarget, 5> kClassTargets{{
    {ProjectType::rail, false, 58, 44.7, 38.4},
    {ProjectType::bridge_tunnel, false, 33, 33.8, 62.4},
    {ProjectType::road, false, 167, 20.4, 29.9},
    {ProjectType::rail, true, 25, -51.4, 28.1},
    {ProjectType::road, true, 183, 9.5, 44.3},
}};

// UK rail cost subclass: its empirical quantiles at 0.5 and 0.9 are pinned.
inline constexpr std::size_t kUkRailCount = 21;
inline constexpr double kUkRailMedianUplift = 40.0;
inline constexpr double kUkRailP90Uplift = 68.0;

// Rail projects carrying both a cost and a traffic outcome.
inline constexpr std::size_t kRailJointCount = 12;

inline constexpr std::uint64_t kDefaultSampleSeed = 20051;

// Deterministic synthetic dataset. Each class is built from fixed draws plus
// an affinely moment-matched free group, so sizes, means and sds hit the
// targets, about 9 in 10 cost records overrun, 21 of 25 rail traffic
// forecasts miss by more than 20 percent and about half the road ones do.
Dataset make_sample_dataset(std::uint64_t seed = kDefaultSampleSeed);

}  // namespace refcast
