#pragma once

namespace fseg {

inline constexpr const char* kVersion = "0.1.0";

// Format tag written at the head of weight checkpoints.
inline constexpr const char* kWeightsMagic = "FSEGW1";

}  // namespace fseg
