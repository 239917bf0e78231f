#pragma once

namespace gibbsinit {

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace gibbsinit
