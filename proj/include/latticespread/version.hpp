#pragma once

namespace latticespread {

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr int kBundleFormat = 1;

}  // namespace latticespread
