#pragma once

#include <string_view>

namespace vropt {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

// Repo-level generator constant. Every emitted trace/manifest records it;
// changing the generator or the index-mapping scheme is a versioned break.
inline constexpr std::string_view kPrngId = "mt19937_64/splitmix64-seed/rejection-v1";

}  // namespace vropt
