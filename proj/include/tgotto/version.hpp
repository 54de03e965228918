#pragma once

namespace tgotto {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tgotto
