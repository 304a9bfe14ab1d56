#pragma once

namespace renorm2 {

inline constexpr const char* kVersion = "0.1.0";

}
