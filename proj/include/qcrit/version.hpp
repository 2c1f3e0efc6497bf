#pragma once

namespace qcrit {
inline constexpr const char* kVersion = "0.1.0";
}
