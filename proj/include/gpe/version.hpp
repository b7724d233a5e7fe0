#pragma once

namespace gpe {

inline constexpr const char* version = "1.0.0";

}
