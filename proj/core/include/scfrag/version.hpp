#pragma once

#define SCFRAG_VERSION_MAJOR 0
#define SCFRAG_VERSION_MINOR 1
#define SCFRAG_VERSION_PATCH 0

namespace scfrag {
inline constexpr const char* version_string = "0.1.0";
}
