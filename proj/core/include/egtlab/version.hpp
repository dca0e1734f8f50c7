#pragma once

#include <string>

namespace egt {

/// Library version, e.g. "0.3.0".
std::string version();
/// Versions of the libraries and compiler this build uses, for run manifests.
std::string eigen_version();
std::string compiler_version();

}  // namespace egt
