#pragma once

// JSON serialization of built surrogates. Psi is not stored; it is re-solved from the embedded
// source description and grid sizes, which reproduces it bit for bit.

#include <string>

#include "polywave/radial.hpp"
#include "polywave/surrogate.hpp"

namespace polywave {

struct LoadedSurrogate {
  Surrogate surrogate;
  SourceSpec source;
};

std::string surrogate_to_json(const Surrogate& s, const SourceSpec& src);
LoadedSurrogate surrogate_from_json(const std::string& text);

void save_surrogate(const std::string& path, const Surrogate& s, const SourceSpec& src);
LoadedSurrogate load_surrogate(const std::string& path);

}  // namespace polywave
