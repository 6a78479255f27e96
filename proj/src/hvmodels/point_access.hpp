#pragma once

#include <string>
#include <string_view>

#include "mdhv/errors.hpp"
#include "mdhv/ontic.hpp"

namespace mdhv {

/// The alternative a model expects; any other ontic point kind is not in its space.
template <class T>
const T& point_as(const OnticPoint& lambda, std::string_view model) {
  if (const T* p = std::get_if<T>(&lambda)) return *p;
  throw UnsupportedError(std::string(model) + ": ontic point " + describe(lambda) + " is not in this model's space");
}

}  // namespace mdhv
