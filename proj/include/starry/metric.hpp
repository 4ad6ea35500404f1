#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

namespace starry {

/// Pseudometric oracle over point ids.
using Distance = std::function<double(std::size_t, std::size_t)>;

enum class MetricKind { tree, map, other };

std::string_view to_string(MetricKind kind) noexcept;

}  // namespace starry
