#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ordtest {

/// Ordered p-values. Element order IS the testing order (most promising
/// hypothesis first). ids, when nonempty, parallels values.
struct PValueSequence {
  std::vector<double> values;
  std::vector<std::string> ids;

  std::size_t size() const noexcept { return values.size(); }
  bool has_ids() const noexcept { return !ids.empty(); }

  /// Throws std::invalid_argument if any value is outside [0,1] or NaN, or
  /// if ids is nonempty with a length different from values.
  void validate() const;
};

}  // namespace ordtest
