#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dwimpute/schema.hpp"

namespace dwimpute {

// Shape of a generated single-dimension warehouse.
//
// `levels` lists parameter names finest first (levels[0] is the identifier).
// `fanout[k - 1]` is how many level-k values each level-(k+1) value owns, so
// fanout has levels.size() - 2 entries; `top_values` is the number of values
// at the coarsest level. Rows are spread evenly over the level-1 values.
struct SyntheticSpec {
  std::string dimension = "Geo";
  std::vector<std::string> levels{"id", "City", "State", "Country"};
  std::size_t top_values = 4;
  std::vector<std::size_t> fanout{10, 5};
  std::size_t rows = 1000;
  // Weak attributes per level (missing entries mean zero).
  std::vector<std::size_t> weak{0, 1, 1, 0};
  // Fraction of level-1 values whose rows are split between two different
  // level-2 parents. 0 gives a strict hierarchy.
  double nonstrict_fraction = 0.0;
  std::uint64_t seed = 1;
};

struct SyntheticData {
  WarehouseModel model;
  // Rows whose level-1 value has two parents. Empty for strict data.
  std::vector<bool> conflicted_rows;
};

// Throws UsageError for inconsistent specs (fewer than two levels, zero
// fanout, too few parents to build conflicts, ...).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

// Names used for the weak attributes of a level: "<Level>Name", then
// "<Level>Attr2", "<Level>Attr3", ...
std::string weak_attribute_name(const std::string& level, std::size_t ordinal);

struct SplitSpec {
  std::string first_name = "GeoA";
  std::string second_name = "GeoB";
  // Prepended to every attribute name of the respective half.
  std::string first_prefix = "a_";
  std::string second_prefix = "b_";
};

// Partitions the rows of `dimension` into two new dimensions that replace
// it. Row r goes to the first half iff in_first[r]. Row order is preserved
// within each half.
WarehouseModel split_dimension(const WarehouseModel& model, const std::string& dimension,
                               const std::vector<bool>& in_first, const SplitSpec& spec = {});

// Random halves of equal size (the first half gets the extra row).
std::vector<bool> random_halves(std::size_t rows, std::uint64_t seed);

}  // namespace dwimpute
