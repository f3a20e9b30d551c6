#pragma once

#include <string_view>

#include "dwimpute/fill.hpp"
#include "dwimpute/schema.hpp"

namespace dwimpute {

// Fills null values of parameter `parameter` from rows of the same dimension
// that share a value at a lower parameter. Levels are tried nearest-lower
// first and the scan stops at the first level that yields a donor. Cells
// filled here become donors for rows processed later in the same call.
//
// Throws UnknownAttributeError if `parameter` is not in the hierarchy and
// SchemaError if it is the identifier level.
FillLog impute_parameter_intra(Dimension& dimension, const Hierarchy& hierarchy, std::string_view parameter,
                               DonorPolicy policy = {});

// Fills null values of weak attribute `weak` of `parameter`, matching first
// on the parameter itself and then on lower parameters.
FillLog impute_weak_intra(Dimension& dimension, const Hierarchy& hierarchy, std::string_view parameter,
                          std::string_view weak, DonorPolicy policy = {});

// One sequential pass over every dimension and hierarchy: for each parameter
// in ascending level order, the parameter and then its weak attributes.
// Throws SchemaError (before touching any table) if the model is invalid.
FillLog run_intra(WarehouseModel& model, DonorPolicy policy = {});

}  // namespace dwimpute
