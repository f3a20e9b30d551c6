#pragma once

#include <string_view>

#include "dwimpute/fill.hpp"
#include "dwimpute/inter.hpp"
#include "dwimpute/schema.hpp"

namespace dwimpute {

enum class Strategy { kIntra, kInter, kIntraInterIntra };

std::string_view to_string(Strategy strategy);
// Accepts "intra", "inter" and "intra-inter-intra". Throws UsageError.
Strategy parse_strategy(std::string_view text);

struct ImputeConfig {
  Strategy strategy = Strategy::kIntraInterIntra;
  InterOptions inter;  // inter.policy is used by every stage
  // Repetitions of the whole strategy sequence; stops early once a
  // repetition fills nothing.
  int passes = 1;
};

FillLog run_strategy(WarehouseModel& model, const ImputeConfig& config);

}  // namespace dwimpute
