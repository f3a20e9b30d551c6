#include "dwimpute/pipeline.hpp"

#include "dwimpute/errors.hpp"
#include "dwimpute/intra.hpp"

namespace dwimpute {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kIntra:
      return "intra";
    case Strategy::kInter:
      return "inter";
    case Strategy::kIntraInterIntra:
      return "intra-inter-intra";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "intra") return Strategy::kIntra;
  if (text == "inter") return Strategy::kInter;
  if (text == "intra-inter-intra") return Strategy::kIntraInterIntra;
  throw UsageError("unknown strategy '" + std::string(text) + "' (expected intra, inter or intra-inter-intra)");
}

FillLog run_strategy(WarehouseModel& model, const ImputeConfig& config) {
  if (config.passes < 1) throw UsageError("passes must be at least 1");
  require_valid(model);
  config.inter.match.check();

  FillLog log;
  auto append = [&log](FillLog part) {
    const bool any = !part.empty();
    append_log(log, std::move(part));
    return any;
  };
  for (int pass = 0; pass < config.passes; ++pass) {
    bool filled = false;
    switch (config.strategy) {
      case Strategy::kIntra:
        filled = append(run_intra(model, config.inter.policy));
        break;
      case Strategy::kInter:
        filled = append(run_inter(model, config.inter));
        break;
      case Strategy::kIntraInterIntra:
        filled = append(run_intra(model, config.inter.policy));
        filled = append(run_inter(model, config.inter)) || filled;
        filled = append(run_intra(model, config.inter.policy)) || filled;
        break;
    }
    if (!filled) break;
  }
  return log;
}

}  // namespace dwimpute
