#include "dwimpute/fill.hpp"

#include <iterator>
#include <ostream>
#include <utility>

#include "dwimpute/errors.hpp"

namespace dwimpute {

std::string_view to_string(FillSource source) { return source == FillSource::kIntra ? "intra" : "inter"; }

std::string_view to_string(DonorPolicy::Mode mode) {
  return mode == DonorPolicy::Mode::kFirst ? "first" : "majority";
}

DonorPolicy::Mode parse_donor_mode(std::string_view text) {
  if (text == "first") return DonorPolicy::Mode::kFirst;
  if (text == "majority") return DonorPolicy::Mode::kMajority;
  throw UsageError("unknown donor policy '" + std::string(text) + "' (expected first or majority)");
}

void write_fill_log(const FillLog& log, std::ostream& out) {
  out << "dimension,row,attribute,value,donor_row,matched_on,source\n";
  for (const auto& fill : log) {
    const std::string matched =
        fill.source == FillSource::kInter ? fill.donor_dimension + "." + fill.matched_on : fill.matched_on;
    out << csv_escape(fill.target.dimension) << ',' << fill.target.row << ',' << csv_escape(fill.target.attribute)
        << ',' << csv_escape(fill.value) << ',' << fill.donor_row << ',' << csv_escape(matched) << ','
        << to_string(fill.source) << '\n';
  }
}

void append_log(FillLog& log, FillLog&& part) {
  if (log.empty()) {
    log = std::move(part);
    return;
  }
  log.insert(log.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
}

}  // namespace dwimpute
