#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dwimpute/table.hpp"

namespace dwimpute {

enum class FillSource { kIntra, kInter };

std::string_view to_string(FillSource source);

// How a donor is picked once a matching level has candidates. `first` takes
// the lowest row index; `majority` takes the modal donor value (ties go to
// the lexicographically smallest value) and reports its lowest donor row.
struct DonorPolicy {
  enum class Mode { kFirst, kMajority };
  Mode mode = Mode::kFirst;
  // Compare matching values case-insensitively. Filled values are copied verbatim.
  bool fold_case = false;
};

std::string_view to_string(DonorPolicy::Mode mode);
// Throws UsageError on anything but "first" / "majority".
DonorPolicy::Mode parse_donor_mode(std::string_view text);

// One imputed cell. `matched_on` is the donor-side attribute whose value
// equalled the target row's value.
struct FillRecord {
  CellAddress target;
  std::string hierarchy;
  std::string value;
  std::string donor_dimension;
  std::size_t donor_row = 0;
  std::string matched_on;
  FillSource source = FillSource::kIntra;

  bool operator==(const FillRecord&) const = default;
};

using FillLog = std::vector<FillRecord>;

// Moves `part` onto the end of `log`.
void append_log(FillLog& log, FillLog&& part);

// CSV with columns dimension,row,attribute,value,donor_row,matched_on,source.
// For inter fills matched_on is qualified as "<donor dimension>.<attribute>".
void write_fill_log(const FillLog& log, std::ostream& out);

}  // namespace dwimpute
