#pragma once

// Fixture builders and reference implementations shared by the test
// binaries. The references transcribe the imputation loops row by row with
// linear scans; they deliberately share no code with the library's
// index-based engine.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dwimpute/fill.hpp"
#include "dwimpute/matcher.hpp"
#include "dwimpute/schema.hpp"

namespace dwimpute {

// Readable assertion output for fill logs.
inline void PrintTo(const FillRecord& f, std::ostream* os) {
  *os << to_string(f.target) << "=" << f.value << " from " << f.donor_dimension << "#" << f.donor_row << " via "
      << f.matched_on << (f.source == FillSource::kIntra ? " intra" : " inter");
}

}  // namespace dwimpute

namespace dwimpute::testing {

inline Row make_row(std::initializer_list<const char*> cells) {
  Row row;
  for (const char* c : cells) {
    if (c) {
      row.emplace_back(c);
    } else {
      row.emplace_back(std::nullopt);
    }
  }
  return row;
}

inline Dimension make_dimension(std::string name, std::vector<std::string> attributes,
                                std::vector<Hierarchy> hierarchies, const std::vector<Row>& rows) {
  Dimension d;
  d.name = std::move(name);
  d.id_attribute = attributes.front();
  d.attributes = attributes;
  d.hierarchies = std::move(hierarchies);
  d.table = InstanceTable(std::move(attributes));
  for (const auto& r : rows) d.table.append_row(r);
  return d;
}

inline WarehouseModel make_model(std::vector<Dimension> dimensions) {
  WarehouseModel m;
  m.name = "test";
  m.dimensions = std::move(dimensions);
  return m;
}

inline const Cell& cell(const Dimension& d, std::size_t row, const std::string& attribute) {
  return d.table.at(row, d.table.column_index(attribute));
}

// ---------------------------------------------------------------------------
// Reference intra imputation, donor policy "first".

namespace oracle {

inline std::optional<std::string> value(const InstanceTable& t, std::size_t r, const std::string& a) {
  for (std::size_t c = 0; c < t.columns().size(); ++c) {
    if (t.columns()[c] == a) return t.row(r)[c];
  }
  return std::nullopt;
}

inline void set(InstanceTable& t, std::size_t r, const std::string& a, const std::string& v) {
  for (std::size_t c = 0; c < t.columns().size(); ++c) {
    if (t.columns()[c] == a) t.at(r, c) = v;
  }
}

// Parameters strictly below position `v`, nearest first.
inline std::vector<std::string> below(const Hierarchy& h, std::size_t v) {
  std::vector<std::string> out;
  for (std::size_t k = v; k-- > 0;) out.push_back(h.parameters[k]);
  return out;
}

inline FillLog intra(WarehouseModel& model) {
  FillLog log;
  for (auto& d : model.dimensions) {
    auto& t = d.table;
    for (const auto& h : d.hierarchies) {
      for (std::size_t v = 0; v < h.parameters.size(); ++v) {
        const auto& p = h.parameters[v];
        if (v >= 1) {
          for (std::size_t e = 0; e < t.row_count(); ++e) {
            if (value(t, e, p)) continue;
            bool done = false;
            for (const auto& lower : below(h, v)) {
              const auto mine = value(t, e, lower);
              if (!mine) continue;
              for (std::size_t e2 = 0; e2 < t.row_count(); ++e2) {
                const auto theirs = value(t, e2, lower);
                const auto target = value(t, e2, p);
                if (theirs && *theirs == *mine && target) {
                  set(t, e, p, *target);
                  log.push_back({{d.name, e, p}, h.name, *target, d.name, e2, lower, FillSource::kIntra});
                  done = true;
                  break;
                }
              }
              if (done) break;
            }
          }
        }
        auto it = h.weak.find(p);
        if (it == h.weak.end()) continue;
        for (const auto& w : it->second) {
          for (std::size_t e = 0; e < t.row_count(); ++e) {
            if (value(t, e, w)) continue;
            std::vector<std::string> levels{p};
            for (const auto& lower : below(h, v)) levels.push_back(lower);
            bool done = false;
            for (const auto& level : levels) {
              const auto mine = value(t, e, level);
              if (!mine) continue;
              for (std::size_t e2 = 0; e2 < t.row_count(); ++e2) {
                const auto theirs = value(t, e2, level);
                const auto target = value(t, e2, w);
                if (theirs && *theirs == *mine && target) {
                  set(t, e, w, *target);
                  log.push_back({{d.name, e, w}, h.name, *target, d.name, e2, level, FillSource::kIntra});
                  done = true;
                  break;
                }
              }
              if (done) break;
            }
          }
        }
      }
    }
  }
  return log;
}

// ---------------------------------------------------------------------------
// Reference inter imputation, donor policy "first". The loop nest follows the
// algorithm's statement order: rows outermost, foreign dimensions (by name),
// hierarchies and parameters inside, level scan innermost.

inline std::optional<std::string> counterpart(const Dimension& home, const Dimension& foreign,
                                              const std::string& foreign_attribute, const MatchConfig& cfg) {
  std::optional<std::string> best;
  double best_score = -1.0;
  for (const auto& a : home.attributes) {
    const auto decision = attributes_match(foreign_attribute, foreign.name, a, home.name, cfg);
    if (decision.matched && decision.score > best_score) {
      best = a;
      best_score = decision.score;
    }
  }
  return best;
}

inline std::vector<std::size_t> by_name(const WarehouseModel& model) {
  std::vector<std::size_t> order(model.dimensions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.dimensions[a].name < model.dimensions[b].name;
  });
  return order;
}

inline FillLog inter(WarehouseModel& model, const MatchConfig& cfg) {
  FillLog log;
  const auto order = by_name(model);
  for (std::size_t di = 0; di < model.dimensions.size(); ++di) {
    auto& home = model.dimensions[di];
    auto& t = home.table;
    for (const auto& h : home.hierarchies) {
      for (std::size_t v = 0; v < h.parameters.size(); ++v) {
        const auto& p = h.parameters[v];
        if (v >= 1) {
          for (std::size_t e = 0; e < t.row_count(); ++e) {
            if (value(t, e, p)) continue;
            bool done = false;
            for (const auto f : order) {
              if (f == di || done) continue;
              const auto& foreign = model.dimensions[f];
              for (const auto& h2 : foreign.hierarchies) {
                for (std::size_t v2 = 0; v2 < h2.parameters.size() && !done; ++v2) {
                  const auto& p2 = h2.parameters[v2];
                  if (!attributes_match(p, home.name, p2, foreign.name, cfg).matched) continue;
                  for (const auto& lower : below(h2, v2)) {
                    const auto mine_attr = counterpart(home, foreign, lower, cfg);
                    if (!mine_attr) continue;
                    const auto mine = value(t, e, *mine_attr);
                    if (!mine) continue;
                    for (std::size_t e2 = 0; e2 < foreign.table.row_count(); ++e2) {
                      const auto theirs = value(foreign.table, e2, lower);
                      const auto target = value(foreign.table, e2, p2);
                      if (theirs && *theirs == *mine && target) {
                        set(t, e, p, *target);
                        log.push_back({{home.name, e, p}, h.name, *target, foreign.name, e2, lower, FillSource::kInter});
                        done = true;
                        break;
                      }
                    }
                    if (done) break;
                  }
                }
                if (done) break;
              }
            }
          }
        }
        auto it = h.weak.find(p);
        if (it == h.weak.end()) continue;
        for (const auto& w : it->second) {
          for (std::size_t e = 0; e < t.row_count(); ++e) {
            if (value(t, e, w)) continue;
            bool done = false;
            for (const auto f : order) {
              if (f == di || done) continue;
              const auto& foreign = model.dimensions[f];
              for (const auto& h3 : foreign.hierarchies) {
                for (std::size_t v4 = 0; v4 < h3.parameters.size() && !done; ++v4) {
                  const auto& p4 = h3.parameters[v4];
                  if (!attributes_match(p, home.name, p4, foreign.name, cfg).matched) continue;
                  // The foreign weak attribute matching w, best score first.
                  std::optional<std::string> w2;
                  double w2_score = -1.0;
                  if (auto wit = h3.weak.find(p4); wit != h3.weak.end()) {
                    for (const auto& candidate : wit->second) {
                      const auto decision = attributes_match(w, home.name, candidate, foreign.name, cfg);
                      if (decision.matched && decision.score > w2_score) {
                        w2 = candidate;
                        w2_score = decision.score;
                      }
                    }
                  }
                  if (!w2) continue;
                  std::vector<std::pair<std::string, std::optional<std::string>>> levels{{p4, p}};
                  for (const auto& lower : below(h3, v4)) {
                    levels.emplace_back(lower, counterpart(home, foreign, lower, cfg));
                  }
                  for (const auto& [level, mine_attr] : levels) {
                    if (!mine_attr) continue;
                    const auto mine = value(t, e, *mine_attr);
                    if (!mine) continue;
                    for (std::size_t e2 = 0; e2 < foreign.table.row_count(); ++e2) {
                      const auto theirs = value(foreign.table, e2, level);
                      const auto target = value(foreign.table, e2, *w2);
                      if (theirs && *theirs == *mine && target) {
                        set(t, e, w, *target);
                        log.push_back({{home.name, e, w}, h.name, *target, foreign.name, e2, level, FillSource::kInter});
                        done = true;
                        break;
                      }
                    }
                    if (done) break;
                  }
                }
                if (done) break;
              }
            }
          }
        }
      }
    }
  }
  return log;
}

// Full-matrix Levenshtein distance.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = std::min({dp[i - 1][j] + 1, dp[i][j - 1] + 1, dp[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return dp[a.size()][b.size()];
}

}  // namespace oracle

}  // namespace dwimpute::testing
