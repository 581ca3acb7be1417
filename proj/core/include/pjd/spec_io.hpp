#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pjd/spt.hpp"
#include "pjd/typed_spec.hpp"

namespace pjd {

struct RecoveryApp {
  std::string payoff = "identity";  // "identity", "square" or an expression in x
  std::vector<std::pair<double, double>> curve;  // (tenor, P)
};

/// Structured-text (JSON) spec document, version "1". Exactly one of typed
/// and raw is present, except for SPT documents whose model lives in the
/// application section.
struct SpecDocument {
  std::string version = "1";
  StateSpace space = StateSpace::interval();
  std::optional<TypedSpec> typed;
  std::optional<LevyTriplet> raw;
  std::optional<RecoveryApp> recovery;
  std::optional<SPTModel> spt;
  std::map<std::string, std::string> metadata;

  /// construct(typed), the raw triplet, or spt_build(spt).
  LevyTriplet triplet() const;
};

/// Throws Error(Parse) on malformed documents.
SpecDocument parse_spec(std::string_view text);
SpecDocument load_spec(const std::string& path);
std::string dump_spec(const SpecDocument& doc);

}  // namespace pjd
