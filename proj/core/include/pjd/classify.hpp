#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pjd/typed_spec.hpp"

namespace pjd {

enum class TagKind { Typed, Type4Candidate, Unclassifiable };

struct TypeTag {
  TagKind kind = TagKind::Unclassifiable;
  std::optional<TypedSpec> spec;  // canonical parameters when kind == Typed
  std::string detail;

  /// "interval-type-2", "interval-type-4-candidate", "unclassifiable", ...
  std::string name() const;
};

/// Decision tree over a validated triplet with affine jump sizes. Interval
/// triplets that fit no type become Type 4 candidates; simplex triplets
/// outside the gamma = H(y) P1(x) dichotomy throw AssumptionAViolated.
/// Throws InvalidTriplet when validation fails (checked on a grid_n grid),
/// NotAffineJumpSizes for gamma of state degree > 1.
TypeTag classify(const LevyTriplet& triplet, int grid_n = 60);

/// Recovered parameters as (key, value) pairs for printing.
std::vector<std::pair<std::string, std::string>> describe(const TypedSpec& spec);

}  // namespace pjd
