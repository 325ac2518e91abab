#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "slab/gf.hpp"
#include "slab/plane.hpp"

namespace slab {

/**
 * A named construction of E, parsed from
 *   family:<name>[:<k>=<v>,...]    e.g. family:axis-subgroup:c=2
 *   points:(x,y);(x,y);...
 *
 * Names and parameters:
 *   empty, origin, full, full-minus-origin
 *   line-origin        line=<ProjLine index> (default 0, the x-axis)
 *   line-affine        x=<code> (the vertical line {x = code}, default 1)
 *   complement         of=<name> plus that family's parameters
 *   axis-subgroup      c=<divisor of q-1>: the order-(q-1)/c subgroup on the y-axis
 *   subfield-plane     sub-r=<divisor of r>: F_{p^sub-r}^2
 *   orbit-union        gens=[a,b;c,d]|[a,b;c,d], orbits=<i>+<j>... | all-nonzero
 *   random             n=<count>, seed=<u64>: n distinct points
 *   explicit           the points: form
 */
struct FamilySpec {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<Point2> points;  // explicit only

  std::string param(const std::string& key, const std::string& fallback) const;
  std::uint64_t int_param(const std::string& key, std::uint64_t fallback) const;
};

/// Parses the text grammar; point codes are range-checked later by gen_family.
FamilySpec parse_family_spec(std::string_view text);
std::string format_family_spec(const FamilySpec& spec);

/// Builds the set. Throws std::invalid_argument for unknown names or parameters invalid for the field.
PointSet gen_family(const Field& f, const FamilySpec& spec);
PointSet gen_family(const Field& f, std::string_view text);

/// n distinct codes of [0, q^2): the first n entries of a SplitMix64-driven Fisher-Yates shuffle.
PointSet random_point_set(std::uint32_t q, std::uint64_t n, std::uint64_t seed);

/// m0 random lines through the origin, each carrying m1 random nonzero points (no origin).
PointSet uniform_line_set(const Field& f, std::uint32_t m0, std::uint32_t m1, std::uint64_t seed);

}  // namespace slab
