#pragma once

#include <map>
#include <string>
#include <vector>

#include "dirspec/core.hpp"

namespace dirspec {

// Raised by decompose when peeling every declared direction leaves a nonzero
// residual, which would contradict the decomposition theorem for a correctly
// declared direction list.
struct ResidualError : std::logic_error {
    explicit ResidualError(const std::string& what) : std::logic_error(what) {}
};

// Weighted sum of lines: for each direction in `order`, one rational weight
// per line parameter c in [0, p). Weights are order-dependent (gauge
// freedom), so `order` is part of the value.
struct LineWeighting {
    Prime p;
    std::vector<Direction> order;
    // keyed by direction; each vector has length p, entry c = weight of line c
    std::map<Direction, std::vector<Rat>> weights;
    // free-form notes (e.g. corrections applied by closed-form constructors)
    std::map<std::string, std::string> metadata;
};

// Grid assigning profile[c] / p to every point of line c of the profile's
// direction; totals match.
RatGrid uniform_spread(const Prime& p, const LineProfile& profile);

struct PeelResult {
    LineWeighting weighting;
    RatGrid residual;
};

// One peeling pass in the given direction order: at each stage record the
// current residual's profile divided by p and subtract its uniform spread.
// Never throws on nonzero residual; callers inspect it.
PeelResult decompose_along(const RatGrid& f, const std::vector<Direction>& order);

// Peels along special_directions(f) in canonical order (slopes ascending,
// vertical last). Constant grids have no special direction and decompose onto
// the vertical direction by convention. Throws ResidualError if a nonzero
// residual survives, checking first that all line sums vanish in every
// direction and then that the residual is pointwise zero.
LineWeighting decompose(const RatGrid& f);

// Pointwise sum of weight times line indicator.
RatGrid reconstruct(const LineWeighting& w);

// The closed-form three-direction weighting whose reconstruction is the
// indicator of the lower triangle {(a, b): b < a}: weight c/p on the vertical
// line x = c, -c/p on the horizontal line y = c, and c/p on the slope-one
// line y = x + c. The printed source of these weights describes the region
// inconsistently; the metadata records the verified reading.
LineWeighting triangle_explicit_weights(Prime p);

// JSON form: {"p":…, "order":[dirs], "weights":{dir:{c:rational-string}},
// "metadata":{…}} with metadata omitted when empty.
std::string write_weighting_json(const LineWeighting& w);
LineWeighting parse_weighting_json(const std::string& text);

}  // namespace dirspec
