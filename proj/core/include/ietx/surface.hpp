#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ietx/composition.hpp"

namespace ietx {

// k unit-width rectangles R_1..R_k of heights c_1..c_k. The top of R_i is
// glued to the bottom of R_{i+1} (indices mod k) through T_i; the vertical
// sides of each rectangle are glued to each other by translation.
class StackedSurface {
 public:
  StackedSurface(std::vector<Scalar> heights, std::vector<Iet> gluings,
                 std::vector<bool> declared_incommensurable = {});

  std::size_t size() const { return heights_.size(); }
  const std::vector<Scalar>& heights() const { return heights_; }
  const std::vector<Iet>& gluings() const { return gluings_; }
  // Heights flagged as symbolic irrationals, declared incommensurable with
  // every other height (their stored value is only an approximation).
  const std::vector<bool>& declared_incommensurable() const { return declared_incommensurable_; }
  Scalar area() const;
  Backend backend() const { return heights_.front().backend(); }

 private:
  std::vector<Scalar> heights_;
  std::vector<Iet> gluings_;
  std::vector<bool> declared_incommensurable_;
};

// Requires every c_i > 0; the mixed-sign family has no such surface.
StackedSurface build_surface(const CompositionSpec& spec);

// Direction with inverse slope alpha = cot(theta), theta in (0, pi/2].
struct DirectionSpec {
  Scalar alpha;
  explicit DirectionSpec(Scalar a);
};

struct ReturnTime {
  Scalar squared;  // exact in the surface's backend: H^2 (1 + alpha^2)
  Scalar value;    // fixed-point square root at `bits`
};

ReturnTime make_return_time(const Scalar& height, const Scalar& alpha, int bits);

struct Singularity {
  std::size_t rectangle;  // 0-based rectangle whose top the trajectory hit at a breakpoint
  Scalar x;
};

struct FirstReturn {
  Scalar x;  // point of first return to the bottom of R_1
  ReturnTime time;
  std::optional<Singularity> singularity;  // set when the trajectory ends at a cone point
};

// Follows the straight line from (x0, 0) on the bottom of R_1 through the
// rectangles R_1, ..., R_k: crossing R_i shifts x by c_i alpha (mod 1), then
// the gluing T_i carries it into the next rectangle.
FirstReturn first_return(const StackedSurface& surface, const DirectionSpec& dir, const Scalar& x0,
                         int time_bits = 256);

// (sum c_i) sqrt(1 + alpha^2): the roof is constant on these surfaces.
ReturnTime return_time(const StackedSurface& surface, const DirectionSpec& dir, int time_bits = 256);

// Every wall crossing of one return trip, for plotting.
struct TraceEvent {
  std::size_t step;
  std::size_t rectangle;
  Scalar x;
  Scalar y;
  enum class Kind { enter, side, top } kind;
};

std::vector<TraceEvent> flow_trace(const StackedSurface& surface, const DirectionSpec& dir,
                                   const Scalar& x0);
void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& events);

class RationalityUndecidable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SquareTiledVerdict {
  bool square_tiled = false;
  std::string reason;
};

// True iff all gluing lengths are rational and the heights are pairwise
// commensurable. Throws RationalityUndecidable for fixed-point surfaces.
SquareTiledVerdict is_square_tiled(const StackedSurface& surface);

struct Cylinder {
  Scalar height;
  Scalar circumference;
  Scalar modulus;
};

// Horizontal cylinder decomposition: one cylinder per rectangle.
std::vector<Cylinder> horizontal_cylinders(const StackedSurface& surface);

// Mirrors the composition spec, with heights in place of coefficients:
// {"iets": [...], "heights": [...], "declared_incommensurable": [...]}
nlohmann::json surface_to_json(const StackedSurface& surface);
StackedSurface surface_from_json(const nlohmann::json& j, const NumericsConfig& config);

}  // namespace ietx
