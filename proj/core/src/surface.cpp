#include "ietx/surface.hpp"

#include <stdexcept>

#include "ietx/serialization.hpp"

namespace ietx {

StackedSurface::StackedSurface(std::vector<Scalar> heights, std::vector<Iet> gluings,
                               std::vector<bool> declared_incommensurable)
    : heights_(std::move(heights)),
      gluings_(std::move(gluings)),
      declared_incommensurable_(std::move(declared_incommensurable)) {
  if (heights_.empty()) throw std::invalid_argument("a stacked surface needs at least one rectangle");
  if (heights_.size() != gluings_.size()) {
    throw std::invalid_argument("surface has " + std::to_string(heights_.size()) + " heights but " +
                                std::to_string(gluings_.size()) + " gluings");
  }
  if (declared_incommensurable_.empty()) declared_incommensurable_.assign(heights_.size(), false);
  if (declared_incommensurable_.size() != heights_.size()) {
    throw std::invalid_argument("incommensurability flags do not match the heights");
  }
  for (std::size_t i = 0; i < heights_.size(); ++i) {
    if (heights_[i].sign() <= 0) {
      throw std::invalid_argument("rectangle " + std::to_string(i + 1) + " has non-positive height " +
                                  format_scalar(heights_[i]));
    }
    if (!heights_[i].same_backend(heights_.front()) || gluings_[i].backend() != backend() ||
        gluings_[i].precision_bits() != heights_.front().precision_bits()) {
      throw BackendMismatch("surface data mixes backends");
    }
  }
}

Scalar StackedSurface::area() const {
  Scalar a = Scalar::like(heights_.front(), 0);
  for (const auto& h : heights_) a += h;
  return a;
}

StackedSurface build_surface(const CompositionSpec& spec) {
  if (!spec.all_positive()) {
    throw std::invalid_argument("stacked surfaces need positive coefficients (heights)");
  }
  return StackedSurface(spec.coefficients(), spec.iets());
}

DirectionSpec::DirectionSpec(Scalar a) : alpha(std::move(a)) {
  if (alpha.sign() < 0) throw std::invalid_argument("direction needs alpha = cot(theta) >= 0");
}

ReturnTime make_return_time(const Scalar& height, const Scalar& alpha, int bits) {
  const Scalar one = Scalar::like(alpha, 1);
  Scalar squared = height * height * (one + alpha * alpha);
  Scalar value = sqrt_fixed(squared, bits);
  return {std::move(squared), std::move(value)};
}

FirstReturn first_return(const StackedSurface& surface, const DirectionSpec& dir, const Scalar& x0,
                         int time_bits) {
  const Scalar& proto = surface.heights().front();
  const Scalar alpha = rebase(dir.alpha, proto);
  const Scalar one = Scalar::like(proto, 1);
  const Scalar slope_factor = one + alpha * alpha;

  Scalar x = rebase(x0, proto);
  if (x.sign() < 0 || x >= one) throw std::invalid_argument("first_return start outside [0, 1)");

  FirstReturn out;
  Scalar climbed = Scalar::like(proto, 0);
  Scalar elapsed = Scalar::fixed_from_mantissa(0, time_bits);
  for (std::size_t i = 0; i < surface.size(); ++i) {
    const Scalar& h = surface.heights()[i];
    // Straight segment across R_i: horizontal drift h * alpha, wrapped by the side gluing.
    x = mod_one(x + h * alpha);
    climbed += h;
    elapsed += sqrt_fixed(h * h * slope_factor, time_bits);
    const Iet& glue = surface.gluings()[i];
    if (glue.near_interior_breakpoint(x)) {
      out.singularity = Singularity{i, x};
      break;
    }
    x = glue.apply(x);
  }
  out.x = std::move(x);
  out.time = {climbed * climbed * slope_factor, std::move(elapsed)};
  return out;
}

ReturnTime return_time(const StackedSurface& surface, const DirectionSpec& dir, int time_bits) {
  const Scalar alpha = rebase(dir.alpha, surface.heights().front());
  return make_return_time(surface.area(), alpha, time_bits);
}

std::vector<TraceEvent> flow_trace(const StackedSurface& surface, const DirectionSpec& dir,
                                   const Scalar& x0) {
  const Scalar& proto = surface.heights().front();
  const Scalar alpha = rebase(dir.alpha, proto);
  const Scalar one = Scalar::like(proto, 1);
  const Scalar zero = Scalar::like(proto, 0);
  Scalar x = rebase(x0, proto);

  std::vector<TraceEvent> events;
  std::size_t step = 0;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    const Scalar& h = surface.heights()[i];
    const Scalar entry = x;
    events.push_back({step++, i, x, zero, TraceEvent::Kind::enter});
    if (alpha.sign() > 0) {
      Scalar y = zero;
      Scalar cx = x;
      while (true) {
        Scalar rise = (one - cx) / alpha;
        if (y + rise >= h) break;
        y += rise;
        events.push_back({step++, i, zero, y, TraceEvent::Kind::side});
        cx = zero;
      }
    }
    x = mod_one(entry + h * alpha);
    events.push_back({step++, i, x, h, TraceEvent::Kind::top});
    const Iet& glue = surface.gluings()[i];
    if (glue.near_interior_breakpoint(x)) break;
    x = glue.apply(x);
  }
  return events;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& events) {
  os << "step,rectangle,x,y,event\n";
  for (const auto& e : events) {
    const char* kind = e.kind == TraceEvent::Kind::enter ? "enter"
                       : e.kind == TraceEvent::Kind::side ? "side"
                                                          : "top";
    os << e.step << ',' << e.rectangle + 1 << ',' << format_scalar(e.x) << ',' << format_scalar(e.y)
       << ',' << kind << '\n';
  }
}

SquareTiledVerdict is_square_tiled(const StackedSurface& surface) {
  if (surface.backend() == Backend::fixed) {
    throw RationalityUndecidable("rationality cannot be decided from fixed-point approximations");
  }
  // Every scalar in the rational backend is rational, so the length test
  // only guards the representation.
  for (std::size_t i = 0; i < surface.size(); ++i) {
    for (const auto& l : surface.gluings()[i].lengths()) {
      if (!l.is_rational()) {
        return {false, "gluing T_" + std::to_string(i + 1) + " has a non-rational length"};
      }
    }
  }
  if (surface.size() >= 2) {
    for (std::size_t i = 0; i < surface.size(); ++i) {
      if (surface.declared_incommensurable()[i]) {
        return {false, "height c_" + std::to_string(i + 1) +
                           " is declared incommensurable with the other heights"};
      }
    }
  }
  return {true, "all gluing lengths rational and all heights commensurable"};
}

std::vector<Cylinder> horizontal_cylinders(const StackedSurface& surface) {
  std::vector<Cylinder> out;
  const Scalar one = Scalar::like(surface.heights().front(), 1);
  for (const auto& h : surface.heights()) out.push_back({h, one, h / one});
  return out;
}

nlohmann::json surface_to_json(const StackedSurface& surface) {
  nlohmann::json iets = nlohmann::json::array();
  for (const auto& t : surface.gluings()) iets.push_back(iet_to_json(t));
  nlohmann::json heights = nlohmann::json::array();
  for (const auto& h : surface.heights()) heights.push_back(format_scalar(h));
  std::vector<bool> flags = surface.declared_incommensurable();
  return {{"iets", std::move(iets)}, {"heights", std::move(heights)}, {"declared_incommensurable", flags}};
}

StackedSurface surface_from_json(const nlohmann::json& j, const NumericsConfig& config) {
  if (!j.is_object() || !j.contains("iets")) throw ParseError("surface must be an object with 'iets'");
  const char* key = j.contains("heights") ? "heights" : "coefficients";
  if (!j.contains(key)) throw ParseError("surface needs 'heights' (or 'coefficients')");
  std::vector<Iet> gluings;
  for (const auto& t : j.at("iets")) gluings.push_back(iet_from_json(t, config));
  std::vector<Scalar> heights;
  for (const auto& h : j.at(key)) {
    heights.push_back(h.is_string() ? parse_scalar(h.get<std::string>(), config)
                                    : Scalar::from_ratio(h.get<long>(), 1, config));
  }
  std::vector<bool> flags;
  if (j.contains("declared_incommensurable")) flags = j.at("declared_incommensurable").get<std::vector<bool>>();
  return StackedSurface(std::move(heights), std::move(gluings), std::move(flags));
}

}  // namespace ietx
