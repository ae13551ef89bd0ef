#include "cmol/defects.hpp"

#include "cmol/error.hpp"
#include "cmol/rng.hpp"

#include <cmath>
#include <numbers>

namespace cmol {

double defect_pdf(double x, double y, Coord center, double sigma) {
  const double dx = x - center.x;
  const double dy = y - center.y;
  return std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi));
}

Injection inject(const Fabric& fabric, const InjectionConfig& config) {
  if (!(config.sigma > 0))
    throw InputError("sigma must be positive");
  Rng rng(config.seed);
  Coord center;
  if (config.center) {
    if (!fabric.contains(*config.center))
      throw InputError("defect center " + to_string(*config.center) + " lies outside the fabric");
    center = *config.center;
  } else {
    center.x = static_cast<int>(rng.below(static_cast<std::uint64_t>(fabric.width())));
    center.y = static_cast<int>(rng.below(static_cast<std::uint64_t>(fabric.height())));
  }

  Injection out{fabric, {}, center};
  auto hit = [&](Coord site) { return rng.uniform() <= defect_pdf(site.x, site.y, center, config.sigma); };
  auto add = [&](DefectSpec d) {
    out.fabric = out.fabric.apply_defect(d);
    out.defects.push_back(d);
  };
  const auto cells = fabric.cells();

  if (config.kinds.contains(DefectKind::DeadCell))
    for (Coord c : cells)
      if (hit(c))
        add({DefectKind::DeadCell, c, std::nullopt, Wire::Input, 0.5});

  if (config.kinds.contains(DefectKind::WireBreak))
    for (Coord c : cells)
      for (Wire w : {Wire::Input, Wire::Output})
        if (hit(c))
          add({DefectKind::WireBreak, c, std::nullopt, w, rng.uniform(0.2, 0.8)});

  for (DefectKind kind : {DefectKind::StuckOpen, DefectKind::StuckClosed}) {
    if (!config.kinds.contains(kind))
      continue;
    for (Coord b : cells)
      for (Coord a : fabric.base_input_domain(b))
        if (hit(b))
          add({kind, a, b, Wire::Input, 0.5});
  }
  return out;
}

} // namespace cmol
