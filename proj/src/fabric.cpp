#include "cmol/fabric.hpp"

#include "cmol/error.hpp"

#include <algorithm>
#include <cmath>

namespace cmol {

namespace {

void erase_value(std::vector<Coord>& v, Coord c) {
  auto it = std::lower_bound(v.begin(), v.end(), c);
  if (it != v.end() && *it == c)
    v.erase(it);
}

/// Number of entries a break removes from a wire crossing `n` cells.
std::size_t broken_count(std::size_t n, double keep_fraction) {
  const auto cut = static_cast<std::size_t>(std::ceil((1.0 - keep_fraction) * static_cast<double>(n) - 1e-9));
  return std::min(cut, n);
}

} // namespace

std::string to_string(Coord c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

std::string_view to_string(DefectKind kind) {
  switch (kind) {
  case DefectKind::WireBreak: return "WireBreak";
  case DefectKind::StuckOpen: return "StuckOpen";
  case DefectKind::StuckClosed: return "StuckClosed";
  case DefectKind::DeadCell: return "DeadCell";
  }
  return "?";
}

std::optional<DefectKind> defect_kind_from_string(std::string_view text) {
  for (auto k : {DefectKind::WireBreak, DefectKind::StuckOpen, DefectKind::StuckClosed, DefectKind::DeadCell})
    if (to_string(k) == text)
      return k;
  return std::nullopt;
}

int Fabric::window_side(int radius) {
  return static_cast<int>(std::lround(std::sqrt(2.0 * radius * (radius - 1))));
}

Fabric::Fabric(int width, int height, int radius, DomainOverrides overrides)
    : width_(width), height_(height), radius_(radius), overrides_(std::move(overrides)) {
  if (width < 1 || height < 1)
    throw InputError("fabric dimensions must be at least 1x1");
  if (radius < 2)
    throw InputError("connectivity radius must be at least 2");
  for (auto& [cell, domain] : overrides_) {
    check_coord(cell, "domain override cell");
    for (Coord d : domain) {
      check_coord(d, "domain override entry");
      if (d == cell)
        throw InputError("domain override for " + to_string(cell) + " contains the cell itself");
    }
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  }
  domains_.reserve(cell_count());
  for (std::size_t i = 0; i < cell_count(); ++i)
    domains_.push_back(base_input_domain(coord(i)));
  dead_.assign(cell_count(), false);
}

void Fabric::check_coord(Coord c, std::string_view what) const {
  if (!contains(c))
    throw InputError(std::string(what) + " " + to_string(c) + " lies outside the " + std::to_string(width_) +
                     "x" + std::to_string(height_) + " fabric");
}

std::vector<Coord> Fabric::cells() const {
  std::vector<Coord> result;
  result.reserve(cell_count());
  for (std::size_t i = 0; i < cell_count(); ++i)
    result.push_back(coord(i));
  return result;
}

std::vector<Coord> Fabric::base_input_domain(Coord c) const {
  check_coord(c, "cell");
  if (auto it = overrides_.find(c); it != overrides_.end())
    return it->second;
  const int side = window_side(radius_);
  const int x0 = c.x - side / 2;
  const int y0 = c.y - side / 2;
  std::vector<Coord> domain;
  for (int x = std::max(0, x0); x <= std::min(width_ - 1, x0 + side - 1); ++x)
    for (int y = std::max(0, y0); y <= std::min(height_ - 1, y0 + side - 1); ++y)
      if (Coord{x, y} != c)
        domain.push_back({x, y});
  return domain;
}

const std::vector<Coord>& Fabric::input_domain(Coord c) const {
  check_coord(c, "cell");
  return domains_[index(c)];
}

std::vector<Coord> Fabric::output_domain(Coord c) const {
  check_coord(c, "cell");
  std::vector<Coord> result;
  for (std::size_t i = 0; i < cell_count(); ++i)
    if (std::binary_search(domains_[i].begin(), domains_[i].end(), c))
      result.push_back(coord(i));
  std::sort(result.begin(), result.end());
  return result;
}

bool Fabric::can_drive(Coord source, Coord sink) const {
  const auto& d = input_domain(sink);
  return std::binary_search(d.begin(), d.end(), source);
}

Fabric Fabric::apply_defect(const DefectSpec& d) const {
  check_coord(d.a, "defect cell");
  Fabric out = *this;
  switch (d.kind) {
  case DefectKind::WireBreak: {
    if (!(d.break_fraction > 0.0 && d.break_fraction < 1.0))
      throw InputError("wire break fraction must lie in (0,1)");
    if (d.wire == Wire::Input) {
      auto& domain = out.domains_[index(d.a)];
      domain.resize(domain.size() - broken_count(domain.size(), d.break_fraction));
    } else {
      const auto reached = output_domain(d.a);
      const auto cut = broken_count(reached.size(), d.break_fraction);
      for (std::size_t i = reached.size() - cut; i < reached.size(); ++i)
        erase_value(out.domains_[index(reached[i])], d.a);
    }
    break;
  }
  case DefectKind::StuckOpen:
  case DefectKind::StuckClosed: {
    if (!d.b)
      throw InputError(std::string(to_string(d.kind)) + " defect needs a receiving cell 'b'");
    check_coord(*d.b, "defect cell");
    const auto base = base_input_domain(*d.b);
    if (!std::binary_search(base.begin(), base.end(), d.a))
      throw InputError(std::string(to_string(d.kind)) + " device " + to_string(d.a) + "->" + to_string(*d.b) +
                       " does not exist: driver is outside the receiver's connectivity domain");
    if (d.kind == DefectKind::StuckOpen)
      erase_value(out.domains_[index(*d.b)], d.a);
    break;
  }
  case DefectKind::DeadCell:
    out.dead_[index(d.a)] = true;
    out.domains_[index(d.a)].clear();
    for (auto& domain : out.domains_)
      erase_value(domain, d.a);
    break;
  }
  out.defects_.push_back(d);
  return out;
}

std::vector<Coord> Fabric::usable_cells() const {
  std::vector<Coord> result;
  for (std::size_t i = 0; i < cell_count(); ++i)
    if (!dead_[i])
      result.push_back(coord(i));
  return result;
}

std::vector<std::pair<Coord, Coord>> Fabric::stuck_closed_pairs() const {
  std::vector<std::pair<Coord, Coord>> result;
  for (const auto& d : defects_)
    if (d.kind == DefectKind::StuckClosed)
      result.emplace_back(d.a, *d.b);
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

nlohmann::json coord_to_json(Coord c) { return nlohmann::json::array({c.x, c.y}); }

Coord coord_from_json(const nlohmann::json& doc) {
  if (!doc.is_array() || doc.size() != 2)
    throw InputError("coordinate must be [x, y], got " + doc.dump());
  return {doc[0].get<int>(), doc[1].get<int>()};
}

nlohmann::json defect_to_json(const DefectSpec& d) {
  nlohmann::json doc{{"kind", to_string(d.kind)}, {"a", coord_to_json(d.a)}};
  if (d.b)
    doc["b"] = coord_to_json(*d.b);
  if (d.kind == DefectKind::WireBreak) {
    doc["wire"] = d.wire == Wire::Input ? "input" : "output";
    doc["frac"] = d.break_fraction;
  }
  return doc;
}

DefectSpec defect_from_json(const nlohmann::json& doc) {
  try {
    DefectSpec d;
    const auto kind_text = doc.at("kind").get<std::string>();
    const auto kind = defect_kind_from_string(kind_text);
    if (!kind)
      throw InputError("unknown defect kind '" + kind_text + "'");
    d.kind = *kind;
    d.a = coord_from_json(doc.at("a"));
    if (doc.contains("b"))
      d.b = coord_from_json(doc.at("b"));
    const auto wire = doc.value("wire", std::string("input"));
    if (wire != "input" && wire != "output")
      throw InputError("defect wire must be 'input' or 'output'");
    d.wire = wire == "input" ? Wire::Input : Wire::Output;
    d.break_fraction = doc.value("frac", 0.5);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed defect: ") + e.what());
  }
}

nlohmann::json fabric_to_json(const Fabric& fabric) {
  nlohmann::json doc{{"x", fabric.width()}, {"y", fabric.height()}, {"r", fabric.radius()}};
  if (!fabric.overrides().empty()) {
    nlohmann::json domains = nlohmann::json::object();
    for (const auto& [cell, domain] : fabric.overrides()) {
      nlohmann::json list = nlohmann::json::array();
      for (Coord c : domain)
        list.push_back(coord_to_json(c));
      domains[std::to_string(cell.x) + "," + std::to_string(cell.y)] = list;
    }
    doc["domains"] = domains;
  }
  doc["defects"] = nlohmann::json::array();
  for (const auto& d : fabric.defects())
    doc["defects"].push_back(defect_to_json(d));
  return doc;
}

Fabric fabric_from_json(const nlohmann::json& doc) {
  try {
    DomainOverrides overrides;
    if (doc.contains("domains")) {
      for (const auto& [key, list] : doc.at("domains").items()) {
        const auto comma = key.find(',');
        if (comma == std::string::npos)
          throw InputError("domain key must be \"x,y\", got '" + key + "'");
        const Coord cell{std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
        auto& domain = overrides[cell];
        for (const auto& c : list)
          domain.push_back(coord_from_json(c));
      }
    }
    Fabric fabric(doc.at("x").get<int>(), doc.at("y").get<int>(), doc.value("r", 9), std::move(overrides));
    for (const auto& d : doc.value("defects", nlohmann::json::array()))
      fabric = fabric.apply_defect(defect_from_json(d));
    return fabric;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed fabric JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError("malformed fabric JSON: bad domain key");
  }
}

} // namespace cmol
