#include "cmol/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cmol {

namespace {

constexpr int kCell = 64;
constexpr int kMargin = 24;
constexpr int kPin = 10;

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += ch;
    }
  }
  return out;
}

/// Top-left pixel of a cell; fabric y grows upwards, SVG y downwards.
std::pair<int, int> origin(Coord c, int height) { return {kMargin + c.x * kCell, kMargin + (height - 1 - c.y) * kCell}; }

} // namespace

std::string render_svg(const Design& d) {
  const int w = d.fabric.width();
  const int h = d.fabric.height();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kMargin + w * kCell << "\" height=\""
      << 2 * kMargin + h * kCell << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int y = h - 1; y >= 0; --y)
    for (int x = 0; x < w; ++x) {
      const auto [px, py] = origin({x, y}, h);
      out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << kCell << "\" height=\"" << kCell << "\" fill=\""
          << (d.fabric.is_dead({x, y}) ? "#cccccc" : "none") << "\" stroke=\"#999999\"/>\n";
    }

  std::vector<std::pair<Coord, GateId>> occupied;
  for (const Gate& g : d.circuit.gates())
    if (g.kind != GateKind::Output)
      if (auto c = d.placement.cell(g.id); c && d.fabric.contains(*c))
        occupied.emplace_back(*c, g.id);
  std::sort(occupied.begin(), occupied.end());

  for (const Gate& g : d.circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    const auto sink = d.placement.cell(g.id);
    if (!sink || !d.fabric.contains(*sink))
      continue;
    for (GateId f : g.fanin) {
      const auto source = d.placement.cell(f);
      if (!source || !d.fabric.contains(*source))
        continue;
      const auto [sx, sy] = origin(*source, h);
      const auto [tx, ty] = origin(*sink, h);
      const bool ok = d.fabric.can_drive(*source, *sink);
      out << "<line x1=\"" << sx + kPin << "\" y1=\"" << sy + kCell - kPin << "\" x2=\"" << tx + kCell - kPin
          << "\" y2=\"" << ty + kPin << "\" stroke=\"" << (ok ? "#333333" : "#ff8800") << "\" stroke-width=\"1.5\"/>\n";
    }
  }

  for (const auto& [cell, id] : occupied) {
    const auto [px, py] = origin(cell, h);
    const Gate& g = d.circuit.gate(id);
    out << "<circle cx=\"" << px + kPin << "\" cy=\"" << py + kCell - kPin << "\" r=\"4\" fill=\"red\"/>\n";
    if (g.kind != GateKind::Input)
      out << "<circle cx=\"" << px + kCell - kPin << "\" cy=\"" << py + kPin << "\" r=\"4\" fill=\"blue\"/>\n";
    out << "<text x=\"" << px + kCell / 2 << "\" y=\"" << py + kCell / 2 + 4 << "\" text-anchor=\"middle\">"
        << escape(g.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_ascii(const Design& d) {
  const int w = d.fabric.width();
  const int h = d.fabric.height();
  std::map<Coord, std::string> label;
  std::size_t width = 1;
  for (const Gate& g : d.circuit.gates())
    if (g.kind != GateKind::Output)
      if (auto c = d.placement.cell(g.id); c && d.fabric.contains(*c)) {
        label[*c] = g.name;
        width = std::max(width, g.name.size() + (d.fabric.is_dead(*c) ? 1 : 0));
      }

  std::ostringstream out;
  for (int y = h - 1; y >= 0; --y) {
    out << (y < 10 ? " " : "") << y << " |";
    for (int x = 0; x < w; ++x) {
      const bool dead = d.fabric.is_dead({x, y});
      std::string text = dead ? "#" : ".";
      if (auto it = label.find({x, y}); it != label.end())
        text = it->second + (dead ? "#" : "");
      out << ' ' << text << std::string(width - text.size(), ' ');
    }
    out << '\n';
  }
  out << "    ";
  for (int x = 0; x < w; ++x) {
    const auto num = std::to_string(x);
    out << ' ' << num << std::string(width > num.size() ? width - num.size() : 0, ' ');
  }
  out << "\n\nnets:\n";
  for (const Gate& g : d.circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    const auto sink = d.placement.cell(g.id);
    for (GateId f : g.fanin) {
      const auto source = d.placement.cell(f);
      if (!source || !sink)
        continue;
      out << "  " << d.circuit.gate(f).name << to_string(*source) << " -> " << g.name << to_string(*sink);
      if (d.fabric.contains(*source) && d.fabric.contains(*sink) && !d.fabric.can_drive(*source, *sink))
        out << "  (out of domain)";
      out << '\n';
    }
  }
  return out.str();
}

} // namespace cmol
