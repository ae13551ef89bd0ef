#pragma once

#include <nlohmann/json.hpp>

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cmol {

/// Zero-based cell coordinate, x to the right and y upwards.  The default
/// ordering (x first, then y) is the column-major order used for nanowire
/// traversal.
struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

std::string to_string(Coord c);

enum class DefectKind { WireBreak, StuckOpen, StuckClosed, DeadCell };
enum class Wire { Input, Output };

std::string_view to_string(DefectKind kind);
std::optional<DefectKind> defect_kind_from_string(std::string_view text);

/*! \brief One static fabric defect.
 *
 * For StuckOpen/StuckClosed, `a` is the driving cell (its output nanowire)
 * and `b` the receiving cell (its input nanowire).  WireBreak and DeadCell
 * affect cell `a` only; a WireBreak keeps the `break_fraction` of the wire
 * nearest to its pin.
 */
struct DefectSpec {
  DefectKind kind = DefectKind::DeadCell;
  Coord a;
  std::optional<Coord> b;
  Wire wire = Wire::Input;
  double break_fraction = 0.5;

  bool operator==(const DefectSpec&) const = default;
};

using DomainOverrides = std::map<Coord, std::vector<Coord>>;

/*! \brief CMOL cell array with per-cell connectivity domains.
 *
 * The canonical input domain of a cell is a square window of side
 * round(sqrt(2r(r-1))) around it (one extra row/column to the lower left
 * when the side is even), minus the cell itself, clipped to the array.  For
 * r = 9 an interior cell sees 143 drivers.  Overrides replace the window for
 * individual cells.  Defects then edit the materialized domains in the
 * order they were applied.
 *
 * Values are immutable; `apply_defect` returns a new fabric.
 */
class Fabric {
public:
  Fabric(int width, int height, int radius, DomainOverrides overrides = {});

  int width() const { return width_; }
  int height() const { return height_; }
  int radius() const { return radius_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(width_) * height_; }

  bool contains(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  /// Row-major cell index.
  std::size_t index(Coord c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Coord coord(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }
  /// All cells in row-major order.
  std::vector<Coord> cells() const;

  /// Cells whose output nanowire can drive `c`'s input, sorted column-major.
  /// Throws InputError when `c` is outside the fabric.
  const std::vector<Coord>& input_domain(Coord c) const;
  /// Cells whose input `c` can drive; dual of `input_domain`.
  std::vector<Coord> output_domain(Coord c) const;
  bool can_drive(Coord source, Coord sink) const;

  /// Domain of `c` before any defect is applied (override or clipped window).
  std::vector<Coord> base_input_domain(Coord c) const;

  /// Validates `d` against this fabric and returns the edited copy.
  Fabric apply_defect(const DefectSpec& d) const;

  const std::vector<DefectSpec>& defects() const { return defects_; }
  const DomainOverrides& overrides() const { return overrides_; }
  bool is_dead(Coord c) const { return dead_.at(index(c)); }
  std::vector<Coord> usable_cells() const;
  /// (driver, receiver) pairs whose device is stuck closed.
  std::vector<std::pair<Coord, Coord>> stuck_closed_pairs() const;

  /// Side length of the canonical window for radius r.
  static int window_side(int radius);

private:
  void check_coord(Coord c, std::string_view what) const;

  int width_;
  int height_;
  int radius_;
  DomainOverrides overrides_;
  std::vector<DefectSpec> defects_;
  std::vector<std::vector<Coord>> domains_;
  std::vector<bool> dead_;
};

nlohmann::json defect_to_json(const DefectSpec& d);
DefectSpec defect_from_json(const nlohmann::json& doc);

/// `{"x","y","r","domains"?: {"x,y": [[x,y],...]}, "defects"?: [...]}`
nlohmann::json fabric_to_json(const Fabric& fabric);
Fabric fabric_from_json(const nlohmann::json& doc);

nlohmann::json coord_to_json(Coord c);
Coord coord_from_json(const nlohmann::json& doc);

} // namespace cmol
