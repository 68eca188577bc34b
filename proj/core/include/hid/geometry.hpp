#pragma once

#include <span>
#include <vector>

namespace hid {

/// Axis-aligned box in normalized frame coordinates, continuous convention:
/// area = (x2 - x1) * (y2 - y1), no pixel correction. Valid boxes satisfy
/// x1 < x2, y1 < y2 with all coordinates in [0, 1]; the parsers enforce this
/// at the I/O boundary so geometry never sees degenerate input.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }

  bool operator==(const BBox&) const = default;
};

/// True iff coordinates are finite, inside [0,1], and the box has positive area.
bool is_valid_box(const BBox& b);

/// Intersection area of two boxes; 0 when disjoint.
double intersection_area(const BBox& a, const BBox& b);

/// Intersection over union. Symmetric, in [0,1], 1 iff a == b.
double iou(const BBox& a, const BBox& b);

/// Intersection over foreground: |a ∩ container| / |a|.
/// Equals 1 exactly when the foreground box is enclosed by the container.
double iof(const BBox& fg, const BBox& container);

/// Componentwise min/max hull of a nonempty box set. Throws
/// std::invalid_argument on an empty member set.
BBox enclosing_box(std::span<const BBox> boxes);

}  // namespace hid
