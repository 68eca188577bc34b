#include "hid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hid {

bool is_valid_box(const BBox& b) {
  return std::isfinite(b.x1) && std::isfinite(b.y1) && std::isfinite(b.x2) &&
         std::isfinite(b.y2) && b.x1 >= 0.0 && b.y1 >= 0.0 && b.x2 <= 1.0 &&
         b.y2 <= 1.0 && b.x1 < b.x2 && b.y1 < b.y2;
}

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

double iof(const BBox& fg, const BBox& container) {
  const double inter = intersection_area(fg, container);
  if (inter <= 0.0) return 0.0;
  return inter / fg.area();
}

BBox enclosing_box(std::span<const BBox> boxes) {
  if (boxes.empty()) throw std::invalid_argument("enclosing_box: empty member set");
  BBox out = boxes.front();
  for (const BBox& b : boxes.subspan(1)) {
    out.x1 = std::min(out.x1, b.x1);
    out.y1 = std::min(out.y1, b.y1);
    out.x2 = std::max(out.x2, b.x2);
    out.y2 = std::max(out.y2, b.y2);
  }
  return out;
}

}  // namespace hid
