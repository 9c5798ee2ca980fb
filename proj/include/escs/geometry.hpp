/**
 * @file geometry.hpp
 * @brief Planar coordinates (meters) and axis-aligned regions.
 */
#pragma once

#include <algorithm>
#include <cmath>

namespace escs {

/// A point in a projected planar frame; x grows east, y grows north, both in meters.
struct GeoPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline double distance(GeoPoint a, GeoPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Closed axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    [[nodiscard]] double width() const { return xmax - xmin; }
    [[nodiscard]] double height() const { return ymax - ymin; }
    [[nodiscard]] double area() const { return width() * height(); }
    [[nodiscard]] bool valid() const {
        return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) &&
               std::isfinite(ymax) && xmin < xmax && ymin < ymax;
    }
    [[nodiscard]] bool contains(GeoPoint p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    /// Nearest point of the rectangle to `p`.
    [[nodiscard]] GeoPoint clamp(GeoPoint p) const {
        return {std::clamp(p.x, xmin, xmax), std::clamp(p.y, ymin, ymax)};
    }
    [[nodiscard]] GeoPoint center() const { return {(xmin + xmax) / 2.0, (ymin + ymax) / 2.0}; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace escs
