// Ego-anchored bird's-eye-view occupancy rasterization with metric/pixel
// mapping, axis tick overlay, max-pooling, and PGM export.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "react/types.hpp"

namespace react {

struct GridSpec {
  int width{64};
  int height{64};
  double scale{1.25};  // metres per pixel
  int anchor_u{32};    // ego pixel column
  int anchor_v{32};    // ego pixel row

  bool valid() const {
    return width > 0 && height > 0 && scale > 0.0 && anchor_u >= 0 && anchor_u < width &&
           anchor_v >= 0 && anchor_v < height;
  }
};

inline bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.width == b.width && a.height == b.height && a.scale == b.scale &&
         a.anchor_u == b.anchor_u && a.anchor_v == b.anchor_v;
}

// Single-channel occupancy map, row-major, values in [0, 1].
struct BevMap {
  GridSpec grid;
  std::vector<double> cells;
  double timestamp{0.0};

  explicit BevMap(const GridSpec& g = GridSpec{}, double ts = 0.0)
      : grid(g), cells(static_cast<std::size_t>(g.width) * g.height, 0.0), timestamp(ts) {}

  double at(int u, int v) const { return cells[static_cast<std::size_t>(v) * grid.width + u]; }
  double& at(int u, int v) { return cells[static_cast<std::size_t>(v) * grid.width + u]; }
};

struct OverlaySpec {
  double tick_spacing_m{5.0};
  double stroke_value{1.0};
  int stroke_len_u{-1};  // max |u - anchor_u| covered by ticks; -1 = full extent
  int stroke_len_v{-1};
};

// Ego-centred metric coordinates of a pixel: [x; y] = scale * [u-u0; v-v0].
inline Vec2 pixel_to_metric(int u, int v, const GridSpec& grid) {
  return {grid.scale * (u - grid.anchor_u), grid.scale * (v - grid.anchor_v)};
}

struct PixelCoord {
  int u{0};
  int v{0};
  bool in_bounds{true};
};

// Nearest pixel for an ego-centred metric point; flags out-of-grid results.
inline PixelCoord metric_to_pixel(double x, double y, const GridSpec& grid) {
  PixelCoord p;
  p.u = static_cast<int>(std::lround(x / grid.scale)) + grid.anchor_u;
  p.v = static_cast<int>(std::lround(y / grid.scale)) + grid.anchor_v;
  p.in_bounds = p.u >= 0 && p.u < grid.width && p.v >= 0 && p.v < grid.height;
  return p;
}

namespace detail {

constexpr double kVehicleLengthM = 4.5;
constexpr double kVehicleWidthM = 2.0;
constexpr double kHazardRadiusM = 1.0;

// Marks cells whose centre lies inside the oriented rectangle.
inline void fill_footprint(BevMap& bev, const Vec2& center_rel, double yaw, double length,
                           double width) {
  const GridSpec& g = bev.grid;
  const double half_diag = 0.5 * std::sqrt(length * length + width * width);
  const double cu = center_rel.x / g.scale + g.anchor_u;
  const double cv = center_rel.y / g.scale + g.anchor_v;
  const double margin = half_diag / g.scale + 1.0;
  const int u_lo = std::max(0, static_cast<int>(std::floor(cu - margin)));
  const int u_hi = std::min(g.width - 1, static_cast<int>(std::ceil(cu + margin)));
  const int v_lo = std::max(0, static_cast<int>(std::floor(cv - margin)));
  const int v_hi = std::min(g.height - 1, static_cast<int>(std::ceil(cv + margin)));
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  for (int v = v_lo; v <= v_hi; ++v) {
    for (int u = u_lo; u <= u_hi; ++u) {
      const Vec2 cell = pixel_to_metric(u, v, g);
      const double dx = cell.x - center_rel.x;
      const double dy = cell.y - center_rel.y;
      const double lon = dx * c + dy * s;
      const double lat = -dx * s + dy * c;
      if (std::abs(lon) <= 0.5 * length && std::abs(lat) <= 0.5 * width) {
        bev.at(u, v) = 1.0;
      }
    }
  }
}

inline void fill_disc(BevMap& bev, const Vec2& center_rel, double radius) {
  const GridSpec& g = bev.grid;
  const double cu = center_rel.x / g.scale + g.anchor_u;
  const double cv = center_rel.y / g.scale + g.anchor_v;
  const double margin = radius / g.scale + 1.0;
  const int u_lo = std::max(0, static_cast<int>(std::floor(cu - margin)));
  const int u_hi = std::min(g.width - 1, static_cast<int>(std::ceil(cu + margin)));
  const int v_lo = std::max(0, static_cast<int>(std::floor(cv - margin)));
  const int v_hi = std::min(g.height - 1, static_cast<int>(std::ceil(cv + margin)));
  for (int v = v_lo; v <= v_hi; ++v) {
    for (int u = u_lo; u <= u_hi; ++u) {
      const Vec2 cell = pixel_to_metric(u, v, g);
      if (euclidean(cell, center_rel) <= radius) {
        bev.at(u, v) = 1.0;
      }
    }
  }
}

}  // namespace detail

// Renders one frame: every agent as an oriented 4.5 m x 2.0 m box at its
// ego-relative position, plus an optional hazard disc of radius 1 m.
// Footprints outside the grid are clipped silently.
inline BevMap rasterize(const std::vector<VehicleState>& frame, const std::optional<Vec2>& hazard,
                        const VehicleState& ego, const GridSpec& grid, double timestamp) {
  if (!grid.valid()) {
    throw std::invalid_argument("rasterize: invalid grid spec");
  }
  BevMap bev(grid, timestamp);
  const Vec2 ego_pos = ego.pos();
  for (const VehicleState& s : frame) {
    detail::fill_footprint(bev, s.pos() - ego_pos, s.yaw, detail::kVehicleLengthM,
                           detail::kVehicleWidthM);
  }
  if (hazard) {
    detail::fill_disc(bev, *hazard - ego_pos, detail::kHazardRadiusM);
  }
  return bev;
}

// Writes tick marks along the two axis lines through the anchor; every
// pixel outside the stroked set is left untouched.
inline BevMap overlay_axes(const BevMap& bev, const OverlaySpec& spec) {
  if (!(spec.tick_spacing_m > 0.0)) {
    throw std::invalid_argument("overlay_axes: tick spacing must be positive");
  }
  const GridSpec& g = bev.grid;
  const int tick_px = std::max(1, static_cast<int>(std::lround(spec.tick_spacing_m / g.scale)));
  const int len_u = spec.stroke_len_u < 0 ? g.width : spec.stroke_len_u;
  const int len_v = spec.stroke_len_v < 0 ? g.height : spec.stroke_len_v;
  BevMap out = bev;
  for (int u = 0; u < g.width; ++u) {
    const int d = u - g.anchor_u;
    if (d % tick_px == 0 && std::abs(d) <= len_u) {
      out.at(u, g.anchor_v) = spec.stroke_value;
    }
  }
  for (int v = 0; v < g.height; ++v) {
    const int d = v - g.anchor_v;
    if (d % tick_px == 0 && std::abs(d) <= len_v) {
      out.at(g.anchor_u, v) = spec.stroke_value;
    }
  }
  return out;
}

// Max-pool over factor x factor windows; the scale grows by factor and the
// anchor shrinks accordingly.
inline BevMap pool(const BevMap& bev, int factor) {
  if (factor < 1) {
    throw std::invalid_argument("pool: factor must be >= 1");
  }
  const GridSpec& g = bev.grid;
  if (g.width % factor != 0 || g.height % factor != 0) {
    throw std::invalid_argument("pool: factor must divide grid dimensions");
  }
  if (factor == 1) {
    return bev;
  }
  GridSpec pooled;
  pooled.width = g.width / factor;
  pooled.height = g.height / factor;
  pooled.scale = g.scale * factor;
  pooled.anchor_u = g.anchor_u / factor;
  pooled.anchor_v = g.anchor_v / factor;
  BevMap out(pooled, bev.timestamp);
  for (int v = 0; v < pooled.height; ++v) {
    for (int u = 0; u < pooled.width; ++u) {
      double m = 0.0;
      for (int dv = 0; dv < factor; ++dv) {
        for (int du = 0; du < factor; ++du) {
          m = std::max(m, bev.at(u * factor + du, v * factor + dv));
        }
      }
      out.at(u, v) = m;
    }
  }
  return out;
}

// 8-bit binary PGM (P5) with occupancy scaled to 0-255.
inline std::string encode_pgm(const BevMap& bev) {
  std::string out = "P5\n" + std::to_string(bev.grid.width) + " " +
                    std::to_string(bev.grid.height) + "\n255\n";
  out.reserve(out.size() + bev.cells.size());
  for (double c : bev.cells) {
    const double clamped = std::clamp(c, 0.0, 1.0);
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(clamped * 255.0))));
  }
  return out;
}

inline void write_pgm(const BevMap& bev, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("write_pgm: cannot open " + path);
  }
  const std::string data = encode_pgm(bev);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) {
    throw std::runtime_error("write_pgm: write failed for " + path);
  }
}

}  // namespace react
