#include "facadeseg/data/synth.hpp"

#include <algorithm>
#include <cmath>

namespace fseg::data {

namespace {

struct Rect {
  int x0, y0, x1, y1;  // inclusive pixel coordinates
};

std::vector<geo::Vec2> rect_ring(const Rect& r) {
  double x0 = r.x0, y0 = r.y0, x1 = r.x1 + 1.0, y1 = r.y1 + 1.0;
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

struct Color {
  int r, g, b;
};

void paint(RgbImage& img, const Rect& r, const Color& c, double opacity = 1.0) {
  int x0 = std::max(0, r.x0), x1 = std::min(img.width - 1, r.x1);
  int y0 = std::max(0, r.y0), y1 = std::min(img.height - 1, r.y1);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      std::uint8_t* px = img.pixel(x, y);
      px[0] = clamp_u8(opacity * c.r + (1 - opacity) * px[0]);
      px[1] = clamp_u8(opacity * c.g + (1 - opacity) * px[1]);
      px[2] = clamp_u8(opacity * c.b + (1 - opacity) * px[2]);
    }
}

int chebyshev_gap(const Rect& a, const Rect& b) {
  int dx = std::max({a.x0 - b.x1, b.x0 - a.x1, 0});
  int dy = std::max({a.y0 - b.y1, b.y0 - a.y1, 0});
  return std::max(dx, dy);
}

}  // namespace

const std::vector<std::string>& synth_vocab() {
  static const std::vector<std::string> vocab = {"facade", "window", "sill", "balcony",
                                                 "door"};
  return vocab;
}

SynthSample synth_facade(const SynthConfig& config, const std::string& image_id,
                         std::uint64_t seed) {
  if (config.width < 16 || config.height < 16)
    throw ValidationError("synthetic facades need at least 16x16 pixels");
  if (config.min_cols < 1 || config.min_cols > config.max_cols || config.min_rows < 1 ||
      config.min_rows > config.max_rows)
    throw ValidationError("window grid bounds are inconsistent");
  if (config.mpp <= 0) throw ValidationError("mpp must be positive");
  if (config.decoy_stripes < 0) throw ValidationError("decoy count must be >= 0");

  Rng rng(seed);
  int W = config.width, H = config.height;

  Color wall{rng.uniform_int(170, 220), 0, 0};
  wall.g = wall.r - rng.uniform_int(10, 30);
  wall.b = wall.g - rng.uniform_int(10, 40);
  Color window{rng.uniform_int(30, 60), rng.uniform_int(35, 65), rng.uniform_int(70, 110)};
  int sill_base = rng.uniform_int(195, 215);
  Color sill{sill_base, sill_base, std::min(255, sill_base + rng.uniform_int(0, 8))};
  int balc_base = rng.uniform_int(70, 95);
  Color balcony{balc_base, balc_base, balc_base};
  Color door{rng.uniform_int(95, 130), 0, 0};
  door.g = static_cast<int>(door.r * 0.55);
  door.b = static_cast<int>(door.r * 0.3);

  SynthSample sample;
  sample.image = RgbImage(W, H);
  paint(sample.image, {0, 0, W - 1, H - 1}, wall);
  sample.annotations.image_id = image_id;
  sample.annotations.width = W;
  sample.annotations.height = H;
  sample.annotations.mpp = config.mpp;
  sample.annotations.shapes.push_back({"facade", rect_ring({0, 0, W - 1, H - 1})});

  int mx = std::max(3, W / 10);
  int my = std::max(3, H / 12);
  int door_zone = config.doors ? std::max(10, H / 5) : my;
  int grid_w = W - 2 * mx, grid_h = H - my - door_zone;
  if (grid_w < 8 || grid_h < 8) throw ValidationError("canvas too small for a window grid");

  int cols = rng.uniform_int(config.min_cols, config.max_cols);
  int rows = rng.uniform_int(config.min_rows, config.max_rows);
  int cell_w = grid_w / cols, cell_h = grid_h / rows;
  if (cell_w < 6 || cell_h < 6) throw ValidationError("window grid too dense for the canvas");

  std::vector<Rect> windows;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int ww = std::max(4, static_cast<int>(cell_w * rng.uniform(0.45, 0.62)));
      int wh = std::max(4, static_cast<int>(cell_h * rng.uniform(0.45, 0.62)));
      int cx = mx + c * cell_w, cy = my + r * cell_h;
      int x0 = cx + rng.uniform_int(1, std::max(1, cell_w - ww - 1));
      int y0 = cy + rng.uniform_int(1, std::max(1, cell_h - wh - 1));
      windows.push_back({x0, y0, std::min(x0 + ww - 1, W - 2), std::min(y0 + wh - 1, H - 2)});
    }

  std::vector<Rect> sills, balconies;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const Rect& w = windows[i];
    if (config.sills && rng.uniform() < config.sill_prob) {
      int sh = rng.uniform_int(5, 6);
      sills.push_back({std::max(0, w.x0 - 1), w.y1 + 1, std::min(W - 1, w.x1 + 1),
                       std::min(H - 1, w.y1 + sh)});
    }
    if (config.balconies && (i == 0 || rng.uniform() < config.balcony_prob)) {
      int overlap = std::max(3, (w.y1 - w.y0 + 1) / 3);
      int below = std::max(3, (w.y1 - w.y0 + 1) / 3);
      balconies.push_back({std::max(0, w.x0 - 2), w.y1 - overlap + 1,
                           std::min(W - 1, w.x1 + 2), std::min(H - 1, w.y1 + below)});
    }
  }

  std::vector<Rect> doors;
  if (config.doors) {
    int dh = rng.uniform_int(std::max(6, door_zone * 3 / 5), door_zone - 2);
    int dw = std::max(4, W / 9);
    int dx = rng.uniform_int(mx, std::max(mx, W - mx - dw));
    doors.push_back({dx, H - dh, std::min(dx + dw - 1, W - 2), H - 1});
  }

  std::vector<Rect> decoys;
  std::vector<Rect> occupied = windows;
  occupied.insert(occupied.end(), sills.begin(), sills.end());
  occupied.insert(occupied.end(), balconies.begin(), balconies.end());
  occupied.insert(occupied.end(), doors.begin(), doors.end());
  for (int d = 0; d < config.decoy_stripes; ++d) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      int dw = rng.uniform_int(std::max(4, W / 8), std::max(5, W / 5));
      int dh = rng.uniform_int(5, 6);
      int x0 = rng.uniform_int(1, std::max(1, W - dw - 2));
      int y0 = rng.uniform_int(1, std::max(1, H - dh - 2));
      Rect cand{x0, y0, x0 + dw - 1, y0 + dh - 1};
      bool window_clear = true;
      for (const Rect& w : windows)
        if (chebyshev_gap(cand, w) < config.decoy_clearance_px) window_clear = false;
      bool feature_clear = true;
      for (const Rect& o : occupied)
        if (chebyshev_gap(cand, o) < 2) feature_clear = false;
      if (window_clear && feature_clear) {
        decoys.push_back(cand);
        occupied.push_back(cand);
        break;
      }
    }
  }

  for (const Rect& r : windows) paint(sample.image, r, window);
  for (const Rect& r : sills) paint(sample.image, r, sill);
  // Balconies stay translucent so the covered window bottom remains visible.
  for (const Rect& r : balconies) paint(sample.image, r, balcony, 0.55);
  for (const Rect& r : doors) paint(sample.image, r, door);
  for (const Rect& r : decoys) paint(sample.image, r, sill);

  for (const Rect& r : windows) sample.annotations.shapes.push_back({"window", rect_ring(r)});
  for (const Rect& r : sills) sample.annotations.shapes.push_back({"sill", rect_ring(r)});
  for (const Rect& r : balconies)
    sample.annotations.shapes.push_back({"balcony", rect_ring(r)});
  for (const Rect& r : doors) sample.annotations.shapes.push_back({"door", rect_ring(r)});

  if (config.noise > 0) {
    for (std::uint8_t& v : sample.image.data)
      v = clamp_u8(v + rng.uniform(-config.noise, config.noise));
  }
  return sample;
}

}  // namespace fseg::data
