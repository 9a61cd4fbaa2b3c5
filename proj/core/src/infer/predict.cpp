#include "facadeseg/infer/predict.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "facadeseg/image_io.hpp"
#include "facadeseg/infer/tiling.hpp"

namespace fseg::infer {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kPlaneNames[4] = {"neg", "unk", "pos", "edg"};

struct Scaled {
  RgbImage image;
  TileLayout layout;
  double scale = 1.0;
};

template <typename T>
Scaled scale_and_plan(const arch::Network<T>& net, const RgbImage& image) {
  if (image.width < 1 || image.height < 1) throw ValidationError("empty image");
  const arch::ArchSpec& spec = net.spec();
  int out_h = spec.input_h;
  int out_w = std::max(
      1, static_cast<int>(std::llround(static_cast<double>(image.width) * out_h / image.height)));
  Scaled s;
  s.scale = static_cast<double>(out_h) / image.height;
  s.image = resize_bilinear(image, out_w, out_h);
  s.layout = plan_tiles(out_w, spec.input_w, 16);
  return s;
}

template <typename T>
nn::Tensor<T> tile_tensor(const RgbImage& scaled, int offset, int tile_w) {
  nn::Tensor<T> input(nn::Shape{1, 3, scaled.height, tile_w});
  for (int y = 0; y < scaled.height; ++y)
    for (int j = 0; j < tile_w; ++j) {
      int sx = reflect_index(offset + j, scaled.width);
      const std::uint8_t* px = scaled.pixel(sx, y);
      for (int c = 0; c < 3; ++c) input.at(0, c, y, j) = static_cast<T>(px[c]) / T(255);
    }
  return input;
}

// One tile channel of the forward output as a plane the merger accepts.
template <typename T>
FloatPlane tensor_channel(const nn::Tensor<T>& t, int channel, int height, int tile_w) {
  FloatPlane plane(tile_w, height);
  for (int y = 0; y < height; ++y)
    for (int j = 0; j < tile_w; ++j)
      plane.at(j, y) = static_cast<float>(t.at(0, channel, y, j));
  return plane;
}

// Softmax tuples drift from summing to 1 after averaging; renormalize each
// pixel's tuple in place. An all-zero tuple is left alone.
void rescale_tuples(std::vector<FloatPlane>& planes) {
  int W = planes[0].width, H = planes[0].height;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      double total = 0;
      for (auto& p : planes) total += p.at(x, y);
      if (total > 0)
        for (auto& p : planes) p.at(x, y) = static_cast<float>(p.at(x, y) / total);
    }
}

}  // namespace

template <typename T>
ProbabilityMaps predict_image(arch::Network<T>& net, const RgbImage& image) {
  const arch::ArchSpec& spec = net.spec();
  if (spec.classes.empty()) throw ValidationError("network vocabulary is empty");
  if (spec.head == arch::HeadKind::kBaseline)
    throw ValidationError("joint-label networks predict with predict_joint");

  Scaled s = scale_and_plan(net, image);
  int W = s.image.width, H = s.image.height;
  std::size_t K = spec.classes.size();

  std::vector<TileMerger> merge(K, TileMerger(s.layout, H, 4));
  for (int offset : s.layout.offsets) {
    nn::Tensor<T> input = tile_tensor<T>(s.image, offset, s.layout.tile_w);
    arch::ForwardResult<T> fwd = net.forward(input, false);
    const auto& heads = fwd.stages.back();
    for (std::size_t k = 0; k < K; ++k) {
      const auto& probs = fwd.tape->value(heads[k]);
      for (int v = 0; v < 4; ++v)
        merge[k].add_tile(v, offset, tensor_channel(probs, v, H, s.layout.tile_w));
      merge[k].note_cover(offset);
    }
  }

  ProbabilityMaps maps;
  maps.vocab = spec.classes;
  maps.width = W;
  maps.height = H;
  maps.original_width = image.width;
  maps.original_height = image.height;
  maps.scale = s.scale;
  maps.classes.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<FloatPlane> planes = merge[k].average();
    rescale_tuples(planes);
    for (int v = 0; v < 4; ++v) maps.classes[k].raw[v] = std::move(planes[v]);
  }
  return maps;
}

void renormalize_pos_neg(ProbabilityMaps& maps) {
  for (auto& cls : maps.classes) {
    int W = maps.width, H = maps.height;
    cls.pos = FloatPlane(W, H);
    cls.neg = FloatPlane(W, H);
    cls.degenerate = BoolPlane(W, H, 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        float p = cls.raw[2].at(x, y), n = cls.raw[0].at(x, y);
        float total = p + n;
        if (total > 0) {
          cls.pos.at(x, y) = p / total;
          cls.neg.at(x, y) = n / total;
        } else {
          cls.pos.at(x, y) = 0.5f;
          cls.neg.at(x, y) = 0.5f;
          cls.degenerate.at(x, y) = 1;
        }
      }
  }
}

template <typename T>
JointMaps predict_joint(arch::Network<T>& net, const RgbImage& image) {
  const arch::ArchSpec& spec = net.spec();
  if (spec.classes.empty()) throw ValidationError("network vocabulary is empty");
  if (spec.head != arch::HeadKind::kBaseline)
    throw ValidationError("per-class networks predict with predict_image");

  Scaled s = scale_and_plan(net, image);
  int W = s.image.width, H = s.image.height;
  int L = static_cast<int>(spec.classes.size()) + 1;

  TileMerger merge(s.layout, H, L);
  for (int offset : s.layout.offsets) {
    nn::Tensor<T> input = tile_tensor<T>(s.image, offset, s.layout.tile_w);
    arch::ForwardResult<T> fwd = net.forward(input, false);
    const auto& probs = fwd.tape->value(fwd.joint);
    for (int l = 0; l < L; ++l)
      merge.add_tile(l, offset, tensor_channel(probs, l, H, s.layout.tile_w));
    merge.note_cover(offset);
  }
  std::vector<FloatPlane> planes = merge.average();
  rescale_tuples(planes);

  JointMaps maps;
  maps.labels.push_back("background");
  maps.labels.insert(maps.labels.end(), spec.classes.begin(), spec.classes.end());
  maps.width = W;
  maps.height = H;
  maps.original_width = image.width;
  maps.original_height = image.height;
  maps.scale = s.scale;
  maps.argmax = GrayImage(W, H, 0);
  maps.probs = std::move(planes);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      int best = 0;
      for (int l = 1; l < L; ++l)
        if (maps.probs[l].at(x, y) > maps.probs[best].at(x, y)) best = l;
      maps.argmax.at(x, y) = static_cast<std::uint8_t>(best);
    }
  return maps;
}

GrayImage composite_single_label(const ProbabilityMaps& maps,
                                 const std::vector<std::string>& order) {
  if (order.empty()) throw ValidationError("composite order is empty");
  std::vector<std::size_t> indices;
  for (const auto& name : order) {
    auto it = std::find(maps.vocab.begin(), maps.vocab.end(), name);
    if (it == maps.vocab.end())
      throw ValidationError("composite class '" + name + "' is not in the vocabulary");
    std::size_t k = static_cast<std::size_t>(it - maps.vocab.begin());
    if (std::find(indices.begin(), indices.end(), k) != indices.end())
      throw ValidationError("composite class '" + name + "' appears twice");
    if (maps.classes[k].pos.width != maps.width)
      throw ValidationError("probability maps are not renormalized");
    indices.push_back(k);
  }

  GrayImage labels(maps.width, maps.height, 0);
  for (std::size_t i = 1; i < indices.size(); ++i) {
    const FloatPlane& pos = maps.classes[indices[i]].pos;
    for (int y = 0; y < maps.height; ++y)
      for (int x = 0; x < maps.width; ++x)
        if (pos.at(x, y) > 0.5f) labels.at(x, y) = static_cast<std::uint8_t>(i);
  }
  return labels;
}

const std::vector<std::string>& ecp_composite_order() {
  static const std::vector<std::string> order = {"wall",    "roof",   "sky",  "shop",
                                                 "balcony", "window", "door", "chimney"};
  return order;
}

void save_probability_maps(const ProbabilityMaps& maps, const std::string& dir,
                           const std::string& stem) {
  if (maps.vocab.size() != maps.classes.size())
    throw ValidationError("probability maps disagree with their vocabulary");
  std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  bool renorm = !maps.classes.empty() && maps.classes[0].pos.width == maps.width;

  ordered_json header;
  header["width"] = maps.width;
  header["height"] = maps.height;
  header["original_width"] = maps.original_width;
  header["original_height"] = maps.original_height;
  header["scale"] = maps.scale;
  header["classes"] = maps.vocab;
  header["planes"] = {"neg", "unk", "pos", "edg"};
  header["renormalized"] = renorm;

  for (std::size_t k = 0; k < maps.classes.size(); ++k) {
    const std::string prefix = stem + "." + maps.vocab[k] + ".";
    for (int v = 0; v < 4; ++v)
      write_f32_blob((base / (prefix + kPlaneNames[v] + ".f32")).string(),
                     maps.classes[k].raw[v]);
    if (renorm) {
      write_f32_blob((base / (prefix + "posr.f32")).string(), maps.classes[k].pos);
      write_f32_blob((base / (prefix + "negr.f32")).string(), maps.classes[k].neg);
      FloatPlane flags(maps.width, maps.height);
      for (std::size_t i = 0; i < flags.px.size(); ++i)
        flags.px[i] = maps.classes[k].degenerate.px[i] ? 1.0f : 0.0f;
      write_f32_blob((base / (prefix + "flag.f32")).string(), flags);
    }
  }

  std::ofstream out(base / (stem + ".probmaps.json"), std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write probability-map header in '" + dir + "'");
  out << header.dump(2) << "\n";
}

ProbabilityMaps load_probability_maps(const std::string& dir, const std::string& stem) {
  std::filesystem::path base(dir);
  std::ifstream in(base / (stem + ".probmaps.json"), std::ios::binary);
  if (!in)
    throw RuntimeFailure("cannot open probability-map header '" +
                         (base / (stem + ".probmaps.json")).string() + "'");
  ordered_json header;
  try {
    header = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("probability-map header: ") + e.what());
  }

  ProbabilityMaps maps;
  try {
    maps.width = header.at("width").get<int>();
    maps.height = header.at("height").get<int>();
    maps.original_width = header.at("original_width").get<int>();
    maps.original_height = header.at("original_height").get<int>();
    maps.scale = header.at("scale").get<double>();
    maps.vocab = header.at("classes").get<std::vector<std::string>>();
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("probability-map header: ") + e.what());
  }
  if (maps.width < 1 || maps.height < 1 || maps.vocab.empty())
    throw ValidationError("probability-map header describes an empty result");
  bool renorm = header.value("renormalized", false);

  maps.classes.resize(maps.vocab.size());
  for (std::size_t k = 0; k < maps.vocab.size(); ++k) {
    const std::string prefix = stem + "." + maps.vocab[k] + ".";
    for (int v = 0; v < 4; ++v)
      maps.classes[k].raw[v] = read_f32_blob((base / (prefix + kPlaneNames[v] + ".f32")).string(),
                                             maps.width, maps.height);
    if (renorm) {
      maps.classes[k].pos =
          read_f32_blob((base / (prefix + "posr.f32")).string(), maps.width, maps.height);
      maps.classes[k].neg =
          read_f32_blob((base / (prefix + "negr.f32")).string(), maps.width, maps.height);
      FloatPlane flags =
          read_f32_blob((base / (prefix + "flag.f32")).string(), maps.width, maps.height);
      maps.classes[k].degenerate = BoolPlane(maps.width, maps.height, 0);
      for (std::size_t i = 0; i < flags.px.size(); ++i)
        maps.classes[k].degenerate.px[i] = flags.px[i] != 0.0f ? 1 : 0;
    }
  }
  return maps;
}

void save_label_image(const GrayImage& labels, const std::vector<std::string>& names,
                      const std::string& png_path) {
  if (names.empty()) throw ValidationError("label image needs at least one class name");
  if (names.size() > 256) throw ValidationError("palette PNG holds at most 256 labels");

  std::vector<std::array<std::uint8_t, 3>> palette;
  palette.push_back({64, 64, 64});
  for (std::size_t i = 1; i < names.size(); ++i) {
    // Golden-ratio hue walk keeps adjacent labels visually distinct.
    double h = std::fmod(0.61803398875 * static_cast<double>(i), 1.0) * 6.0;
    double f = h - std::floor(h);
    double v = 0.92, sat = 0.62;
    double p = v * (1 - sat), q = v * (1 - sat * f), t = v * (1 - sat * (1 - f));
    double r, g, b;
    switch (static_cast<int>(h) % 6) {
      case 0: r = v; g = t; b = p; break;
      case 1: r = q; g = v; b = p; break;
      case 2: r = p; g = v; b = t; break;
      case 3: r = p; g = q; b = v; break;
      case 4: r = t; g = p; b = v; break;
      default: r = v; g = p; b = q; break;
    }
    palette.push_back({clamp_u8(r * 255), clamp_u8(g * 255), clamp_u8(b * 255)});
  }
  write_png_palette(png_path, labels, palette);

  ordered_json legend;
  legend["classes"] = names;
  legend["palette"] = ordered_json::array();
  for (const auto& c : palette) legend["palette"].push_back({c[0], c[1], c[2]});
  std::filesystem::path legend_path(png_path);
  legend_path.replace_extension(".legend.json");
  std::ofstream out(legend_path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write legend '" + legend_path.string() + "'");
  out << legend.dump(2) << "\n";
}

template ProbabilityMaps predict_image<float>(arch::Network<float>&, const RgbImage&);
template ProbabilityMaps predict_image<double>(arch::Network<double>&, const RgbImage&);
template JointMaps predict_joint<float>(arch::Network<float>&, const RgbImage&);
template JointMaps predict_joint<double>(arch::Network<double>&, const RgbImage&);

}  // namespace fseg::infer
