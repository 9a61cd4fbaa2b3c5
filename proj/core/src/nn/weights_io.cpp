#include "facadeseg/nn/weights_io.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "facadeseg/version.hpp"

namespace fseg::nn {

using nlohmann::json;

namespace {

constexpr char kHeader[] = "FSEGW1\n";
constexpr std::size_t kHeaderLen = sizeof(kHeader) - 1;

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

float read_f32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

json open_manifest(std::istream& in, const std::string& path) {
  char header[kHeaderLen];
  in.read(header, kHeaderLen);
  if (!in || std::memcmp(header, kHeader, kHeaderLen) != 0)
    throw ValidationError(path + ": not a weights file (bad header)");
  std::uint64_t len = read_u64(in);
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw ValidationError(path + ": truncated manifest");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": manifest: " + e.what());
  }
}

}  // namespace

template <typename T>
void write_weights_file(const ParamStore<T>& params, const std::string& path,
                        const std::string& extra_json) {
  json extra;
  try {
    extra = json::parse(extra_json);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("weights extra document: ") + e.what());
  }

  json plist = json::array();
  for (const auto& p : params.params()) {
    const Shape& s = p.storage->value.shape;
    plist.push_back({{"name", p.name},
                     {"shape", {s.n, s.c, s.h, s.w}},
                     {"share_id", p.storage->share_id}});
  }
  json blist = json::array();
  for (const auto& [name, values] : params.buffers()) {
    json vals = json::array();
    for (T v : *values) vals.push_back(static_cast<double>(v));
    blist.push_back({{"name", name}, {"values", vals}});
  }
  json manifest{{"version", kVersion}, {"params", plist}, {"buffers", blist},
                {"extra", extra}};
  std::string text = manifest.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path);
  out.write(kHeader, kHeaderLen);
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  std::map<std::string, bool> written;
  for (const auto& p : params.params()) {
    if (written[p.storage->share_id]) continue;
    written[p.storage->share_id] = true;
    for (T v : p.storage->value.data) write_f32(out, static_cast<float>(v));
  }
  if (!out) throw RuntimeFailure("write failed for " + path);
}

template <typename T>
WeightsFile<T> read_weights_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  json manifest = open_manifest(in, path);

  WeightsFile<T> file;
  file.extra = manifest.value("extra", json::object()).dump();

  std::map<std::string, Tensor<T>> by_share_id;
  for (const auto& pj : manifest.value("params", json::array())) {
    typename WeightsFile<T>::Entry entry;
    entry.name = pj.at("name").get<std::string>();
    auto sh = pj.at("shape");
    if (!sh.is_array() || sh.size() != 4)
      throw ValidationError(path + ": parameter '" + entry.name + "' has a malformed shape");
    entry.shape = Shape{sh[0].get<int>(), sh[1].get<int>(), sh[2].get<int>(), sh[3].get<int>()};
    entry.share_id = pj.value("share_id", entry.name);

    auto it = by_share_id.find(entry.share_id);
    if (it == by_share_id.end()) {
      Tensor<T> t(entry.shape);
      for (auto& v : t.data) v = static_cast<T>(read_f32(in));
      if (!in) throw ValidationError(path + ": blob truncated at parameter '" + entry.name + "'");
      it = by_share_id.emplace(entry.share_id, std::move(t)).first;
    } else if (!(it->second.shape == entry.shape)) {
      throw ValidationError(path + ": share_id '" + entry.share_id +
                            "' appears with conflicting shapes");
    }
    entry.value = it->second;
    file.entries.push_back(std::move(entry));
  }
  for (const auto& bj : manifest.value("buffers", json::array())) {
    std::vector<T> vals;
    for (const auto& v : bj.at("values")) vals.push_back(static_cast<T>(v.get<double>()));
    file.buffers.emplace_back(bj.at("name").get<std::string>(), std::move(vals));
  }
  return file;
}

std::string read_weights_extra(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return open_manifest(in, path).value("extra", json::object()).dump();
}

template <typename T>
void apply_weights(ParamStore<T>& params, const WeightsFile<T>& file) {
  std::map<std::string, const typename WeightsFile<T>::Entry*> by_name;
  for (const auto& e : file.entries) by_name[e.name] = &e;

  for (auto& p : params.params()) {
    auto it = by_name.find(p.name);
    if (it == by_name.end())
      throw ValidationError("weights file has no parameter '" + p.name + "'");
    if (!(it->second->shape == p.storage->value.shape))
      throw ValidationError("parameter '" + p.name + "': file shape " +
                            it->second->shape.str() + " vs expected " +
                            p.storage->value.shape.str());
    p.storage->value = it->second->value;
  }
  for (const auto& [name, dst] : params.buffers()) {
    bool found = false;
    for (const auto& [bname, values] : file.buffers) {
      if (bname != name) continue;
      if (values.size() != dst->size())
        throw ValidationError("buffer '" + name + "': file length " +
                              std::to_string(values.size()) + " vs expected " +
                              std::to_string(dst->size()));
      *dst = values;
      found = true;
      break;
    }
    if (!found) throw ValidationError("weights file has no buffer '" + name + "'");
  }
}

template void write_weights_file<float>(const ParamStore<float>&, const std::string&,
                                        const std::string&);
template void write_weights_file<double>(const ParamStore<double>&, const std::string&,
                                         const std::string&);
template WeightsFile<float> read_weights_file<float>(const std::string&);
template WeightsFile<double> read_weights_file<double>(const std::string&);
template void apply_weights<float>(ParamStore<float>&, const WeightsFile<float>&);
template void apply_weights<double>(ParamStore<double>&, const WeightsFile<double>&);

}  // namespace fseg::nn
