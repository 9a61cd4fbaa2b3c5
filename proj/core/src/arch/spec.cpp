#include "facadeseg/arch/spec.hpp"

#include <json.hpp>

#include "facadeseg/common.hpp"

namespace fseg::arch {

using nlohmann::json;

std::string head_name(HeadKind head) {
  switch (head) {
    case HeadKind::kBaseline: return "baseline";
    case HeadKind::kMultihead: return "multihead";
    case HeadKind::kSeparable: return "separable";
    case HeadKind::kCompatibility: return "compatibility";
  }
  throw ValidationError("unknown head kind");
}

HeadKind head_from_name(const std::string& name) {
  if (name == "baseline") return HeadKind::kBaseline;
  if (name == "multihead") return HeadKind::kMultihead;
  if (name == "separable") return HeadKind::kSeparable;
  if (name == "compatibility") return HeadKind::kCompatibility;
  throw ValidationError("unknown head '" + name +
                        "' (expected baseline, multihead, separable, or compatibility)");
}

void validate(const ArchSpec& spec) {
  if (spec.encoder_blocks.empty()) throw ValidationError("spec needs at least one encoder block");
  for (const auto& b : spec.encoder_blocks)
    if (b.convs < 1 || b.channels < 1)
      throw ValidationError("encoder block needs convs >= 1 and channels >= 1");
  int div = 1 << spec.encoder_blocks.size();
  if (spec.input_h % div != 0 || spec.input_w % div != 0)
    throw ValidationError("input " + std::to_string(spec.input_h) + "x" +
                          std::to_string(spec.input_w) + " not divisible by 2^" +
                          std::to_string(spec.encoder_blocks.size()));
  if (spec.classes.empty()) throw ValidationError("class vocabulary must be non-empty");
  if (spec.head == HeadKind::kCompatibility && spec.repeats < 1)
    throw ValidationError("compatibility repeats must be >= 1");
}

std::vector<std::string> cmp_vocab() {
  return {"facade", "molding", "cornice", "pillar", "window", "door",
          "sill",   "blind",   "balcony", "shop",   "deco"};
}

std::vector<std::string> ecp_vocab() {
  auto v = cmp_vocab();
  v.insert(v.end(), {"sky", "roof", "chimney", "facade-composite"});
  return v;
}

ArchSpec toy_spec(HeadKind head, std::vector<std::string> classes) {
  ArchSpec spec;
  spec.encoder_blocks = {{2, 16}, {2, 32}};
  spec.input_h = spec.input_w = 64;
  spec.classes = std::move(classes);
  spec.head = head;
  return spec;
}

ArchSpec small_spec(HeadKind head, std::vector<std::string> classes) {
  ArchSpec spec;
  spec.encoder_blocks = {{2, 32}, {2, 64}, {3, 128}};
  spec.input_h = spec.input_w = 128;
  spec.classes = std::move(classes);
  spec.head = head;
  return spec;
}

ArchSpec paper_spec(HeadKind head, std::vector<std::string> classes) {
  ArchSpec spec;
  spec.encoder_blocks = {{2, 64}, {2, 128}, {3, 256}, {3, 512}, {3, 512}};
  spec.input_h = spec.input_w = 512;
  spec.classes = std::move(classes);
  spec.head = head;
  return spec;
}

ArchSpec preset(const std::string& name, HeadKind head, std::vector<std::string> classes) {
  if (name == "toy") return toy_spec(head, std::move(classes));
  if (name == "small") return small_spec(head, std::move(classes));
  if (name == "paper") return paper_spec(head, std::move(classes));
  throw ValidationError("unknown preset '" + name + "' (expected toy, small, or paper)");
}

std::string to_json(const ArchSpec& spec) {
  json blocks = json::array();
  for (const auto& b : spec.encoder_blocks)
    blocks.push_back({{"convs", b.convs}, {"channels", b.channels}});
  json j{{"encoder_blocks", blocks},
         {"input_h", spec.input_h},
         {"input_w", spec.input_w},
         {"classes", spec.classes},
         {"head", head_name(spec.head)},
         {"repeats", spec.repeats},
         {"leaky_slope", spec.leaky_slope}};
  return j.dump();
}

ArchSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("architecture json: ") + e.what());
  }
  ArchSpec spec;
  spec.encoder_blocks.clear();
  for (const auto& b : j.at("encoder_blocks"))
    spec.encoder_blocks.push_back({b.at("convs").get<int>(), b.at("channels").get<int>()});
  spec.input_h = j.at("input_h").get<int>();
  spec.input_w = j.at("input_w").get<int>();
  spec.classes = j.at("classes").get<std::vector<std::string>>();
  spec.head = head_from_name(j.at("head").get<std::string>());
  spec.repeats = j.value("repeats", 2);
  spec.leaky_slope = j.value("leaky_slope", 0.01);
  validate(spec);
  return spec;
}

}  // namespace fseg::arch
