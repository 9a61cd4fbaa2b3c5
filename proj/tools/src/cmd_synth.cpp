#include <filesystem>
#include <iostream>

#include "facadeseg/data/annotations.hpp"
#include "facadeseg/image_io.hpp"
#include "tool_common.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

int run_synth(const PipelineConfig& config, int count, const std::string& out) {
  if (count < 1) throw ValidationError("synth needs a positive image count");
  fs::create_directories(out);

  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%04d", i);
    // Per-image seeds decouple samples, so corpus prefixes are stable.
    data::SynthSample sample =
        data::synth_facade(config.synth, name, config.seed * 1000003u + i);
    write_png_rgb((fs::path(out) / (std::string(name) + ".png")).string(), sample.image);
    data::save_annotations(sample.annotations,
                           (fs::path(out) / (std::string(name) + ".json")).string());
  }

  ordered_json details;
  details["count"] = count;
  details["width"] = config.synth.width;
  details["height"] = config.synth.height;
  details["decoy_stripes"] = config.synth.decoy_stripes;
  write_run_record(out, "synth", config, details);
  std::cout << "synth: wrote " << count << " facades to " << out << "\n";
  return 0;
}

}  // namespace fseg::tool
