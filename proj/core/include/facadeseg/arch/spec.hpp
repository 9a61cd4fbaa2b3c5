#pragma once

#include <string>
#include <vector>

namespace fseg::arch {

enum class HeadKind { kBaseline, kMultihead, kSeparable, kCompatibility };

std::string head_name(HeadKind head);
HeadKind head_from_name(const std::string& name);

struct EncoderBlock {
  int convs = 2;
  int channels = 64;
};

// Encoder-decoder description. Each encoder block is `convs` 3x3 convolutions
// at `channels` width followed by a 2x2 max-pool; the decoder mirrors the
// blocks with max-unpooling. Input sides must divide by 2^blocks.
struct ArchSpec {
  std::vector<EncoderBlock> encoder_blocks;
  int input_h = 512;
  int input_w = 512;
  std::vector<std::string> classes;
  HeadKind head = HeadKind::kMultihead;
  int repeats = 2;  // compatibility stages after the base prediction
  double leaky_slope = 0.01;
};

void validate(const ArchSpec& spec);

// The 11 element classes of the CMP annotation set, in canonical order.
std::vector<std::string> cmp_vocab();
// CMP plus the 4 extension labels used for ECP-format output.
std::vector<std::string> ecp_vocab();

// Desk-scale presets. `paper` mirrors the VGG16 encoder geometry.
ArchSpec toy_spec(HeadKind head, std::vector<std::string> classes = cmp_vocab());
ArchSpec small_spec(HeadKind head, std::vector<std::string> classes = cmp_vocab());
ArchSpec paper_spec(HeadKind head, std::vector<std::string> classes = cmp_vocab());
ArchSpec preset(const std::string& name, HeadKind head,
                std::vector<std::string> classes = cmp_vocab());

std::string to_json(const ArchSpec& spec);
ArchSpec spec_from_json(const std::string& text);

}  // namespace fseg::arch
