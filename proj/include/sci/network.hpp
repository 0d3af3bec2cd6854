#pragma once

#include "tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sci {

enum class LayerKind : std::uint8_t
{
  Conv2d = 1,
  Affine = 2,
  Relu = 3,
  SkipAdd = 4,
};

std::string_view to_string(LayerKind kind);

// One layer of a desk-scale denoiser. Conv weights are [out][in][k][k]
// cross-correlation kernels with "same" zero padding; affine weights are
// [out][in] over the row-major (channel, x, y) flattening of the activation.
// A skip-add adds the output of layer `source` (or the network input when
// source < 0) to the current activation.
struct Layer
{
  std::string name;
  LayerKind   kind = LayerKind::Relu;

  std::uint32_t in_channels = 0;
  std::uint32_t out_channels = 0;
  std::uint32_t kernel = 0;
  std::uint32_t stride = 1;

  std::uint32_t in_features = 0;
  std::uint32_t out_features = 0;

  std::int32_t source = -1;

  std::vector<float> weights;
  std::vector<float> bias;

  static Layer conv2d(std::string name, std::uint32_t in, std::uint32_t out, std::uint32_t kernel);
  static Layer affine(std::string name, std::uint32_t in, std::uint32_t out);
  static Layer relu(std::string name);
  static Layer skip_add(std::string name, std::int32_t source);
};

struct NetworkWeights
{
  std::vector<Layer> layers;
  std::uint8_t       stage = 0;

  // Walks the shape chain for an input cube; throws WeightShapeMismatch if a
  // layer does not fit or the output shape differs from the input shape.
  void validate(CubeDims input) const;
};

// "SCW1" container: u32 layer count, then per layer a u8 kind tag, u32 name
// length + name bytes, a kind-specific u32 header and float32 payloads;
// a trailing u8 stage index closes the file. Little-endian throughout.
std::vector<std::uint8_t> encode_weights(NetworkWeights const &w);
NetworkWeights            decode_weights(std::vector<std::uint8_t> bytes);
NetworkWeights            load_weights(std::filesystem::path const &path);
void                      save_weights(std::filesystem::path const &path, NetworkWeights const &w);

// Deterministic forward pass in double precision over float32 weights.
Cube run_network(NetworkWeights const &w, Cube const &x);

} // namespace sci
