#include "sci/network.hpp"
#include "sci/tensor_file.hpp"

namespace sci {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'W', '1'};

struct Shape
{
  Index c = 0, h = 0, w = 0;
  Index size() const { return c * h * w; }
  bool  operator==(Shape const &) const = default;
};

struct Activation
{
  Shape               shape;
  std::vector<double> data; // row-major (c, h, w)
};

[[noreturn]] void shape_error(std::size_t index, Layer const &layer, std::string const &why)
{
  fail(ErrorKind::WeightShapeMismatch, "layer " + std::to_string(index) + " (" + layer.name + ", " +
                                         std::string(to_string(layer.kind)) + "): " + why);
}

// Output shape of one layer, or throws. `input` is the network input shape,
// `outputs` the shapes produced by earlier layers.
Shape next_shape(std::size_t index, Layer const &layer, Shape const &cur, Shape const &input, std::vector<Shape> const &outputs)
{
  switch (layer.kind) {
  case LayerKind::Conv2d:
    if (layer.in_channels != cur.c) { shape_error(index, layer, "input channel count differs from activation"); }
    if (layer.kernel == 0 || layer.kernel % 2 == 0) { shape_error(index, layer, "kernel size must be odd"); }
    if (layer.stride != 1) { shape_error(index, layer, "only stride 1 preserves the spatial shape"); }
    if (layer.weights.size() != std::size_t{layer.out_channels} * layer.in_channels * layer.kernel * layer.kernel ||
        layer.bias.size() != layer.out_channels) {
      shape_error(index, layer, "payload size does not match header");
    }
    return {layer.out_channels, cur.h, cur.w};
  case LayerKind::Affine:
    if (layer.in_features != cur.size()) { shape_error(index, layer, "input features differ from activation size"); }
    if (layer.weights.size() != std::size_t{layer.out_features} * layer.in_features || layer.bias.size() != layer.out_features) {
      shape_error(index, layer, "payload size does not match header");
    }
    if (layer.out_features == input.size()) { return input; }
    return {layer.out_features, 1, 1};
  case LayerKind::Relu: return cur;
  case LayerKind::SkipAdd: {
    if (layer.source >= static_cast<std::int32_t>(index)) { shape_error(index, layer, "skip source must precede the layer"); }
    Shape const &src = layer.source < 0 ? input : outputs[static_cast<std::size_t>(layer.source)];
    if (!(src == cur)) { shape_error(index, layer, "skip source shape differs from activation"); }
    return cur;
  }
  }
  fail(ErrorKind::UnknownLayerKind, "layer " + std::to_string(index));
}

Activation conv2d(Layer const &l, Activation const &in)
{
  auto const  k = static_cast<Index>(l.kernel);
  Index const pad = k / 2;
  Index const cin = in.shape.c, h = in.shape.h, w = in.shape.w;
  Index const cout = l.out_channels;
  Activation  out{{cout, h, w}, std::vector<double>(static_cast<std::size_t>(cout * h * w))};
  for (Index o = 0; o < cout; ++o) {
    for (Index i = 0; i < h; ++i) {
      for (Index j = 0; j < w; ++j) {
        double acc = l.bias[static_cast<std::size_t>(o)];
        for (Index c = 0; c < cin; ++c) {
          for (Index di = 0; di < k; ++di) {
            Index const ii = i + di - pad;
            if (ii < 0 || ii >= h) { continue; }
            for (Index dj = 0; dj < k; ++dj) {
              Index const jj = j + dj - pad;
              if (jj < 0 || jj >= w) { continue; }
              acc += double(l.weights[static_cast<std::size_t>(((o * cin + c) * k + di) * k + dj)]) *
                     in.data[static_cast<std::size_t>((c * h + ii) * w + jj)];
            }
          }
        }
        out.data[static_cast<std::size_t>((o * h + i) * w + j)] = acc;
      }
    }
  }
  return out;
}

Activation affine(Layer const &l, Activation const &in, Shape const &out_shape)
{
  Activation out{out_shape, std::vector<double>(l.out_features)};
  for (std::size_t o = 0; o < l.out_features; ++o) {
    double acc = l.bias[o];
    for (std::size_t c = 0; c < l.in_features; ++c) { acc += double(l.weights[o * l.in_features + c]) * in.data[c]; }
    out.data[o] = acc;
  }
  return out;
}

Shape shape_of(CubeDims d) { return {d.nb, d.nx, d.ny}; }

} // namespace

std::string_view to_string(LayerKind kind)
{
  switch (kind) {
  case LayerKind::Conv2d: return "conv2d";
  case LayerKind::Affine: return "affine";
  case LayerKind::Relu: return "relu";
  case LayerKind::SkipAdd: return "skip_add";
  }
  return "unknown";
}

Layer Layer::conv2d(std::string name, std::uint32_t in, std::uint32_t out, std::uint32_t kernel)
{
  Layer l;
  l.name = std::move(name);
  l.kind = LayerKind::Conv2d;
  l.in_channels = in;
  l.out_channels = out;
  l.kernel = kernel;
  l.weights.assign(std::size_t{out} * in * kernel * kernel, 0.0f);
  l.bias.assign(out, 0.0f);
  return l;
}

Layer Layer::affine(std::string name, std::uint32_t in, std::uint32_t out)
{
  Layer l;
  l.name = std::move(name);
  l.kind = LayerKind::Affine;
  l.in_features = in;
  l.out_features = out;
  l.weights.assign(std::size_t{out} * in, 0.0f);
  l.bias.assign(out, 0.0f);
  return l;
}

Layer Layer::relu(std::string name)
{
  Layer l;
  l.name = std::move(name);
  l.kind = LayerKind::Relu;
  return l;
}

Layer Layer::skip_add(std::string name, std::int32_t source)
{
  Layer l;
  l.name = std::move(name);
  l.kind = LayerKind::SkipAdd;
  l.source = source;
  return l;
}

void NetworkWeights::validate(CubeDims input_dims) const
{
  Shape const        input = shape_of(input_dims);
  Shape              cur = input;
  std::vector<Shape> outputs;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    cur = next_shape(k, layers[k], cur, input, outputs);
    outputs.push_back(cur);
  }
  if (!(cur == input)) { fail(ErrorKind::WeightShapeMismatch, "network output shape differs from its input shape"); }
}

std::vector<std::uint8_t> encode_weights(NetworkWeights const &w)
{
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  wire::put_u32(out, static_cast<std::uint32_t>(w.layers.size()));
  for (auto const &l : w.layers) {
    wire::put_u8(out, static_cast<std::uint8_t>(l.kind));
    wire::put_u32(out, static_cast<std::uint32_t>(l.name.size()));
    out.insert(out.end(), l.name.begin(), l.name.end());
    switch (l.kind) {
    case LayerKind::Conv2d:
      wire::put_u32(out, l.in_channels);
      wire::put_u32(out, l.out_channels);
      wire::put_u32(out, l.kernel);
      wire::put_u32(out, l.stride);
      break;
    case LayerKind::Affine:
      wire::put_u32(out, l.in_features);
      wire::put_u32(out, l.out_features);
      break;
    case LayerKind::Relu: break;
    case LayerKind::SkipAdd: wire::put_i32(out, l.source); break;
    }
    for (float v : l.weights) { wire::put_f32(out, v); }
    for (float v : l.bias) { wire::put_f32(out, v); }
  }
  wire::put_u8(out, w.stage);
  return out;
}

NetworkWeights decode_weights(std::vector<std::uint8_t> bytes)
{
  wire::Reader in(std::move(bytes));
  if (in.remaining() < 4 || in.chars(4) != std::string(kMagic, 4)) { fail(ErrorKind::BadMagic, "not an SCW1 weight file"); }
  NetworkWeights w;
  auto const     count = in.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    Layer      l;
    auto const tag = in.u8();
    if (tag < 1 || tag > 4) { fail(ErrorKind::UnknownLayerKind, "layer " + std::to_string(k) + " has tag " + std::to_string(tag)); }
    l.kind = static_cast<LayerKind>(tag);
    l.name = in.chars(in.u32());
    std::size_t nweights = 0, nbias = 0;
    switch (l.kind) {
    case LayerKind::Conv2d:
      l.in_channels = in.u32();
      l.out_channels = in.u32();
      l.kernel = in.u32();
      l.stride = in.u32();
      nweights = std::size_t{l.out_channels} * l.in_channels * l.kernel * l.kernel;
      nbias = l.out_channels;
      break;
    case LayerKind::Affine:
      l.in_features = in.u32();
      l.out_features = in.u32();
      nweights = std::size_t{l.out_features} * l.in_features;
      nbias = l.out_features;
      break;
    case LayerKind::Relu: break;
    case LayerKind::SkipAdd: l.source = in.i32(); break;
    }
    l.weights.resize(nweights);
    in.f32s(l.weights.data(), nweights);
    l.bias.resize(nbias);
    in.f32s(l.bias.data(), nbias);
    w.layers.push_back(std::move(l));
  }
  w.stage = in.u8();
  if (in.remaining() != 0) { fail(ErrorKind::WeightShapeMismatch, "trailing bytes after stage index"); }
  return w;
}

NetworkWeights load_weights(std::filesystem::path const &path) { return decode_weights(wire::slurp(path)); }

void save_weights(std::filesystem::path const &path, NetworkWeights const &w) { wire::dump(path, encode_weights(w)); }

Cube run_network(NetworkWeights const &w, Cube const &x)
{
  w.validate(x.dims());
  Shape const input_shape = shape_of(x.dims());

  Activation input{input_shape, std::vector<double>(static_cast<std::size_t>(x.size()))};
  for (Index b = 0; b < x.nb(); ++b) {
    for (Index i = 0; i < x.nx(); ++i) {
      for (Index j = 0; j < x.ny(); ++j) { input.data[static_cast<std::size_t>((b * x.nx() + i) * x.ny() + j)] = x(i, j, b); }
    }
  }

  std::vector<Activation> outputs;
  outputs.reserve(w.layers.size());
  Activation const *cur = &input;
  for (std::size_t k = 0; k < w.layers.size(); ++k) {
    Layer const &l = w.layers[k];
    switch (l.kind) {
    case LayerKind::Conv2d: outputs.push_back(conv2d(l, *cur)); break;
    case LayerKind::Affine: {
      Shape const s = l.out_features == input_shape.size() ? input_shape : Shape{l.out_features, 1, 1};
      outputs.push_back(affine(l, *cur, s));
      break;
    }
    case LayerKind::Relu: {
      Activation a = *cur;
      for (auto &v : a.data) { v = v > 0.0 ? v : 0.0; }
      outputs.push_back(std::move(a));
      break;
    }
    case LayerKind::SkipAdd: {
      Activation        a = *cur;
      Activation const &src = l.source < 0 ? input : outputs[static_cast<std::size_t>(l.source)];
      for (std::size_t e = 0; e < a.data.size(); ++e) { a.data[e] += src.data[e]; }
      outputs.push_back(std::move(a));
      break;
    }
    }
    cur = &outputs.back();
  }

  Cube out(x.dims());
  for (Index b = 0; b < x.nb(); ++b) {
    for (Index i = 0; i < x.nx(); ++i) {
      for (Index j = 0; j < x.ny(); ++j) { out(i, j, b) = cur->data[static_cast<std::size_t>((b * x.nx() + i) * x.ny() + j)]; }
    }
  }
  return out;
}

} // namespace sci
