#include "sci/tensor_file.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <numeric>

namespace sci {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'T', '1'};

} // namespace

std::size_t RawTensor::count() const
{
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, [](std::size_t a, std::uint64_t d) {
    return a * static_cast<std::size_t>(d);
  });
}

namespace wire {

void put_u8(std::vector<std::uint8_t> &out, std::uint8_t v) { out.push_back(v); }

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v)
{
  for (int s = 0; s < 32; s += 8) { out.push_back(static_cast<std::uint8_t>(v >> s)); }
}

void put_i32(std::vector<std::uint8_t> &out, std::int32_t v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

void put_u64(std::vector<std::uint8_t> &out, std::uint64_t v)
{
  for (int s = 0; s < 64; s += 8) { out.push_back(static_cast<std::uint8_t>(v >> s)); }
}

void put_f32(std::vector<std::uint8_t> &out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

void Reader::need(std::size_t n) const
{
  if (remaining() < n) { fail(ErrorKind::TruncatedPayload, "unexpected end of file"); }
}

std::uint8_t Reader::u8()
{
  need(1);
  return bytes_[pos_++];
}

std::uint32_t Reader::u32()
{
  need(4);
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) { v |= std::uint32_t{bytes_[pos_++]} << (8 * k); }
  return v;
}

std::int32_t Reader::i32() { return std::bit_cast<std::int32_t>(u32()); }

std::uint64_t Reader::u64()
{
  need(8);
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) { v |= std::uint64_t{bytes_[pos_++]} << (8 * k); }
  return v;
}

float Reader::f32() { return std::bit_cast<float>(u32()); }

std::string Reader::chars(std::size_t n)
{
  need(n);
  std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return s;
}

void Reader::f32s(float *dst, std::size_t n)
{
  if (n > remaining() / 4) { fail(ErrorKind::TruncatedPayload, "payload shorter than declared dims"); }
  for (std::size_t k = 0; k < n; ++k) { dst[k] = f32(); }
}

std::vector<std::uint8_t> slurp(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { fail(ErrorKind::Io, "cannot open " + path.string()); }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(std::filesystem::path const &path, std::vector<std::uint8_t> const &bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) { fail(ErrorKind::Io, "cannot write " + path.string()); }
  out.write(reinterpret_cast<char const *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) { fail(ErrorKind::Io, "short write to " + path.string()); }
}

} // namespace wire

RawTensor read_tensor(std::filesystem::path const &path)
{
  wire::Reader in(wire::slurp(path));
  if (in.remaining() < 4 || in.chars(4) != std::string(kMagic, 4)) {
    fail(ErrorKind::BadMagic, path.string() + " is not an SCT1 tensor file");
  }
  auto const rank = in.u32();
  if (rank == 0 || rank > kMaxTensorRank) {
    fail(ErrorKind::UnsupportedRank, "rank " + std::to_string(rank) + " in " + path.string());
  }
  RawTensor t;
  t.dims.resize(rank);
  for (auto &d : t.dims) { d = in.u64(); }
  // Compare against the bytes actually present before allocating.
  std::size_t count = 1;
  for (auto d : t.dims) {
    if (d != 0 && count > (in.remaining() / 4) / d) {
      fail(ErrorKind::TruncatedPayload, "payload shorter than declared dims in " + path.string());
    }
    count *= static_cast<std::size_t>(d);
  }
  t.data.resize(count);
  in.f32s(t.data.data(), count);
  return t;
}

void write_tensor(std::filesystem::path const &path, RawTensor const &tensor)
{
  if (tensor.rank() == 0 || tensor.rank() > kMaxTensorRank) {
    fail(ErrorKind::UnsupportedRank, "cannot write rank " + std::to_string(tensor.rank()));
  }
  if (tensor.count() != tensor.data.size()) { fail(ErrorKind::ShapeMismatch, "tensor payload does not match dims"); }
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + 8 * tensor.rank() + 4 * tensor.data.size());
  bytes.insert(bytes.end(), kMagic, kMagic + 4);
  wire::put_u32(bytes, static_cast<std::uint32_t>(tensor.rank()));
  for (auto d : tensor.dims) { wire::put_u64(bytes, d); }
  for (float v : tensor.data) { wire::put_f32(bytes, v); }
  wire::dump(path, bytes);
}

RawTensor to_raw(Frame const &frame)
{
  RawTensor t;
  t.dims = {static_cast<std::uint64_t>(frame.rows()), static_cast<std::uint64_t>(frame.cols())};
  t.data.resize(static_cast<std::size_t>(frame.size()));
  std::size_t k = 0;
  for (Index i = 0; i < frame.rows(); ++i) {
    for (Index j = 0; j < frame.cols(); ++j) { t.data[k++] = static_cast<float>(frame(i, j)); }
  }
  return t;
}

RawTensor to_raw(Cube const &cube)
{
  RawTensor t;
  t.dims = {static_cast<std::uint64_t>(cube.nb()), static_cast<std::uint64_t>(cube.nx()),
            static_cast<std::uint64_t>(cube.ny())};
  t.data.resize(static_cast<std::size_t>(cube.size()));
  std::size_t k = 0;
  for (Index b = 0; b < cube.nb(); ++b) {
    for (Index i = 0; i < cube.nx(); ++i) {
      for (Index j = 0; j < cube.ny(); ++j) { t.data[k++] = static_cast<float>(cube(i, j, b)); }
    }
  }
  return t;
}

Frame frame_from_raw(RawTensor const &raw)
{
  if (raw.rank() != 2) { fail(ErrorKind::ShapeMismatch, "expected a rank-2 frame, got rank " + std::to_string(raw.rank())); }
  auto const nx = static_cast<Index>(raw.dims[0]);
  auto const ny = static_cast<Index>(raw.dims[1]);
  Frame      f(nx, ny);
  std::size_t k = 0;
  for (Index i = 0; i < nx; ++i) {
    for (Index j = 0; j < ny; ++j) { f(i, j) = raw.data[k++]; }
  }
  return f;
}

Cube cube_from_raw(RawTensor const &raw)
{
  if (raw.rank() == 2) {
    Frame const f = frame_from_raw(raw);
    return Cube(CubeDims{f.rows(), f.cols(), 1}, vectorize(f));
  }
  if (raw.rank() != 3) { fail(ErrorKind::ShapeMismatch, "expected a rank-3 cube, got rank " + std::to_string(raw.rank())); }
  CubeDims const dims{static_cast<Index>(raw.dims[1]), static_cast<Index>(raw.dims[2]), static_cast<Index>(raw.dims[0])};
  Cube           c(dims);
  std::size_t    k = 0;
  for (Index b = 0; b < dims.nb; ++b) {
    for (Index i = 0; i < dims.nx; ++i) {
      for (Index j = 0; j < dims.ny; ++j) { c(i, j, b) = raw.data[k++]; }
    }
  }
  return c;
}

} // namespace sci
