#pragma once

#include "tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sci {

// On-disk ".sct" container: "SCT1", u32 rank, rank × u64 dims, then
// float32 payload in row-major order over the declared dims. Everything is
// little-endian.
//
// Frames are stored with dims (n_x, n_y); cubes with dims (B, n_x, n_y) so
// the channel index is slowest-varying in the payload.
struct RawTensor
{
  std::vector<std::uint64_t> dims;
  std::vector<float>         data;

  std::size_t rank() const { return dims.size(); }
  std::size_t count() const;
};

inline constexpr std::size_t kMaxTensorRank = 4;

RawTensor read_tensor(std::filesystem::path const &path);
void      write_tensor(std::filesystem::path const &path, RawTensor const &tensor);

RawTensor to_raw(Frame const &frame);
RawTensor to_raw(Cube const &cube);
Frame     frame_from_raw(RawTensor const &raw);
// Rank-2 tensors are accepted as single-channel cubes.
Cube      cube_from_raw(RawTensor const &raw);

inline Frame read_frame(std::filesystem::path const &path) { return frame_from_raw(read_tensor(path)); }
inline Cube  read_cube(std::filesystem::path const &path) { return cube_from_raw(read_tensor(path)); }
inline void  write_tensor(std::filesystem::path const &path, Frame const &frame) { write_tensor(path, to_raw(frame)); }
inline void  write_tensor(std::filesystem::path const &path, Cube const &cube) { write_tensor(path, to_raw(cube)); }

// Byte-level codec, shared with the weight-file reader.
namespace wire {

void          put_u8(std::vector<std::uint8_t> &out, std::uint8_t v);
void          put_u32(std::vector<std::uint8_t> &out, std::uint32_t v);
void          put_i32(std::vector<std::uint8_t> &out, std::int32_t v);
void          put_u64(std::vector<std::uint8_t> &out, std::uint64_t v);
void          put_f32(std::vector<std::uint8_t> &out, float v);

class Reader
{
public:
  explicit Reader(std::vector<std::uint8_t> bytes)
    : bytes_(std::move(bytes))
  {
  }

  std::uint8_t  u8();
  std::uint32_t u32();
  std::int32_t  i32();
  std::uint64_t u64();
  float         f32();
  std::string   chars(std::size_t n);
  void          f32s(float *dst, std::size_t n);

  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  void need(std::size_t n) const;

  std::vector<std::uint8_t> bytes_;
  std::size_t               pos_ = 0;
};

std::vector<std::uint8_t> slurp(std::filesystem::path const &path);
void                      dump(std::filesystem::path const &path, std::vector<std::uint8_t> const &bytes);

} // namespace wire

} // namespace sci
