#include "sci/pipeline/scenes.hpp"
#include "sci/tensor_file.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace sci::pipeline {

Cube moving_square(MovingSquare const &s)
{
  Cube c = Cube::Constant(CubeDims{s.nx, s.ny, s.nb}, s.background);
  for (Index b = 0; b < s.nb; ++b) {
    Index const c0 = s.col + s.speed * b;
    for (Index i = std::max<Index>(s.row, 0); i < std::min(s.row + s.side, s.nx); ++i) {
      for (Index j = std::max<Index>(c0, 0); j < std::min(c0 + s.side, s.ny); ++j) { c(i, j, b) = s.value; }
    }
  }
  return c;
}

Cube bernoulli_masks(Index nx, Index ny, Index nb, double p, std::uint64_t seed)
{
  std::mt19937_64             rng(seed);
  std::bernoulli_distribution coin(p);
  Cube                        m(nx, ny, nb);
  for (Index k = 0; k < m.size(); ++k) { m.vec()[k] = coin(rng) ? 1.0 : 0.0; }
  return m;
}

Cube gaussian_masks(Index nx, Index ny, Index nb, std::uint64_t seed)
{
  std::mt19937_64                  rng(seed);
  std::normal_distribution<double> gauss;
  Cube                             m(nx, ny, nb);
  for (Index k = 0; k < m.size(); ++k) { m.vec()[k] = gauss(rng); }
  return m;
}

Cube crop_masks(Cube const &mother, Index x, Index y, Index nx, Index ny)
{
  if (x < 0 || y < 0 || nx < 1 || ny < 1 || x + nx > mother.nx() || y + ny > mother.ny()) {
    std::ostringstream os;
    os << "crop " << nx << "x" << ny << " at (" << x << ", " << y << ") exceeds mother mask " << mother.dims();
    fail(ErrorKind::CropOutOfBounds, os.str());
  }
  Cube out(nx, ny, mother.nb());
  for (Index b = 0; b < mother.nb(); ++b) { out.slice(b) = mother.slice(b).block(x, y, nx, ny); }
  return out;
}

namespace {

// Next whitespace-delimited header token, skipping # comments.
std::string pgm_token(std::istream &in)
{
  std::string tok;
  char        ch = 0;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string rest;
      std::getline(in, rest);
      if (!tok.empty()) { break; }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) { break; }
      continue;
    }
    tok += ch;
  }
  return tok;
}

Index pgm_int(std::istream &in, std::filesystem::path const &path)
{
  auto const tok = pgm_token(in);
  try {
    return static_cast<Index>(std::stol(tok));
  } catch (std::exception const &) {
    fail(ErrorKind::BadMagic, path.string() + ": malformed PGM header");
  }
}

} // namespace

Frame read_pgm(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { fail(ErrorKind::Io, "cannot open " + path.string()); }
  auto const magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") { fail(ErrorKind::BadMagic, path.string() + " is not a PGM image"); }
  Index const width = pgm_int(in, path);
  Index const height = pgm_int(in, path);
  Index const maxval = pgm_int(in, path);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) { fail(ErrorKind::BadMagic, path.string() + ": bad PGM header"); }

  Frame f(height, width);
  for (Index i = 0; i < height; ++i) {
    for (Index j = 0; j < width; ++j) {
      long v = 0;
      if (magic == "P2") {
        if (!(in >> v)) { fail(ErrorKind::TruncatedPayload, path.string() + ": short PGM payload"); }
      } else if (maxval < 256) {
        char c = 0;
        if (!in.get(c)) { fail(ErrorKind::TruncatedPayload, path.string() + ": short PGM payload"); }
        v = static_cast<unsigned char>(c);
      } else {
        char hi = 0, lo = 0;
        if (!in.get(hi) || !in.get(lo)) { fail(ErrorKind::TruncatedPayload, path.string() + ": short PGM payload"); }
        v = (static_cast<unsigned char>(hi) << 8) | static_cast<unsigned char>(lo);
      }
      f(i, j) = double(v) / double(maxval);
    }
  }
  return f;
}

void write_pgm(std::filesystem::path const &path, Frame const &frame)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { fail(ErrorKind::Io, "cannot write " + path.string()); }
  out << "P5\n" << frame.cols() << ' ' << frame.rows() << "\n255\n";
  for (Index i = 0; i < frame.rows(); ++i) {
    for (Index j = 0; j < frame.cols(); ++j) {
      out.put(static_cast<char>(std::lround(std::clamp(frame(i, j), 0.0, 1.0) * 255.0)));
    }
  }
}

Cube load_cube(std::string const &spec)
{
  auto const is_pgm = [](std::string const &p) { return p.size() > 4 && p.substr(p.size() - 4) == ".pgm"; };
  if (spec.find(',') == std::string::npos) {
    if (!is_pgm(spec)) { return read_cube(spec); }
    Frame const f = read_pgm(spec);
    return Cube(CubeDims{f.rows(), f.cols(), 1}, vectorize(f));
  }
  std::vector<Frame> frames;
  std::stringstream  ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!is_pgm(item)) { fail(ErrorKind::InvalidArgument, "frame lists must be .pgm files: " + item); }
    frames.push_back(read_pgm(item));
    if (frames.back().rows() != frames.front().rows() || frames.back().cols() != frames.front().cols()) {
      fail(ErrorKind::ShapeMismatch, "frame " + item + " differs in size from the first frame");
    }
  }
  Cube c(frames.front().rows(), frames.front().cols(), static_cast<Index>(frames.size()));
  for (std::size_t b = 0; b < frames.size(); ++b) { c.slice(static_cast<Index>(b)) = frames[b]; }
  return c;
}

} // namespace sci::pipeline
