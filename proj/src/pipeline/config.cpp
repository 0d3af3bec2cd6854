#include "sci/pipeline/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace sci::pipeline {

std::string_view to_string(Mode m)
{
  switch (m) {
  case Mode::Simulate: return "simulate";
  case Mode::Reconstruct: return "reconstruct";
  case Mode::Benchmark: return "benchmark";
  case Mode::VerifyTheory: return "verify-theory";
  case Mode::MakeMasks: return "make-masks";
  }
  return "unknown";
}

std::string_view to_string(ForwardKind f) { return f == ForwardKind::Video ? "video" : "spectral"; }

std::string_view to_string(MaskKind k)
{
  switch (k) {
  case MaskKind::Bernoulli: return "bernoulli";
  case MaskKind::Gaussian: return "gaussian";
  case MaskKind::Crop: return "crop";
  }
  return "unknown";
}

Mode parse_mode(std::string_view s)
{
  for (Mode m : {Mode::Simulate, Mode::Reconstruct, Mode::Benchmark, Mode::VerifyTheory, Mode::MakeMasks}) {
    if (to_string(m) == s) { return m; }
  }
  fail(ErrorKind::InvalidArgument, "unknown mode '" + std::string(s) + "'");
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
  fail(ErrorKind::InvalidArgument, "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

template <typename T> T parse_number(std::string_view key, std::string_view s)
{
  T    v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) { bad_value(key, s); }
  return v;
}

bool parse_bool(std::string_view key, std::string_view s)
{
  if (s == "true" || s == "1" || s == "yes" || s == "on") { return true; }
  if (s == "false" || s == "0" || s == "no" || s == "off") { return false; }
  bad_value(key, s);
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt(bool v) { return v ? "true" : "false"; }

std::string_view trim(std::string_view s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) { return {}; }
  auto const last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s)
{
  std::vector<std::string> out;
  while (!s.empty()) {
    auto const comma = s.find(',');
    auto const item = trim(s.substr(0, comma));
    if (!item.empty()) { out.emplace_back(item); }
    if (comma == std::string_view::npos) { break; }
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string join_list(std::vector<std::string> const &v)
{
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) { out += (k ? "," : "") + v[k]; }
  return out;
}

struct Field
{
  char const                                                 *key;
  std::function<void(RunConfig &, std::string_view, std::string_view)> set;
  std::function<std::string(RunConfig const &)>              get;
};

#define SCI_STRING_FIELD(name)                                                                                                   \
  Field                                                                                                                          \
  {                                                                                                                              \
    #name, [](RunConfig &c, std::string_view, std::string_view v) { c.name = std::string(v); },                                 \
      [](RunConfig const &c) { return c.name; }                                                                                  \
  }

#define SCI_NUMBER_FIELD(key, member, type)                                                                                      \
  Field                                                                                                                          \
  {                                                                                                                              \
    key, [](RunConfig &c, std::string_view k, std::string_view v) { c.member = parse_number<type>(k, v); },                      \
      [](RunConfig const &c) { return fmt(static_cast<double>(c.member)); }                                                      \
  }

#define SCI_BOOL_FIELD(key, member)                                                                                              \
  Field                                                                                                                          \
  {                                                                                                                              \
    key, [](RunConfig &c, std::string_view k, std::string_view v) { c.member = parse_bool(k, v); },                              \
      [](RunConfig const &c) { return fmt(c.member); }                                                                           \
  }

std::vector<Field> const &fields()
{
  static std::vector<Field> const table = {
    {"mode", [](RunConfig &c, std::string_view, std::string_view v) { c.mode = parse_mode(v); },
     [](RunConfig const &c) { return std::string(to_string(c.mode)); }},
    SCI_STRING_FIELD(input),
    SCI_STRING_FIELD(masks),
    SCI_STRING_FIELD(truth),
    SCI_STRING_FIELD(output),
    SCI_STRING_FIELD(report),
    SCI_STRING_FIELD(csv),
    SCI_STRING_FIELD(dataset),
    {"forward",
     [](RunConfig &c, std::string_view k, std::string_view v) {
       if (v == "video") {
         c.forward = ForwardKind::Video;
       } else if (v == "spectral") {
         c.forward = ForwardKind::Spectral;
       } else {
         bad_value(k, v);
       }
     },
     [](RunConfig const &c) { return std::string(to_string(c.forward)); }},
    SCI_NUMBER_FIELD("n_lambda", geometry.n_lambda, Index),
    SCI_NUMBER_FIELD("shift_step", geometry.shift_step, Index),
    {"noise",
     [](RunConfig &c, std::string_view k, std::string_view v) {
       if (v == "none") {
         c.noise.kind = NoiseSpec::Kind::None;
       } else if (v == "gaussian") {
         c.noise.kind = NoiseSpec::Kind::Gaussian;
       } else {
         bad_value(k, v);
       }
     },
     [](RunConfig const &c) { return std::string(c.noise.kind == NoiseSpec::Kind::None ? "none" : "gaussian"); }},
    SCI_NUMBER_FIELD("sigma", noise.sigma, double),
    {"algorithm", [](RunConfig &c, std::string_view, std::string_view v) { c.algorithm = parse_algorithm(v); },
     [](RunConfig const &c) { return std::string(to_string(c.algorithm)); }},
    SCI_NUMBER_FIELD("stages", stages, int),
    SCI_STRING_FIELD(denoiser),
    {"weights", [](RunConfig &c, std::string_view, std::string_view v) { c.weights = split_list(v); },
     [](RunConfig const &c) { return join_list(c.weights); }},
    SCI_NUMBER_FIELD("gamma", gamma, double),
    {"projection_scale",
     [](RunConfig &c, std::string_view k, std::string_view v) {
       if (v == "1") {
         c.scale_by_b = false;
       } else if (v == "B" || v == "b") {
         c.scale_by_b = true;
       } else {
         bad_value(k, v);
       }
     },
     [](RunConfig const &c) { return std::string(c.scale_by_b ? "B" : "1"); }},
    SCI_NUMBER_FIELD("lambda_tv", lambda_tv, double),
    SCI_NUMBER_FIELD("tv_decay", tv_decay, double),
    SCI_NUMBER_FIELD("tv_inner", tv_inner, int),
    SCI_BOOL_FIELD("accelerate", accelerate),
    SCI_BOOL_FIELD("psnr", metrics_psnr),
    SCI_BOOL_FIELD("ssim", metrics_ssim),
    SCI_NUMBER_FIELD("peak", peak, double),
    {"mask_kind",
     [](RunConfig &c, std::string_view k, std::string_view v) {
       for (MaskKind m : {MaskKind::Bernoulli, MaskKind::Gaussian, MaskKind::Crop}) {
         if (to_string(m) == v) {
           c.mask_kind = m;
           return;
         }
       }
       bad_value(k, v);
     },
     [](RunConfig const &c) { return std::string(to_string(c.mask_kind)); }},
    SCI_NUMBER_FIELD("nx", nx, Index),
    SCI_NUMBER_FIELD("ny", ny, Index),
    SCI_NUMBER_FIELD("nb", nb, Index),
    SCI_NUMBER_FIELD("mask_p", mask_p, double),
    SCI_NUMBER_FIELD("crop_x", crop_x, Index),
    SCI_NUMBER_FIELD("crop_y", crop_y, Index),
    SCI_STRING_FIELD(mother),
    SCI_NUMBER_FIELD("trials", trials, int),
    SCI_NUMBER_FIELD("xi_samples", xi_samples, int),
    SCI_NUMBER_FIELD("threads", threads, int),
    {"seed",
     [](RunConfig &c, std::string_view k, std::string_view v) {
       c.seed = parse_number<std::uint64_t>(k, v);
       c.noise.seed = c.seed;
     },
     [](RunConfig const &c) { return std::to_string(c.seed); }},
  };
  return table;
}

#undef SCI_STRING_FIELD
#undef SCI_NUMBER_FIELD
#undef SCI_BOOL_FIELD

} // namespace

void set_field(RunConfig &cfg, std::string_view key, std::string_view value)
{
  key = trim(key);
  value = trim(value);
  for (auto const &f : fields()) {
    if (key == f.key) {
      f.set(cfg, key, value);
      return;
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown config key '" + std::string(key) + "'");
}

std::vector<std::string> config_keys()
{
  std::vector<std::string> keys;
  for (auto const &f : fields()) { keys.emplace_back(f.key); }
  return keys;
}

RunConfig parse_config(std::string_view text, RunConfig base)
{
  int line_no = 0;
  while (!text.empty()) {
    auto const       nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) { line = line.substr(0, hash); }
    line = trim(line);
    if (line.empty()) { continue; }
    auto const eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::InvalidArgument, "line " + std::to_string(line_no) + ": expected key = value");
    }
    set_field(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(std::string const &path, RunConfig base)
{
  std::ifstream in(path);
  if (!in) { fail(ErrorKind::Io, "cannot open config " + path); }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string serialize(RunConfig const &cfg)
{
  std::string out;
  for (auto const &f : fields()) { out += std::string(f.key) + " = " + f.get(cfg) + "\n"; }
  return out;
}

bool RunConfig::operator==(RunConfig const &other) const { return serialize(*this) == serialize(other); }

void RunConfig::validate() const
{
  auto require = [](bool ok, std::string const &what) {
    if (!ok) { fail(ErrorKind::InvalidArgument, what); }
  };
  geometry.validate();
  require(noise.sigma >= 0.0, "sigma must be >= 0");
  require(peak > 0.0, "peak must be positive");
  switch (mode) {
  case Mode::Simulate:
    require(!input.empty(), "simulate needs input");
    require(!masks.empty(), "simulate needs masks");
    require(!output.empty(), "simulate needs output");
    break;
  case Mode::Reconstruct:
  case Mode::Benchmark:
    if (mode == Mode::Reconstruct) {
      require(!input.empty(), "reconstruct needs input");
      require(!masks.empty(), "reconstruct needs masks");
      require(!output.empty(), "reconstruct needs output");
    } else {
      require(!dataset.empty(), "benchmark needs dataset");
    }
    require(stages >= 1, "stages must be >= 1");
    require(denoiser == "identity" || denoiser == "tv" || denoiser == "network", "denoiser must be identity, tv or network");
    require(denoiser != "network" || !weights.empty(), "network denoiser needs weights");
    require(algorithm != Algorithm::AdmmNet || gamma > 0.0, "admm_net needs gamma > 0");
    require(lambda_tv >= 0.0, "lambda_tv must be >= 0");
    require(tv_decay > 0.0 && tv_decay <= 1.0, "tv_decay must be in (0, 1]");
    require(tv_inner >= 1, "tv_inner must be >= 1");
    require(threads >= 0, "threads must be >= 0");
    break;
  case Mode::VerifyTheory:
    require(trials >= 1, "trials must be >= 1");
    require(xi_samples >= 2, "xi_samples must be >= 2");
    break;
  case Mode::MakeMasks:
    require(!output.empty(), "make-masks needs output");
    require(nx >= 1 && ny >= 1 && nb >= 1, "mask dims must be positive");
    require(mask_p >= 0.0 && mask_p <= 1.0, "mask_p must be in [0, 1]");
    require(mask_kind != MaskKind::Crop || !mother.empty(), "crop needs a mother mask");
    require(crop_x >= 0 && crop_y >= 0, "crop offsets must be >= 0");
    break;
  }
}

} // namespace sci::pipeline
