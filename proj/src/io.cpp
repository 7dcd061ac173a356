#include "ensnap/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ensnap {

namespace {

constexpr char kStoreMagic[8] = {'E', 'N', 'S', 'N', 'A', 'P', 'S', 'S'};
constexpr char kCubeMagic[8] = {'E', 'N', 'S', 'N', 'A', 'P', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }
  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 4);
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64s(const std::vector<double>& vs) {
    for (double v : vs) f64(v);
  }
  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open for reading: " + path);
  }
  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n))
      throw std::runtime_error("truncated file: " + path_);
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void f64s(std::vector<double>& vs, std::size_t n) {
    vs.resize(n);
    for (std::size_t i = 0; i < n; ++i) vs[i] = f64();
  }
  void expect_magic(const char (&magic)[8]) {
    char b[8];
    bytes(b, 8);
    for (int i = 0; i < 8; ++i)
      if (b[i] != magic[i])
        throw std::runtime_error("bad magic in " + path_);
  }
  void expect_version() {
    const std::uint32_t v = u32();
    if (v != kVersion)
      throw std::runtime_error("unsupported version in " + path_);
  }

 private:
  std::string path_;
  std::ifstream in_;
};

}  // namespace

void save_snapshot_store(const SnapshotStore& store, const std::string& path) {
  store.validate();
  Writer w(path);
  w.bytes(kStoreMagic, 8);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(store.input_dim));
  w.u32(static_cast<std::uint32_t>(store.hidden_units));
  w.u32(static_cast<std::uint32_t>(store.snapshots.size()));
  for (std::size_t e : store.epoch_of) w.u64(e);
  w.f64s(store.train_losses);
  for (const MLPParams& p : store.snapshots) {
    w.f64s(p.hidden_weights);
    w.f64s(p.hidden_biases);
    w.f64s(p.output_weights);
    w.f64(p.output_bias);
  }
  w.close();
}

SnapshotStore load_snapshot_store(const std::string& path) {
  Reader r(path);
  r.expect_magic(kStoreMagic);
  r.expect_version();
  SnapshotStore store;
  store.input_dim = r.u32();
  store.hidden_units = r.u32();
  const std::size_t count = r.u32();
  store.epoch_of.resize(count);
  for (std::size_t i = 0; i < count; ++i) store.epoch_of[i] = r.u64();
  r.f64s(store.train_losses, count);
  store.snapshots.resize(count);
  for (MLPParams& p : store.snapshots) {
    p.input_dim = store.input_dim;
    p.hidden_units = store.hidden_units;
    r.f64s(p.hidden_weights, p.hidden_units * p.input_dim);
    r.f64s(p.hidden_biases, p.hidden_units);
    r.f64s(p.output_weights, p.hidden_units);
    p.output_bias = r.f64();
  }
  store.validate();
  return store;
}

void save_cube(const PredictionCube& cube, const std::string& path) {
  cube.validate();
  Writer w(path);
  w.bytes(kCubeMagic, 8);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(cube.num_nets));
  w.u32(static_cast<std::uint32_t>(cube.num_snapshots));
  w.u32(static_cast<std::uint32_t>(cube.num_points));
  w.u32(cube.has_oob_weights() ? 1u : 0u);
  w.f64s(cube.point_targets);
  w.f64s(cube.values);
  if (cube.has_oob_weights()) w.f64s(cube.oob_weights);
  w.close();
}

PredictionCube load_cube(const std::string& path) {
  Reader r(path);
  r.expect_magic(kCubeMagic);
  r.expect_version();
  PredictionCube cube;
  cube.num_nets = r.u32();
  cube.num_snapshots = r.u32();
  cube.num_points = r.u32();
  const std::uint32_t flags = r.u32();
  r.f64s(cube.point_targets, cube.num_points);
  r.f64s(cube.values, cube.num_nets * cube.num_snapshots * cube.num_points);
  if (flags & 1u) r.f64s(cube.oob_weights, cube.num_points * cube.num_nets);
  cube.validate();
  return cube;
}

void save_selection(const Selection& sel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  for (std::size_t n = 0; n < sel.tau.size(); ++n)
    out << n << ' ' << sel.tau[n] << ' ' << sel.weights[n] << '\n';
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

Selection load_selection(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Selection sel;
  std::string line;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t net = 0, tau = 0;
    double weight = 0.0;
    if (!(row >> net >> tau >> weight) || net != expected)
      throw std::runtime_error("bad selection line in " + path);
    sel.tau.push_back(tau);
    sel.weights.push_back(weight);
    ++expected;
  }
  if (sel.tau.empty())
    throw std::runtime_error("empty selection file: " + path);
  return sel;
}

void save_bootstrap_plan(const BootstrapPlan& plan, const std::string& path) {
  plan.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& draw : plan.train_indices) {
    for (std::size_t k = 0; k < draw.size(); ++k)
      out << (k ? " " : "") << draw[k];
    out << '\n';
  }
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

BootstrapPlan load_bootstrap_plan(const std::string& path,
                                  std::size_t data_size) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  BootstrapPlan plan;
  plan.data_size = data_size;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<std::size_t> draw;
    std::size_t idx = 0;
    while (row >> idx) draw.push_back(idx);
    if (draw.size() != data_size)
      throw std::runtime_error("bad plan line in " + path);
    plan.train_indices.push_back(std::move(draw));
  }
  plan.ensemble_size = plan.train_indices.size();
  if (plan.ensemble_size == 0)
    throw std::runtime_error("empty plan file: " + path);
  plan.gamma.assign(data_size * plan.ensemble_size, 0);
  plan.oob_indices.resize(plan.ensemble_size);
  std::vector<std::uint8_t> drawn(data_size);
  for (std::size_t n = 0; n < plan.ensemble_size; ++n) {
    std::fill(drawn.begin(), drawn.end(), 0);
    for (std::size_t p : plan.train_indices[n]) {
      if (p >= data_size)
        throw std::runtime_error("plan index out of range in " + path);
      drawn[p] = 1;
    }
    for (std::size_t p = 0; p < data_size; ++p) {
      if (!drawn[p]) {
        plan.oob_indices[n].push_back(p);
        plan.gamma[p * plan.ensemble_size + n] = 1;
      }
    }
  }
  plan.validate();
  return plan;
}

}  // namespace ensnap
