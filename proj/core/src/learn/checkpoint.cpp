// Copyright 2026 The Apiary Desk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "apiary/learn/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "apiary/error.hpp"

namespace apiary::learn {

namespace {

constexpr char kPolicyMagic[4] = {'A', 'P', 'R', 'Y'};
constexpr char kTrainerMagic[4] = {'A', 'P', 'R', 'T'};

std::uint64_t fnv1a(const unsigned char* p, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    out_.insert(out_.end(), c, c + n);
  }
  void uint(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u16(std::uint16_t v) { uint(v, 2); }
  void u32(std::uint32_t v) { uint(v, 4); }
  void u64(std::uint64_t v) { uint(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64s(const std::vector<double>& xs) {
    for (double v : xs) f64(v);
  }
  void sizes(const std::vector<int>& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    for (int v : s) u32(static_cast<std::uint32_t>(v));
  }
  void str32(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void seal() { u64(fnv1a(out_.data(), out_.size())); }
  std::vector<unsigned char> take() { return std::move(out_); }

 private:
  std::vector<unsigned char> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& in) : in_(in) {}

  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw ConfigError("checkpoint is truncated");
  }
  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t(in_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(uint(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  std::uint64_t u64() { return uint(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::vector<double> f64s(std::size_t n) {
    need(n * 8);
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  std::vector<int> sizes() {
    const std::uint32_t n = u32();
    if (n < 2 || n > 64) throw ConfigError("checkpoint has an invalid layer count");
    std::vector<int> s(n);
    for (auto& v : s) {
      const std::uint32_t x = u32();
      if (x == 0 || x > (1u << 20)) throw ConfigError("checkpoint has an invalid layer size");
      v = static_cast<int>(x);
    }
    return s;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  void magic(const char (&expected)[4]) {
    need(4);
    if (std::memcmp(in_.data(), expected, 4) != 0) throw ConfigError("not an apiary checkpoint (bad magic)");
    pos_ += 4;
  }
  /// Verifies the trailing checksum; call before parsing the body.
  void check_seal() const {
    if (in_.size() < 12) throw ConfigError("checkpoint is truncated");
    const std::size_t body = in_.size() - 8;
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= std::uint64_t(in_[body + i]) << (8 * i);
    if (stored != fnv1a(in_.data(), body)) throw ConfigError("checkpoint checksum mismatch (truncated or corrupt)");
  }
  void expect_end() const {
    if (pos_ + 8 != in_.size()) throw ConfigError("checkpoint has trailing data");
  }

 private:
  const std::vector<unsigned char>& in_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<unsigned char>& bytes) {
  // Write-then-rename so a crash never leaves a half-written checkpoint.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void write_grad(Writer& w, const ParamGrad& g) {
  w.u32(static_cast<std::uint32_t>(g.actor.size()));
  w.f64s(g.actor);
  w.u32(static_cast<std::uint32_t>(g.log_std.size()));
  w.f64s(g.log_std);
  w.u32(static_cast<std::uint32_t>(g.critic.size()));
  w.f64s(g.critic);
}

ParamGrad read_grad(Reader& r) {
  ParamGrad g;
  g.actor = r.f64s(r.u32());
  g.log_std = r.f64s(r.u32());
  g.critic = r.f64s(r.u32());
  return g;
}

}  // namespace

double CheckpointMeta::scalar(const std::string& name) const {
  for (const auto& [k, v] : scalars) {
    if (k == name) return v;
  }
  throw std::out_of_range("checkpoint has no scalar '" + name + "'");
}

void CheckpointMeta::set_scalar(const std::string& name, double value) {
  for (auto& [k, v] : scalars) {
    if (k == name) {
      v = value;
      return;
    }
  }
  scalars.emplace_back(name, value);
}

std::vector<unsigned char> encode_checkpoint(const Checkpoint& ckpt) {
  const ActorCritic& p = ckpt.policy;
  p.validate();
  Writer w;
  w.bytes(kPolicyMagic, 4);
  w.u32(kCheckpointVersion);
  w.u32(0);  // tanh
  w.u32(p.frame == ObsFrame::kBody ? 1 : 0);
  w.sizes(p.actor.sizes);
  w.sizes(p.critic.sizes);
  w.f64(p.scale.position);
  w.f64(p.scale.rotation);
  w.f64(p.scale.velocity);
  w.f64(p.scale.angular_velocity);
  w.u64(ckpt.meta.env_hash);
  w.u32(static_cast<std::uint32_t>(ckpt.meta.scalars.size()));
  for (const auto& [name, value] : ckpt.meta.scalars) {
    if (name.size() > 0xffff) throw std::invalid_argument("scalar name too long");
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.f64(value);
  }
  w.str32(ckpt.meta.config_text);
  w.f64s(p.actor.data);
  w.f64s(p.log_std);
  w.f64s(p.critic.data);
  w.seal();
  return w.take();
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) { write_file(path, encode_checkpoint(ckpt)); }

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  Reader r(bytes);
  r.check_seal();
  r.magic(kPolicyMagic);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  }
  if (r.u32() != 0) throw ConfigError("unsupported activation in checkpoint");
  Checkpoint c;
  const std::uint32_t frame = r.u32();
  if (frame > 1) throw ConfigError("invalid observation frame in checkpoint");
  c.policy.frame = frame == 1 ? ObsFrame::kBody : ObsFrame::kWorld;
  c.policy.actor.sizes = r.sizes();
  c.policy.critic.sizes = r.sizes();
  if (c.policy.actor.input_size() != kObsDim || c.policy.actor.output_size() != kActionDim ||
      c.policy.critic.input_size() != kObsDim || c.policy.critic.output_size() != 1) {
    throw ConfigError("checkpoint layer sizes do not match the 12-observation / 6-action task");
  }
  c.policy.scale.position = r.f64();
  c.policy.scale.rotation = r.f64();
  c.policy.scale.velocity = r.f64();
  c.policy.scale.angular_velocity = r.f64();
  c.meta.env_hash = r.u64();
  const std::uint32_t n_scalars = r.u32();
  for (std::uint32_t i = 0; i < n_scalars; ++i) {
    std::string name = r.str(r.u16());
    const double v = r.f64();
    c.meta.scalars.emplace_back(std::move(name), v);
  }
  c.meta.config_text = r.str(r.u32());
  c.policy.actor.data = r.f64s(MlpParams::param_count(c.policy.actor.sizes));
  c.policy.log_std = r.f64s(kActionDim);
  c.policy.critic.data = r.f64s(MlpParams::param_count(c.policy.critic.sizes));
  r.expect_end();
  try {
    c.policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("checkpoint failed validation: ") + e.what());
  }
  return c;
}

Checkpoint load_checkpoint(const std::string& path) {
  try {
    return decode_checkpoint(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_trainer_state(const std::string& path, const TrainerState& s) {
  Writer w;
  w.bytes(kTrainerMagic, 4);
  w.u32(kCheckpointVersion);
  w.u64(static_cast<std::uint64_t>(s.adam_steps));
  w.u64(static_cast<std::uint64_t>(s.updates));
  w.u64(static_cast<std::uint64_t>(s.env_steps));
  write_grad(w, s.first_moment);
  write_grad(w, s.second_moment);
  w.seal();
  write_file(path, w.take());
}

TrainerState load_trainer_state(const std::string& path) {
  const auto bytes = read_file(path);
  Reader r(bytes);
  r.check_seal();
  r.magic(kTrainerMagic);
  if (r.u32() != kCheckpointVersion) throw ConfigError(path + ": unsupported trainer state version");
  TrainerState s;
  s.adam_steps = static_cast<long long>(r.u64());
  s.updates = static_cast<long long>(r.u64());
  s.env_steps = static_cast<long long>(r.u64());
  s.first_moment = read_grad(r);
  s.second_moment = read_grad(r);
  r.expect_end();
  return s;
}

}  // namespace apiary::learn
