#include "advlab/diff/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace advlab::diff {
namespace {

constexpr std::array<char, 8> kMagic = {'A', 'D', 'V', 'L', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated stream");
  return value;
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_header(std::istream& in, std::uint64_t& step_count) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");
  step_count = get<std::uint64_t>(in);
  return get_string(in);
}

}  // namespace

void write_checkpoint(std::ostream& out, const ParamStore& params, const std::string& metadata) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, params.step_count);
  put_string(out, metadata);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& [name, t] : params) {
    put_string(out, name);
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.value.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.value.cols()));
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(t.value.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

void save_checkpoint(const std::filesystem::path& path, const ParamStore& params, const std::string& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
  write_checkpoint(out, params, metadata);
}

std::string read_checkpoint(std::istream& in, ParamStore& params) {
  std::uint64_t step_count = 0;
  std::string metadata = read_header(in, step_count);
  const auto count = get<std::uint32_t>(in);
  if (count != params.size()) throw std::runtime_error("checkpoint: parameter count mismatch");
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::string name = get_string(in);
    if (!params.contains(name)) throw std::runtime_error("checkpoint: unknown parameter " + name);
    Tensor& t = params.at(name);
    const auto rank = get<std::uint32_t>(in);
    if (rank != 2) throw std::runtime_error("checkpoint: unsupported rank");
    const auto rows = get<std::uint64_t>(in);
    const auto cols = get<std::uint64_t>(in);
    if (static_cast<Index>(rows) != t.value.rows() || static_cast<Index>(cols) != t.value.cols()) {
      throw std::runtime_error("checkpoint: shape mismatch for " + name);
    }
    in.read(reinterpret_cast<char*>(t.value.data()), static_cast<std::streamsize>(t.value.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated values for " + name);
  }
  params.step_count = step_count;
  return metadata;
}

std::string load_checkpoint(const std::filesystem::path& path, ParamStore& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return read_checkpoint(in, params);
}

std::string read_checkpoint_metadata(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  std::uint64_t step_count = 0;
  return read_header(in, step_count);
}

}  // namespace advlab::diff
