#include "fchv/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include "fchv/error.hpp"

namespace fchv {

namespace {

constexpr std::array<char, 4> magic = {'F', 'C', 'H', 'V'};
constexpr std::size_t header_size = 4 + 1 + 4 + 4 + 5 * 8;

void put_u32(std::vector<unsigned char>& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(x >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return x;
}

double get_f64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(x);
}

}  // namespace

void save_checkpoint(const SimState& state, const SolverParams& params, const std::string& path) {
  const Field& v = state.v.field;
  if (!v.is_spectral()) throw ContractError("save_checkpoint: state must be spectral");
  const auto& g = v.grid();
  std::vector<unsigned char> buf;
  buf.reserve(header_size + static_cast<std::size_t>(v.components()) * g.spectral_size() * 16);
  buf.insert(buf.end(), magic.begin(), magic.end());
  buf.push_back(checkpoint_version);
  put_u32(buf, static_cast<std::uint32_t>(g.dim()));
  put_u32(buf, static_cast<std::uint32_t>(g.n()));
  for (double x : {g.length(), params.nu, params.beta, params.alpha, state.t}) put_f64(buf, x);
  for (int c = 0; c < v.components(); ++c) {
    for (const Complex& z : v.spectral(c)) {
      put_f64(buf, z.real());
      put_f64(buf, z.imag());
    }
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(CheckpointError::Kind::io, "cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointError(CheckpointError::Kind::io, "write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(CheckpointError::Kind::io, "cannot rename checkpoint: " + ec.message());
}

Checkpoint load_checkpoint(const std::string& path, const GridPtr& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointError::Kind::io, "cannot open " + path);
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 5) throw CheckpointError(CheckpointError::Kind::truncated, "checkpoint shorter than its header");
  if (std::memcmp(buf.data(), magic.data(), magic.size()) != 0)
    throw CheckpointError(CheckpointError::Kind::magic, "not a checkpoint file (bad magic)");
  if (buf[4] != checkpoint_version)
    throw CheckpointError(CheckpointError::Kind::version,
                          "unsupported checkpoint version " + std::to_string(buf[4]));
  if (buf.size() < header_size) throw CheckpointError(CheckpointError::Kind::truncated, "truncated header");

  const auto dim = get_u32(&buf[5]);
  const auto n = get_u32(&buf[9]);
  const double length = get_f64(&buf[13]);
  const double nu = get_f64(&buf[21]);
  const double beta = get_f64(&buf[29]);
  const double alpha = get_f64(&buf[37]);
  const double t = get_f64(&buf[45]);

  if ((dim != 2 && dim != 3) || n < 8 || n % 2 != 0 || n > (1u << 16))
    throw CheckpointError(CheckpointError::Kind::dimension, "invalid grid in checkpoint header");
  GridPtr grid;
  if (expected) {
    if (static_cast<std::uint32_t>(expected->dim()) != dim || static_cast<std::uint32_t>(expected->n()) != n ||
        expected->length() != length)
      throw CheckpointError(CheckpointError::Kind::dimension, "checkpoint grid differs from the requested grid");
    grid = expected;
  } else {
    grid = SpectralGrid::create(static_cast<int>(dim), static_cast<int>(n), length);
  }

  const std::size_t count = grid->spectral_size();
  const std::size_t expected_size = header_size + dim * count * 16;
  if (buf.size() < expected_size) throw CheckpointError(CheckpointError::Kind::truncated, "truncated coefficients");
  if (buf.size() > expected_size)
    throw CheckpointError(CheckpointError::Kind::truncated, "trailing bytes after coefficients");

  Field v = Field::vector(grid, Representation::spectral);
  const unsigned char* p = buf.data() + header_size;
  for (int c = 0; c < v.components(); ++c) {
    for (Complex& z : v.spectral(c)) {
      z = Complex(get_f64(p), get_f64(p + 8));
      p += 16;
    }
  }
  const bool certified = divergence_certificate(v);
  return Checkpoint{grid, SimState{t, 0, ProjectedField{std::move(v), certified}}, nu, beta, alpha};
}

}  // namespace fchv
