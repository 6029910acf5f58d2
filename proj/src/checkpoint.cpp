#include "ariel/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ariel/error.hpp"

namespace ariel {
namespace {

constexpr std::array<char, 8> kMagic = {'A', 'R', 'I', 'E', 'L', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IngestionError(path.string(), 0, "truncated checkpoint");
  return v;
}

std::array<Matrix*, 6> tensors(EncoderParams& p) { return {&p.w1, &p.w2, &p.p1, &p.b1, &p.p2, &p.b2}; }
std::array<const Matrix*, 6> tensors(const EncoderParams& p) { return {&p.w1, &p.w2, &p.p1, &p.b1, &p.p2, &p.b2}; }
constexpr std::array<const char*, 6> kNames = {"w1", "w2", "p1", "b1", "p2", "b2"};

EncoderParams checked(EncoderParams p, const Architecture& declared, const std::filesystem::path& path) {
  try {
    p.validate();
  } catch (const ContractViolation& e) {
    throw IngestionError(path.string(), 0, e.what());
  }
  if (!(p.architecture() == declared)) throw IngestionError(path.string(), 0, "architecture header disagrees with tensors");
  return p;
}

}  // namespace

void save_checkpoint(const EncoderParams& params, const std::filesystem::path& path) {
  params.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  const Architecture a = params.architecture();
  for (std::uint64_t d : {a.input_dim, a.hidden_dim, a.embed_dim, a.proj_dim}) put<std::uint64_t>(out, d);
  for (const Matrix* m : tensors(params)) {
    put<std::uint64_t>(out, m->rows());
    put<std::uint64_t>(out, m->cols());
    out.write(reinterpret_cast<const char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(double)));
  }
}

EncoderParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError(path.string(), 0, "cannot open checkpoint");
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IngestionError(path.string(), 0, "not an ariel checkpoint");
  const auto version = get<std::uint32_t>(in, path);
  if (version != kVersion) throw IngestionError(path.string(), 0, "unsupported checkpoint version " + std::to_string(version));
  Architecture a;
  a.input_dim = get<std::uint64_t>(in, path);
  a.hidden_dim = get<std::uint64_t>(in, path);
  a.embed_dim = get<std::uint64_t>(in, path);
  a.proj_dim = get<std::uint64_t>(in, path);
  EncoderParams p;
  for (Matrix* m : tensors(p)) {
    const auto rows = get<std::uint64_t>(in, path);
    const auto cols = get<std::uint64_t>(in, path);
    if (rows > (1u << 24) || cols > (1u << 24)) throw IngestionError(path.string(), 0, "implausible tensor shape");
    *m = Matrix(rows, cols);
    in.read(reinterpret_cast<char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(double)));
    if (!in) throw IngestionError(path.string(), 0, "truncated checkpoint");
  }
  return checked(std::move(p), a, path);
}

void save_checkpoint_json(const EncoderParams& params, const std::filesystem::path& path) {
  params.validate();
  const Architecture a = params.architecture();
  nlohmann::json j;
  j["format"] = "ariel-checkpoint";
  j["version"] = kVersion;
  j["architecture"] = {{"input_dim", a.input_dim}, {"hidden_dim", a.hidden_dim},
                       {"embed_dim", a.embed_dim}, {"proj_dim", a.proj_dim}};
  const auto ts = tensors(params);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Matrix& m = *ts[k];
    j["tensors"][kNames[k]] = {{"rows", m.rows()}, {"cols", m.cols()},
                               {"data", std::vector<double>(m.values().begin(), m.values().end())}};
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump() << '\n';
}

EncoderParams load_checkpoint_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "cannot open checkpoint");
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format") != "ariel-checkpoint" || j.at("version") != kVersion) {
      throw IngestionError(path.string(), 0, "unsupported checkpoint format");
    }
    const auto& aj = j.at("architecture");
    Architecture a{aj.at("input_dim"), aj.at("hidden_dim"), aj.at("embed_dim"), aj.at("proj_dim")};
    EncoderParams p;
    const auto ts = tensors(p);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto& tj = j.at("tensors").at(kNames[k]);
      const auto data = tj.at("data").get<std::vector<double>>();
      *ts[k] = Matrix(tj.at("rows").get<std::size_t>(), tj.at("cols").get<std::size_t>());
      if (data.size() != ts[k]->size()) throw IngestionError(path.string(), 0, std::string("tensor size mismatch: ") + kNames[k]);
      std::copy(data.begin(), data.end(), ts[k]->values().begin());
    }
    return checked(std::move(p), a, path);
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError(path.string(), 0, e.what());
  }
}

EncoderParams load_checkpoint_any(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError(path.string(), 0, "cannot open checkpoint");
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  if (in && head == kMagic) return load_checkpoint(path);
  return load_checkpoint_json(path);
}

}  // namespace ariel
