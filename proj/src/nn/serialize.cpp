#include "mcg/nn/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace mcg::nn {

namespace {

constexpr char kMagic[8] = {'M', 'C', 'G', 'N', 'E', 'T', '0', '1'};
constexpr uint32_t kFormatVersion = 1;

// The container is explicitly little-endian; this code targets LE hosts.
static_assert(std::endian::native == std::endian::little,
              "model container writer assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("model file truncated");
  return v;
}

}  // namespace

void save_network(const Network& net, const std::string& path,
                  const std::string& metadata_json) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write model file: " + path);
  out.write(kMagic, sizeof(kMagic));
  put<uint32_t>(out, kFormatVersion);
  put<uint32_t>(out, static_cast<uint32_t>(net.input_width()));
  put<uint32_t>(out, static_cast<uint32_t>(net.layers().size()));
  for (const LayerSpec& l : net.layers()) {
    put<uint32_t>(out, static_cast<uint32_t>(l.kind));
    put<uint32_t>(out, static_cast<uint32_t>(l.out_width));
    put<uint32_t>(out, static_cast<uint32_t>(l.activation));
    put<double>(out, l.rate);
  }
  put<uint64_t>(out, static_cast<uint64_t>(net.parameter_count()));
  out.write(reinterpret_cast<const char*>(net.parameters().data()),
            static_cast<std::streamsize>(net.parameter_count() * sizeof(float)));
  put<uint32_t>(out, static_cast<uint32_t>(metadata_json.size()));
  out.write(metadata_json.data(), static_cast<std::streamsize>(metadata_json.size()));
  if (!out) throw ConfigError("failed writing model file: " + path);
}

LoadedNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError("not a model file: " + path);
  if (get<uint32_t>(in) != kFormatVersion)
    throw ConfigError("unsupported model format version in " + path);

  uint32_t input_width = get<uint32_t>(in);
  uint32_t n_layers = get<uint32_t>(in);
  std::vector<LayerSpec> layers;
  for (uint32_t i = 0; i < n_layers; ++i) {
    LayerSpec l;
    l.kind = static_cast<LayerSpec::Kind>(get<uint32_t>(in));
    l.out_width = static_cast<int>(get<uint32_t>(in));
    l.activation = static_cast<Activation>(get<uint32_t>(in));
    l.rate = get<double>(in);
    layers.push_back(l);
  }

  LoadedNetwork loaded{Network(static_cast<int>(input_width), std::move(layers), 0), ""};
  uint64_t count = get<uint64_t>(in);
  if (count != loaded.net.parameter_count())
    throw ConfigError("model parameter count mismatch in " + path);
  in.read(reinterpret_cast<char*>(loaded.net.parameters().data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  uint32_t meta_len = get<uint32_t>(in);
  loaded.metadata_json.resize(meta_len);
  in.read(loaded.metadata_json.data(), meta_len);
  if (!in) throw ConfigError("model file truncated: " + path);
  return loaded;
}

}  // namespace mcg::nn
