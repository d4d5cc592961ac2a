#pragma once

#include <string>

#include "mcg/nn/network.hpp"

namespace mcg::nn {

// Versioned binary model container (full byte layout in docs/formats.md):
//   magic "MCGNET01", u32 format version, u32 input width, u32 layer count,
//   20 bytes per layer (u32 kind, u32 width, u32 activation, f64 rate),
//   u64 parameter count, float32 parameters, u32 metadata length, metadata
//   (UTF-8 JSON). Everything little-endian. Parameters round-trip bit-exactly.
void save_network(const Network& net, const std::string& path,
                  const std::string& metadata_json);

struct LoadedNetwork {
  Network net;
  std::string metadata_json;
};

LoadedNetwork load_network(const std::string& path);

}  // namespace mcg::nn
