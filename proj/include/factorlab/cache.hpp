#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "factorlab/serialize.hpp"

namespace factorlab {

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// Hash of the canonical serialization: sorted keys, no whitespace.
inline std::string descriptor_hash(MonoidDescriptor const& d) {
  return sha256_hex(to_json(d).dump());
}

inline std::string element_hash(Element const& e) {
  return sha256_hex(to_json(e).dump());
}

inline std::optional<std::filesystem::path> default_cache_dir() {
  if (auto const* env = std::getenv("FACTORLAB_CACHE"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

// FactorSets on disk under <dir>/<descriptor-hash>/<element-hash>.json.
// Files are published by rename, so readers never see a partial write.
class FactorCache {
 public:
  FactorCache(std::filesystem::path dir, std::string descriptor_hash)
      : dir_(std::move(dir) / std::move(descriptor_hash)) {}

  std::filesystem::path path_for(Element const& e) const {
    return dir_ / (element_hash(e) + ".json");
  }

  std::optional<FactorSet> load(Element const& e) const {
    std::ifstream in(path_for(e), std::ios::binary);
    if (!in) {
      return std::nullopt;
    }
    try {
      auto fs = factor_set_from_json(Json::parse(in));
      if (!(fs.element == e)) {
        return std::nullopt;
      }
      return fs;
    } catch (std::exception const&) {
      return std::nullopt;
    }
  }

  void store(FactorSet const& fs) const {
    std::filesystem::create_directories(dir_);
    auto target = path_for(fs.element);
    std::random_device rd;
    auto tmp = target;
    tmp += ".tmp" + std::to_string(rd()) + std::to_string(rd());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw Error("cannot write cache file " + tmp.string());
      }
      out << to_json(fs).dump();
      if (!out.flush()) {
        throw Error("cannot write cache file " + tmp.string());
      }
    }
    std::filesystem::rename(tmp, target);
  }

 private:
  std::filesystem::path dir_;
};

// Loads Z(a) from the cache when present, otherwise computes and stores it.
inline FactorSet cached_factorizations(Model const& m, Element const& a,
                                       FactorOptions const& opt,
                                       FactorCache const* cache) {
  auto e = m.canonical(a);
  if (cache) {
    if (auto hit = cache->load(e)) {
      return std::move(*hit);
    }
  }
  auto fs = factorizations(m, e, opt);
  if (cache) {
    cache->store(fs);
  }
  return fs;
}

}  // namespace factorlab
