#include "sqlaudit/packaging.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace sqlaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;
constexpr char kMagic[8] = {'S', 'Q', 'A', 'B', 'N', 'D', 'L', '\n'};

void ensure_sodium() {
  if (sodium_init() < 0) throw PackagingError("libsodium init failed");
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

uint32_t get_u32(const std::string& in, size_t& pos) {
  if (pos + 4 > in.size()) throw PackagingError("truncated archive");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  pos += 4;
  return v;
}

uint64_t get_u64(const std::string& in, size_t& pos) {
  if (pos + 8 > in.size()) throw PackagingError("truncated archive");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  pos += 8;
  return v;
}

// path-length, path, size, bytes per file; paths sorted for determinism
std::string build_archive(const fs::path& root) {
  if (!fs::is_directory(root))
    throw PackagingError("not a directory: " + root.string());
  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    paths.push_back(entry.path().lexically_relative(root).generic_string());
  }
  std::sort(paths.begin(), paths.end());
  std::string out;
  put_u32(out, static_cast<uint32_t>(paths.size()));
  for (const auto& rel : paths) {
    std::ifstream f(root / rel, std::ios::binary);
    if (!f) throw PackagingError("cannot read " + (root / rel).string());
    std::string data((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    put_u32(out, static_cast<uint32_t>(rel.size()));
    out += rel;
    put_u64(out, data.size());
    out += data;
  }
  return out;
}

bool path_escapes(const std::string& rel) {
  if (rel.empty()) return true;
  fs::path p(rel);
  if (p.is_absolute()) return true;
  for (const auto& part : p)
    if (part == "..") return true;
  return false;
}

void extract_archive(const std::string& archive, const fs::path& out_dir) {
  size_t pos = 0;
  uint32_t count = get_u32(archive, pos);
  fs::create_directories(out_dir);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t len = get_u32(archive, pos);
    if (pos + len > archive.size()) throw PackagingError("truncated archive");
    std::string rel = archive.substr(pos, len);
    pos += len;
    if (path_escapes(rel))
      throw PackagingError("unsafe path in archive: " + rel);
    uint64_t size = get_u64(archive, pos);
    if (pos + size > archive.size()) throw PackagingError("truncated archive");
    fs::path dest = out_dir / fs::path(rel);
    fs::create_directories(dest.parent_path());
    std::ofstream f(dest, std::ios::binary | std::ios::trunc);
    if (!f) throw PackagingError("cannot write " + dest.string());
    f.write(archive.data() + pos, static_cast<std::streamsize>(size));
    pos += size;
  }
  if (pos != archive.size()) throw PackagingError("trailing archive bytes");
}

struct KdfParams {
  uint64_t opslimit = crypto_pwhash_OPSLIMIT_INTERACTIVE;
  uint64_t memlimit = crypto_pwhash_MEMLIMIT_INTERACTIVE;
  int alg = crypto_pwhash_ALG_ARGON2ID13;
};

std::vector<unsigned char> derive_key(const std::string& passphrase,
                                      const unsigned char* salt,
                                      const KdfParams& params) {
  std::vector<unsigned char> key(crypto_secretbox_KEYBYTES);
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(),
                    passphrase.size(), salt, params.opslimit,
                    static_cast<size_t>(params.memlimit), params.alg) != 0)
    throw PackagingError("key derivation failed (out of memory?)");
  return key;
}

}  // namespace

void pack(const fs::path& dataset_dir, const std::string& passphrase,
          const fs::path& bundle_path) {
  ensure_sodium();
  std::string archive = build_archive(dataset_dir);

  unsigned char salt[crypto_pwhash_SALTBYTES];
  unsigned char nonce[crypto_secretbox_NONCEBYTES];
  randombytes_buf(salt, sizeof salt);
  randombytes_buf(nonce, sizeof nonce);
  KdfParams params;
  auto key = derive_key(passphrase, salt, params);

  std::vector<unsigned char> cipher(archive.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(
      cipher.data(), reinterpret_cast<const unsigned char*>(archive.data()),
      archive.size(), nonce, key.data());
  sodium_memzero(key.data(), key.size());

  char salt_hex[2 * sizeof salt + 1];
  char nonce_hex[2 * sizeof nonce + 1];
  sodium_bin2hex(salt_hex, sizeof salt_hex, salt, sizeof salt);
  sodium_bin2hex(nonce_hex, sizeof nonce_hex, nonce, sizeof nonce);
  json header = {
      {"format", "sqlaudit-bundle"},
      {"version", kFormatVersion},
      {"kdf",
       {{"name", "argon2id13"},
        {"opslimit", params.opslimit},
        {"memlimit", params.memlimit},
        {"salt", salt_hex}}},
      {"nonce", nonce_hex},
  };
  std::string header_str = header.dump();

  std::ofstream out(bundle_path, std::ios::binary | std::ios::trunc);
  if (!out) throw PackagingError("cannot write " + bundle_path.string());
  out.write(kMagic, sizeof kMagic);
  std::string lenbuf;
  put_u32(lenbuf, static_cast<uint32_t>(header_str.size()));
  put_u64(lenbuf, cipher.size());
  out.write(lenbuf.data(), static_cast<std::streamsize>(lenbuf.size()));
  out.write(header_str.data(),
            static_cast<std::streamsize>(header_str.size()));
  out.write(reinterpret_cast<const char*>(cipher.data()),
            static_cast<std::streamsize>(cipher.size()));
  if (!out) throw PackagingError("write failed: " + bundle_path.string());
}

void unpack(const fs::path& bundle_path, const std::string& passphrase,
            const fs::path& out_dir) {
  ensure_sodium();
  std::ifstream in(bundle_path, std::ios::binary);
  if (!in) throw PackagingError("cannot open " + bundle_path.string());
  std::string raw((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (raw.size() < sizeof kMagic + 12 ||
      std::memcmp(raw.data(), kMagic, sizeof kMagic) != 0)
    throw PackagingError("not a bundle file: " + bundle_path.string());

  size_t pos = sizeof kMagic;
  uint32_t header_len = get_u32(raw, pos);
  uint64_t cipher_len = get_u64(raw, pos);
  if (pos + header_len + cipher_len != raw.size())
    throw PackagingError("truncated bundle");

  json header;
  try {
    header = json::parse(raw.substr(pos, header_len));
  } catch (const json::exception& e) {
    throw PackagingError(std::string("malformed bundle header: ") + e.what());
  }
  pos += header_len;
  if (header.value("format", "") != "sqlaudit-bundle")
    throw PackagingError("not a bundle file: " + bundle_path.string());
  int version = header.value("version", -1);
  if (version != kFormatVersion)
    throw PackagingError("unsupported bundle version " +
                         std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");

  KdfParams params;
  unsigned char salt[crypto_pwhash_SALTBYTES];
  unsigned char nonce[crypto_secretbox_NONCEBYTES];
  try {
    const auto& kdf = header.at("kdf");
    if (kdf.at("name").get<std::string>() != "argon2id13")
      throw PackagingError("unsupported KDF");
    params.opslimit = kdf.at("opslimit").get<uint64_t>();
    params.memlimit = kdf.at("memlimit").get<uint64_t>();
    std::string salt_hex = kdf.at("salt").get<std::string>();
    std::string nonce_hex = header.at("nonce").get<std::string>();
    size_t bin_len = 0;
    if (sodium_hex2bin(salt, sizeof salt, salt_hex.data(), salt_hex.size(),
                       nullptr, &bin_len, nullptr) != 0 ||
        bin_len != sizeof salt)
      throw PackagingError("malformed salt");
    if (sodium_hex2bin(nonce, sizeof nonce, nonce_hex.data(),
                       nonce_hex.size(), nullptr, &bin_len, nullptr) != 0 ||
        bin_len != sizeof nonce)
      throw PackagingError("malformed nonce");
  } catch (const json::exception& e) {
    throw PackagingError(std::string("malformed bundle header: ") + e.what());
  }

  if (cipher_len < crypto_secretbox_MACBYTES)
    throw PackagingError("truncated bundle");
  auto key = derive_key(passphrase, salt, params);
  std::string plain(cipher_len - crypto_secretbox_MACBYTES, '\0');
  int rc = crypto_secretbox_open_easy(
      reinterpret_cast<unsigned char*>(plain.data()),
      reinterpret_cast<const unsigned char*>(raw.data() + pos), cipher_len,
      nonce, key.data());
  sodium_memzero(key.data(), key.size());
  if (rc != 0)
    throw AuthenticationError(
        "authentication failed: wrong passphrase or corrupted bundle");

  extract_archive(plain, out_dir);
}

}  // namespace sqlaudit
