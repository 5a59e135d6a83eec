#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace sqlaudit {

struct PackagingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the passphrase is wrong or the payload was tampered with.
struct AuthenticationError : PackagingError {
  using PackagingError::PackagingError;
};

// Archives dataset_dir (files only, sorted relative paths) and writes an
// authenticated encrypted bundle. The key is derived from the passphrase with
// a salted memory-hard KDF; the plaintext header carries only the format
// version and KDF parameters.
void pack(const std::filesystem::path& dataset_dir,
          const std::string& passphrase,
          const std::filesystem::path& bundle_path);

// Decrypts and extracts a bundle into out_dir (created if missing).
// Authentication failure emits zero plaintext. Rejects truncated bundles,
// unknown format versions, and archive paths escaping out_dir.
void unpack(const std::filesystem::path& bundle_path,
            const std::string& passphrase,
            const std::filesystem::path& out_dir);

}  // namespace sqlaudit
