#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "skrvae/tensor.hpp"

namespace skr::io {

// One row per channel, comma separated, LF line endings, no header.
// Values are written as shortest round-trip decimals, so save then load is
// bit-exact. Lines starting with '#' are skipped on load (CSV reports carry
// a provenance comment line).
void save_csv(const std::filesystem::path& path, const Tensor& m,
              const std::string& header_comment = "");
Tensor load_csv(const std::filesystem::path& path);

std::string format_double(double v); // shortest round-trip decimal
double parse_double(const std::string& token, std::size_t line); // ParseError on junk

// Flat `key = value` text with '#' comments; insertion order is preserved so
// serialization is deterministic.
class KvFile {
public:
    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value) { set(key, format_double(value)); }
    void set_u64(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

    bool contains(const std::string& key) const;
    const std::string& get(const std::string& key) const; // ParseError when missing
    std::optional<std::string> find(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string serialize() const;
    static KvFile parse(const std::string& text);
    static KvFile load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// FNV-1a over the canonical serialized config; echoed in output headers.
std::uint64_t fnv1a64(const std::string& text);

} // namespace skr::io
