#include "ctl/manifest.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ctl/errors.hpp"

namespace ctl {

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

}  // namespace

void Manifest::set(std::string_view key, std::string_view value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Manifest::set(std::string_view key, double value) {
  set(key, format_double(value));
}

void Manifest::set(std::string_view key, std::int64_t value) {
  set(key, std::to_string(value));
}

void Manifest::set(std::string_view key, std::uint64_t value) {
  set(key, std::to_string(value));
}

bool Manifest::contains(std::string_view key) const {
  return get(key).has_value();
}

std::optional<std::string> Manifest::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) {
      return v;
    }
  }
  return std::nullopt;
}

double Manifest::get_double(std::string_view key) const {
  const auto value = get(key);
  if (!value) {
    throw DataError("manifest is missing key: " + std::string(key));
  }
  char* end = nullptr;
  const double parsed = std::strtod(value->c_str(), &end);
  if (end == value->c_str() || *end != '\0') {
    throw DataError("manifest key " + std::string(key) +
                    " is not a number: " + *value);
  }
  return parsed;
}

std::int64_t Manifest::get_int(std::string_view key) const {
  const auto value = get(key);
  if (!value) {
    throw DataError("manifest is missing key: " + std::string(key));
  }
  char* end = nullptr;
  const long long parsed = std::strtoll(value->c_str(), &end, 10);
  if (end == value->c_str() || *end != '\0') {
    throw DataError("manifest key " + std::string(key) +
                    " is not an integer: " + *value);
  }
  return parsed;
}

std::uint64_t Manifest::get_uint(std::string_view key) const {
  const auto value = get(key);
  if (!value) {
    throw DataError("manifest is missing key: " + std::string(key));
  }
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(value->c_str(), &end, 10);
  if (end == value->c_str() || *end != '\0') {
    throw DataError("manifest key " + std::string(key) +
                    " is not an unsigned integer: " + *value);
  }
  return parsed;
}

void Manifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open manifest for writing: " + path.string());
  }
  for (const auto& [key, value] : entries_) {
    out << key << " = " << value << '\n';
  }
  if (!out) {
    throw DataError("failed while writing manifest: " + path.string());
  }
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open manifest: " + path.string());
  }
  Manifest manifest;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": expected 'key = value'");
    }
    manifest.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return manifest;
}

}  // namespace ctl
