// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/manifest.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "testpair/util.hpp"

namespace testpair {

std::string_view to_string(CoverageFormat format) {
  return format == CoverageFormat::XmlLineReport ? "xml-line-report"
                                                 : "json-line-report";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string parse_string_value(std::string_view v, int lineno) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    throw std::runtime_error(
        fmt::format("manifest line {}: expected quoted string", lineno));
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) {
      ++i;
      switch (v[i]) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: out.push_back(v[i]);
      }
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

std::vector<std::string> parse_array_value(std::string_view v, int lineno) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw std::runtime_error(
        fmt::format("manifest line {}: expected array", lineno));
  }
  std::vector<std::string> out;
  std::string_view inner = v.substr(1, v.size() - 2);
  std::size_t i = 0;
  while (i < inner.size()) {
    while (i < inner.size() &&
           (std::isspace(static_cast<unsigned char>(inner[i])) ||
            inner[i] == ',')) {
      ++i;
    }
    if (i >= inner.size()) break;
    if (inner[i] != '"') {
      throw std::runtime_error(fmt::format(
          "manifest line {}: array elements must be strings", lineno));
    }
    std::size_t j = i + 1;
    std::string elem;
    while (j < inner.size() && inner[j] != '"') {
      if (inner[j] == '\\' && j + 1 < inner.size()) ++j;
      elem.push_back(inner[j]);
      ++j;
    }
    out.push_back(std::move(elem));
    i = j + 1;
  }
  return out;
}

}  // namespace

ProjectManifest parse_manifest(std::string_view text,
                               const std::filesystem::path& base_dir) {
  ProjectManifest m;
  bool in_env = false;
  int lineno = 0;
  for (const auto raw_line : split_lines(text)) {
    ++lineno;
    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[env]") {
        in_env = true;
        continue;
      }
      throw std::runtime_error(
          fmt::format("manifest line {}: unknown table {}", lineno, line));
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error(
          fmt::format("manifest line {}: expected key = value", lineno));
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));

    if (in_env) {
      m.env[key] = parse_string_value(value, lineno);
      continue;
    }
    if (key == "project_id") {
      m.project_id = parse_string_value(value, lineno);
    } else if (key == "workdir") {
      std::filesystem::path p = parse_string_value(value, lineno);
      m.workdir = p.is_absolute() ? p : base_dir / p;
    } else if (key == "build_cmd") {
      m.build_cmd = parse_array_value(value, lineno);
    } else if (key == "test_cmd") {
      m.test_cmd = parse_array_value(value, lineno);
    } else if (key == "coverage_cmd") {
      m.coverage_cmd = parse_array_value(value, lineno);
    } else if (key == "runner") {
      m.runner = parse_array_value(value, lineno);
    } else if (key == "coverage_format") {
      const auto fmt_name = parse_string_value(value, lineno);
      if (fmt_name == "xml-line-report") {
        m.coverage_format = CoverageFormat::XmlLineReport;
      } else if (fmt_name == "json-line-report") {
        m.coverage_format = CoverageFormat::JsonLineReport;
      } else {
        throw std::runtime_error(fmt::format(
            "manifest line {}: unknown coverage_format", lineno));
      }
    } else if (key == "coverage_output") {
      m.coverage_output = parse_string_value(value, lineno);
    } else if (key == "timeout_secs") {
      m.timeout_secs = std::stoi(std::string{value});
    } else if (key == "subject_language") {
      const auto lang = parse_lang(parse_string_value(value, lineno));
      if (!lang) {
        throw std::runtime_error(fmt::format(
            "manifest line {}: unknown subject_language", lineno));
      }
      m.subject_language = *lang;
    } else if (key == "code_file") {
      m.code_file = parse_string_value(value, lineno);
    } else if (key == "test_file") {
      m.test_file = parse_string_value(value, lineno);
    } else {
      throw std::runtime_error(
          fmt::format("manifest line {}: unknown key {}", lineno, key));
    }
  }
  if (m.timeout_secs <= 0) {
    throw std::runtime_error("manifest: timeout_secs must be > 0");
  }
  return m;
}

ProjectManifest load_manifest(const std::filesystem::path& toml_path) {
  const auto bytes = read_file_bytes(toml_path);
  if (!bytes) {
    throw std::runtime_error("cannot read manifest: " + toml_path.string());
  }
  return parse_manifest(*bytes, toml_path.parent_path());
}

}  // namespace testpair
