// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/coverage.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

namespace testpair {

namespace {

std::set<int> int_set(const nlohmann::json& arr) {
  std::set<int> out;
  for (const auto& v : arr) out.insert(v.get<int>());
  return out;
}

}  // namespace

CoverageData parse_coverage_json(std::string_view bytes) {
  const auto j = nlohmann::json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw CoverageParseError("coverage report is not a JSON object");
  }
  CoverageData data;
  const nlohmann::json& files =
      j.contains("files") && j["files"].is_object() ? j["files"] : j;
  for (const auto& [path, entry] : files.items()) {
    if (!entry.is_object()) continue;
    FileCoverage fc;
    if (entry.contains("covered") && entry.contains("coverable")) {
      fc.covered = int_set(entry["covered"]);
      fc.coverable = int_set(entry["coverable"]);
    } else if (entry.contains("executed_lines")) {
      fc.covered = int_set(entry["executed_lines"]);
      fc.coverable = fc.covered;
      if (entry.contains("missing_lines")) {
        for (const auto& v : entry["missing_lines"]) {
          fc.coverable.insert(v.get<int>());
        }
      }
    } else {
      continue;  // summary blocks and the like
    }
    data[path] = std::move(fc);
  }
  if (data.empty()) {
    throw CoverageParseError("coverage report contains no per-file lines");
  }
  return data;
}

namespace {

void walk_xml(const boost::property_tree::ptree& node, CoverageData& data) {
  for (const auto& [name, child] : node) {
    if (name == "class" || name == "sourcefile") {
      const auto path =
          name == "class"
              ? child.get_optional<std::string>("<xmlattr>.filename")
              : child.get_optional<std::string>("<xmlattr>.name");
      if (path) {
        FileCoverage& fc = data[*path];
        // <lines> wrapper (class reports) or direct children (sourcefile).
        std::vector<const boost::property_tree::ptree*> scopes = {&child};
        if (const auto lines = child.get_child_optional("lines")) {
          scopes.push_back(&*lines);
        }
        for (const auto* scope : scopes) {
          for (const auto& [cname, line] : *scope) {
            if (cname != "line") continue;
            const auto number =
                line.get_optional<int>("<xmlattr>.number")
                    .get_value_or(line.get_optional<int>("<xmlattr>.nr")
                                      .get_value_or(-1));
            if (number < 0) continue;
            const auto hits =
                line.get_optional<int>("<xmlattr>.hits")
                    .get_value_or(line.get_optional<int>("<xmlattr>.ci")
                                      .get_value_or(0));
            fc.coverable.insert(number);
            if (hits > 0) fc.covered.insert(number);
          }
        }
      }
    }
    walk_xml(child, data);
  }
}

}  // namespace

CoverageData parse_coverage_xml(std::string_view bytes) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string{bytes}};
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const std::exception& e) {
    throw CoverageParseError(std::string{"bad coverage XML: "} + e.what());
  }
  CoverageData data;
  walk_xml(tree, data);
  std::erase_if(data, [](const auto& kv) { return kv.second.coverable.empty(); });
  if (data.empty()) {
    throw CoverageParseError("coverage XML contains no line elements");
  }
  return data;
}

CoverageData parse_coverage(std::string_view bytes, CoverageFormat format) {
  return format == CoverageFormat::JsonLineReport ? parse_coverage_json(bytes)
                                                  : parse_coverage_xml(bytes);
}

std::string normalized_coverage_json(const CoverageData& data) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [path, fc] : data) {
    j[path] = {{"covered", fc.covered}, {"coverable", fc.coverable}};
  }
  return j.dump(2);
}

double file_line_coverage(const CoverageData& data,
                          std::string_view rel_path) {
  const FileCoverage* fc = nullptr;
  for (const auto& [path, entry] : data) {
    std::string_view p = path;
    if (p.starts_with("./")) p.remove_prefix(2);
    if (p == rel_path || p.ends_with(std::string{"/"} + std::string{rel_path})) {
      fc = &entry;
      break;
    }
  }
  if (!fc || fc->coverable.empty()) return 0.0;
  std::size_t covered = 0;
  for (const int line : fc->covered) {
    if (fc->coverable.contains(line)) ++covered;
  }
  return static_cast<double>(covered) /
         static_cast<double>(fc->coverable.size());
}

}  // namespace testpair
