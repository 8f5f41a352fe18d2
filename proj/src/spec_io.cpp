#include "polya/spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polya/errors.hpp"

namespace polya {

using nlohmann::json;

namespace {

Eigen::VectorXd to_vector(const json& j, std::string_view what) {
  if (!j.is_array()) throw InvalidSpec(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidSpec(std::string(what) + " must contain only numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json from_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ReplacementDistribution parse_law(const json& j) {
  if (!j.is_object()) throw InvalidSpec("replacement law must be an object");
  if (j.contains("deterministic")) return ReplacementDistribution::fixed(to_vector(j.at("deterministic"), "deterministic"));
  if (!j.contains("atoms") || !j.at("atoms").is_array())
    throw InvalidSpec("replacement law needs \"deterministic\" or \"atoms\"");
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    if (!a.is_object() || !a.contains("p") || !a.contains("v") || !a.at("p").is_number())
      throw InvalidSpec("atom must be {\"p\": number, \"v\": [..]}");
    atoms.push_back(Atom{a.at("p").get<double>(), to_vector(a.at("v"), "atom vector")});
  }
  return ReplacementDistribution::mixture(std::move(atoms));
}

}  // namespace

UrnSpec parse_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidSpec("urn file must be a JSON object");
  for (const char* key : {"activities", "initial", "replacements"})
    if (!doc.contains(key)) throw InvalidSpec(std::string("missing field \"") + key + "\"");

  UrnSpec spec;
  spec.activities = to_vector(doc.at("activities"), "activities");
  spec.initial = to_vector(doc.at("initial"), "initial");
  if (doc.contains("colors")) {
    for (const auto& name : doc.at("colors")) {
      if (!name.is_string()) throw InvalidSpec("colors must be strings");
      spec.colors.push_back(name.get<std::string>());
    }
  } else {
    for (Eigen::Index i = 0; i < spec.activities.size(); ++i) spec.colors.push_back("c" + std::to_string(i + 1));
  }
  if (!doc.at("replacements").is_array()) throw InvalidSpec("replacements must be an array");
  for (const auto& law : doc.at("replacements")) spec.replacements.push_back(parse_law(law));
  validate_spec(spec);
  return spec;
}

UrnSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open urn file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

std::string serialize_spec(const UrnSpec& spec) {
  json doc;
  doc["colors"] = spec.colors;
  doc["activities"] = from_vector(spec.activities);
  doc["initial"] = from_vector(spec.initial);
  json laws = json::array();
  for (const auto& law : spec.replacements) {
    if (law.deterministic && law.atoms.size() == 1) {
      laws.push_back(json{{"deterministic", from_vector(law.atoms.front().vector)}});
    } else {
      json atoms = json::array();
      for (const auto& atom : law.atoms) atoms.push_back(json{{"p", atom.probability}, {"v", from_vector(atom.vector)}});
      laws.push_back(json{{"atoms", atoms}});
    }
  }
  doc["replacements"] = laws;
  return doc.dump(2) + "\n";
}

std::uint64_t spec_digest(const UrnSpec& spec) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : serialize_spec(spec)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string spec_digest_hex(const UrnSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(spec_digest(spec)));
  return buf;
}

}  // namespace polya
