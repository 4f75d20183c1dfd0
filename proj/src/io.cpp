#include "hitstat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hitstat {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string chain_to_json(const ChainSpec& chain) {
  std::ostringstream os;
  os << "{\n  \"n\": " << chain.n << ",\n  \"states\": [";
  for (int i = 0; i < chain.n; ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(chain.states[static_cast<std::size_t>(i)]) << '"';
  }
  os << "],\n  \"rows\": [\n";
  for (int i = 0; i < chain.n; ++i) {
    os << "    [";
    const auto& row = chain.rows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ", ";
      os << '[' << row[k].j << ", " << fmt17(row[k].p) << ']';
    }
    os << ']' << (i + 1 < chain.n ? "," : "") << '\n';
  }
  os << "  ],\n  \"metadata\": {";
  bool first = true;
  for (const auto& [k, v] : chain.metadata) {
    if (!first) os << ", ";
    first = false;
    os << '"' << json_escape(k) << "\": \"" << json_escape(v) << '"';
  }
  os << "}\n}\n";
  return os.str();
}

ChainSpec chain_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ChainSpec c;
  c.n = j.at("n").get<int>();
  c.states = j.at("states").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    std::vector<Entry> entries;
    for (const auto& e : row)
      entries.push_back({e.at(0).get<int>(), e.at(1).get<double>()});
    c.rows.push_back(std::move(entries));
  }
  if (j.contains("metadata"))
    for (const auto& [k, v] : j.at("metadata").items()) c.metadata[k] = v.get<std::string>();
  return validate(std::move(c));
}

ChainSpec load_chain(const std::string& path) { return chain_from_json(read_file(path)); }

void save_chain(const ChainSpec& chain, const std::string& path) {
  write_file(path, chain_to_json(chain));
}

std::string pmf_to_csv(const HittingPmf& pmf) {
  std::ostringstream os;
  os << "t,p,tail_flag\n";
  for (long t = 0; t <= pmf.horizon; ++t)
    os << t << ',' << fmt17(pmf.pmf[static_cast<std::size_t>(t)]) << ",0\n";
  os << (pmf.horizon + 1) << ',' << fmt17(pmf.tail) << ",1\n";
  return os.str();
}

std::string surprise_to_csv(const SurprisePmf& pmf) {
  std::ostringstream os;
  os << "t,s\n";
  for (long t = 1; t <= pmf.horizon; ++t)
    os << t << ',' << fmt17(pmf.s[static_cast<std::size_t>(t)]) << '\n';
  return os.str();
}

std::string pmf_to_json(const HittingPmf& pmf) {
  std::ostringstream os;
  os << "{\"x\": " << pmf.x << ", \"y\": " << pmf.y << ", \"horizon\": " << pmf.horizon
     << ", \"pmf\": [";
  for (long t = 0; t <= pmf.horizon; ++t)
    os << (t ? ", " : "") << fmt17(pmf.pmf[static_cast<std::size_t>(t)]);
  os << "], \"tail\": " << fmt17(pmf.tail) << "}\n";
  return os.str();
}

std::string surprise_to_json(const SurprisePmf& pmf) {
  std::ostringstream os;
  os << "{\"x\": " << pmf.x << ", \"horizon\": " << pmf.horizon << ", \"s\": [";
  for (long t = 1; t <= pmf.horizon; ++t)
    os << (t > 1 ? ", " : "") << fmt17(pmf.s[static_cast<std::size_t>(t)]);
  os << "]}\n";
  return os.str();
}

std::string moments_to_json(const MomentEstimate& est) {
  std::ostringstream os;
  os << "{\"mean\": " << fmt17(est.mean) << ", \"variance\": " << fmt17(est.variance)
     << ", \"samples\": " << est.samples << ", \"ci95_mean\": " << fmt17(est.ci95_mean)
     << ", \"seed\": " << est.seed << "}\n";
  return os.str();
}

std::string spectrum_to_json(const KilledSpectrum& spectrum) {
  std::ostringstream os;
  os << "{\"terms\": [";
  for (std::size_t i = 0; i < spectrum.terms.size(); ++i) {
    if (i) os << ", ";
    os << '[' << fmt17(spectrum.terms[i].first) << ", " << fmt17(spectrum.terms[i].second)
       << ']';
  }
  os << "], \"nonneg_eigen\": " << (spectrum.nonneg_eigen ? "true" : "false") << "}\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace hitstat
