#include "stam/io.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace stam {

json set_function_to_json(const SetFunction& v) {
  json values = json::object();
  for (SubsetMask s = 1; s <= v.full_set(); ++s)
    values[format_subset(s)] = v.value(s);
  return json{{"n", v.ground_size()}, {"values", values}};
}

SetFunction set_function_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("values"))
    throw std::invalid_argument("set function JSON needs 'n' and 'values'");
  const int n = j.at("n").get<int>();
  require_ground_size(n);
  const json& values = j.at("values");
  std::vector<double> vals(full_mask(n), -1.0);
  if (values.size() != vals.size())
    throw std::invalid_argument("set function JSON needs all " +
                                std::to_string(vals.size()) + " subset keys");
  for (const auto& [key, val] : values.items()) {
    const SubsetMask mask = parse_subset(key, n);
    vals[mask - 1] = val.get<double>();
  }
  return SetFunction(n, std::move(vals));
}

json partition_to_json(const FractionalPartition& beta) {
  json weights = json::object();
  if (beta.is_exact()) {
    for (const auto& [mask, r] : beta.exact)
      weights[format_subset(mask)] = to_string(r);
  } else {
    for (const auto& [mask, w] : beta.weights)
      weights[format_subset(mask)] = w;
  }
  return json{{"n", beta.n}, {"weights", weights}};
}

FractionalPartition partition_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("weights"))
    throw std::invalid_argument("partition JSON needs 'n' and 'weights'");
  const int n = j.at("n").get<int>();
  require_ground_size(n);
  FractionalPartition beta;
  beta.n = n;
  bool all_exact = true;
  for (const auto& [key, val] : j.at("weights").items()) {
    const SubsetMask mask = parse_subset(key, n);
    if (val.is_string()) {
      const Rational r = parse_rational(val.get<std::string>());
      if (r < Rational(0))
        throw std::invalid_argument("negative partition weight");
      if (r == Rational(0)) continue;
      beta.exact[mask] = r;
      beta.weights[mask] = to_double(r);
    } else {
      const double w = val.get<double>();
      if (w < 0.0) throw std::invalid_argument("negative partition weight");
      if (w == 0.0) continue;
      beta.weights[mask] = w;
      all_exact = false;
    }
  }
  if (!all_exact) beta.exact.clear();
  return beta;
}

json ensemble_to_json(const GaussianEnsemble& ens) {
  json mats = json::array();
  for (const PdMatrix& m : ens.matrices) {
    json rows = json::array();
    for (int r = 0; r < m.dim(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.dim(); ++c) row.push_back(m.mat()(r, c));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  return json{{"d", ens.d}, {"matrices", mats}};
}

GaussianEnsemble ensemble_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("matrices"))
    throw std::invalid_argument("ensemble JSON needs 'd' and 'matrices'");
  const int d = j.at("d").get<int>();
  std::vector<PdMatrix> ms;
  for (const json& rows : j.at("matrices")) {
    Eigen::MatrixXd m(d, d);
    if (static_cast<int>(rows.size()) != d)
      throw std::invalid_argument("matrix row count must equal d");
    for (int r = 0; r < d; ++r) {
      if (static_cast<int>(rows[r].size()) != d)
        throw std::invalid_argument("matrix column count must equal d");
      for (int c = 0; c < d; ++c) m(r, c) = rows[r][c].get<double>();
    }
    ms.emplace_back(std::move(m));
  }
  return GaussianEnsemble(d, std::move(ms));
}

json density_to_json(const GridDensity& f) {
  return json{{"x0", f.x0()}, {"dx", f.dx()}, {"pdf", f.pdf()}};
}

GridDensity density_from_json(const json& j) {
  if (!j.contains("x0") || !j.contains("dx") || !j.contains("pdf"))
    throw std::invalid_argument("density JSON needs 'x0', 'dx', 'pdf'");
  return GridDensity(j.at("x0").get<double>(), j.at("dx").get<double>(),
                     j.at("pdf").get<std::vector<double>>());
}

json mixture_to_json(const IntervalMixture& m) {
  json intervals = json::array();
  for (const Interval& p : m.parts())
    intervals.push_back(json{
        {"left", p.left}, {"width", p.width}, {"weight", p.weight}});
  return json{{"intervals", intervals}};
}

IntervalMixture mixture_from_json(const json& j) {
  if (!j.contains("intervals"))
    throw std::invalid_argument("mixture JSON needs 'intervals'");
  std::vector<Interval> parts;
  for (const json& p : j.at("intervals"))
    parts.push_back(Interval{p.at("left").get<double>(),
                             p.at("width").get<double>(),
                             p.at("weight").get<double>()});
  return IntervalMixture(std::move(parts));
}

namespace {

json certificate_to_json(const Certificate& cert) {
  json j = json::object();
  if (const auto* pair = std::get_if<SubsetPairCert>(&cert)) {
    j["kind"] = "subset-pair";
    j["s"] = format_subset(pair->s);
    j["t"] = format_subset(pair->t);
  } else if (const auto* local = std::get_if<LocalTripleCert>(&cert)) {
    j["kind"] = "local-triple";
    j["base"] = local->base == 0 ? "" : format_subset(local->base);
    j["i"] = local->i;
    j["j"] = local->j;
  } else if (const auto* pivot = std::get_if<PivotCert>(&cert)) {
    j["kind"] = "pivot";
    j["pivot"] = pivot->pivot;
  } else if (const auto* parts = std::get_if<PartitionCert>(&cert)) {
    j["kind"] = "partition";
    json blocks = json::array();
    for (SubsetMask p : parts->parts) blocks.push_back(format_subset(p));
    j["parts"] = blocks;
  } else if (const auto* w = std::get_if<WeightingCert>(&cert)) {
    j["kind"] = "weighting";
    json weights = json::object();
    for (const auto& [mask, val] : w->weights) {
      const auto exact = w->exact.find(mask);
      if (exact != w->exact.end())
        weights[format_subset(mask)] = exact->second;
      else
        weights[format_subset(mask)] = val;
    }
    j["weights"] = weights;
  }
  return j;
}

}  // namespace

json report_to_json(const PropertyReport& rep) {
  json j{{"property", rep.property},
         {"holds", rep.holds},
         {"margin", rep.margin}};
  j["certificate"] =
      rep.certificate ? certificate_to_json(*rep.certificate) : json(nullptr);
  if (!rep.details.empty()) j["details"] = rep.details;
  return j;
}

json stam_point_to_json(const StamPoint& p) {
  const char* prov = p.provenance == Provenance::gaussian    ? "gaussian"
                     : p.provenance == Provenance::density   ? "density"
                                                             : "synthetic";
  json j{{"dim", p.dim}, {"provenance", prov},
         {"u", set_function_to_json(p.u)}};
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

namespace {

void append_number(std::string& out, double x) {
  if (std::isfinite(x)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
  } else {
    out += "null";  // JSON has no inf/nan
  }
}

void append_json(std::string& out, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ",";
        first = false;
        out += "\n" + pad + json(key).dump() + ": ";
        append_json(out, val, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const json& val : j) {
        if (!first) out += ",";
        first = false;
        out += "\n" + pad;
        append_json(out, val, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      append_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  append_json(out, j, indent, 0);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(bytes));
  return std::string(buf);
}

}  // namespace stam
