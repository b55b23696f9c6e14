#ifndef ARVESON_REPORT_HPP
#define ARVESON_REPORT_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "arveson/classify.hpp"
#include "arveson/common.hpp"
#include "arveson/config.hpp"
#include "arveson/fourier.hpp"

namespace arveson {

using ordered_json = nlohmann::ordered_json;

// One plottable curve: rows of doubles, column layout documented in `header`
// (emitted as a '#' comment line in the CSV).
struct Curve {
  std::string kind;  // ergodic | l1 | spectrum
  std::string name;
  std::string header;
  std::vector<std::vector<double>> rows;
};

struct SuiteReport {
  ordered_json doc;
  bool pass = true;
  std::vector<std::string> failing;  // ids of failing checks

  void add_check(ordered_json& section, const std::string& id, bool ok,
                 ordered_json numerics = ordered_json::object()) {
    ordered_json chk;
    chk["id"] = id;
    chk["verdict"] = ok ? "PASS" : "FAIL";
    for (auto& [k, v] : numerics.items()) chk[k] = v;
    section["checks"].push_back(std::move(chk));
    if (!ok) {
      pass = false;
      failing.push_back(id);
    }
  }
  void add_curve(const Curve& c) {
    ordered_json j;
    j["kind"] = c.kind;
    j["name"] = c.name;
    j["header"] = c.header;
    ordered_json rows = ordered_json::array();
    for (const auto& r : c.rows) rows.push_back(r);
    j["rows"] = std::move(rows);
    doc["curves"].push_back(std::move(j));
  }
};

// ---------------------------------------------------------------------------
// JSON projections of the numeric result types
// ---------------------------------------------------------------------------

inline ordered_json support_json(const SupportSet& sp) {
  ordered_json out;
  out["cell"] = sp.cell;
  ordered_json boxes = ordered_json::array();
  for (const auto& b : sp.boxes) {
    ordered_json bj;
    bj["lo"] = b.lo;
    bj["hi"] = b.hi;
    boxes.push_back(std::move(bj));
  }
  out["boxes"] = std::move(boxes);
  return out;
}

inline ordered_json point_masses_json(const PointMassMap& pm) {
  ordered_json out = ordered_json::array();
  for (const auto& [q, c] : pm) {
    ordered_json e;
    e["q"] = q;
    e["re"] = c.real();
    e["im"] = c.imag();
    out.push_back(std::move(e));
  }
  return out;
}

inline ordered_json classification_json(const Classification& cls) {
  ordered_json out;
  out["label"] = cls.label;
  out["type"] = to_string(cls.type);
  out["in_continuous"] = cls.in_continuous;
  out["point_masses"] = point_masses_json(cls.point_masses);
  ordered_json curve = ordered_json::array();
  for (const auto& [l, v] : cls.mass_curve) {
    ordered_json e;
    e["L"] = l;
    e["mass"] = v;
    curve.push_back(std::move(e));
  }
  out["mass_curve"] = std::move(curve);
  if (!cls.notes.empty()) out["notes"] = cls.notes;
  return out;
}

// Curves distilled from a classification: the ergodic ladder of the probe
// series with the largest limit, and the windowed quadratic mass curve.
inline Curve ergodic_curve(const Classification& cls, const std::string& name) {
  const ErgodicSeries* best = nullptr;
  for (const auto& s : cls.probe_series)
    if (!best || std::abs(s.limit) > std::abs(best->limit)) best = &s;
  Curve c;
  c.kind = "ergodic";
  c.name = name;
  if (!best) {
    c.header = "L, |M_L| (no probe series)";
    return c;
  }
  c.header = "L, |M_L| at q=(";
  for (std::size_t i = 0; i < best->q.size(); ++i)
    c.header += (i ? "," : "") + format_double(best->q[i]);
  c.header += "); fitted exponent " + format_double(best->gamma);
  for (std::size_t i = 0; i < best->value.size(); ++i)
    c.rows.push_back({best->half_length[i], std::abs(best->value[i])});
  return c;
}

inline Curve mass_curve(const Classification& cls, const std::string& name) {
  Curve c;
  c.kind = "l1";
  c.name = name;
  c.header = "L, I_L (windowed quadratic Fourier mass)";
  for (const auto& [l, v] : cls.mass_curve) c.rows.push_back({l, v});
  return c;
}

inline Curve spectrum_curve(const SupportSet& sp, const std::string& name) {
  Curve c;
  c.kind = "spectrum";
  c.name = name;
  const std::size_t d = sp.cell.size();
  c.header = "per axis: lo, hi (" + std::to_string(d) + " axes)";
  for (const auto& b : sp.boxes) {
    std::vector<double> row;
    for (std::size_t a = 0; a < b.lo.size(); ++a) {
      row.push_back(b.lo[a]);
      row.push_back(b.hi[a]);
    }
    c.rows.push_back(std::move(row));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << text;
}

inline std::string report_text(const SuiteReport& rep) {
  return rep.doc.dump(2) + "\n";
}

inline std::string csv_text(const ordered_json& curve) {
  std::string out = "# " + curve.at("header").get<std::string>() + "\n";
  for (const auto& row : curve.at("rows")) {
    std::string line;
    for (const auto& v : row) {
      if (!line.empty()) line += ",";
      line += format_double(v.get<double>());
    }
    out += line + "\n";
  }
  return out;
}

inline std::string sanitize_name(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  return out;
}

// One CSV per curve of the requested kind; returns the written paths.
inline std::vector<std::string> emit_plots(const ordered_json& report,
                                           const std::string& kind,
                                           const std::filesystem::path& out_dir) {
  if (!report.contains("curves"))
    throw MissingCurve("report carries no curves");
  std::vector<std::string> written;
  for (const auto& c : report.at("curves")) {
    if (c.at("kind").get<std::string>() != kind) continue;
    const std::filesystem::path path =
        out_dir / (kind + "_" + sanitize_name(c.at("name").get<std::string>()) + ".csv");
    std::filesystem::create_directories(out_dir);
    write_text_file(path, csv_text(c));
    written.push_back(path.string());
  }
  if (written.empty())
    throw MissingCurve("report carries no curve of kind '" + kind + "'");
  return written;
}

}  // namespace arveson

#endif  // ARVESON_REPORT_HPP
